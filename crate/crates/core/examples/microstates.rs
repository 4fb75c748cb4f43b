// Four qubits, amplitudes known to 10 bits each: how many bits does it
// take to pick one state vector, and how many can a measurement return?

use qinfo::geometry::{classical_microstate_bits, classical_vs_quantum_counts, PhaseSpaceSpec, QuantumResolutionSpec};

pub fn run_example() -> qinfo::Result<()> {
    let dim = 16;
    let spec = QuantumResolutionSpec::from_bits_per_amplitude(dim, 10.0)?;
    let counts = classical_vs_quantum_counts(dim, spec.bits_per_amplitude())?;
    println!("D = {dim}, resolution angle {:.3} degrees", spec.resolution_angle().to_degrees());
    println!("bits to specify a state vector: {}", counts.quantum_bits);
    println!("bits a measurement can return:  {}", counts.classical_bits);

    for bits in [1.0, 2.0, 10.0] {
        let c = classical_vs_quantum_counts(2, bits)?;
        println!("qubit at {bits:>4} bits/amplitude: {:>5} quantum vs {} classical", c.quantum_bits, c.classical_bits);
    }

    let phase_space = PhaseSpaceSpec::from_ratio(3, 1024.0)?;
    println!("\nthree classical degrees of freedom, A/h = 1024: {} bits", classical_microstate_bits(&phase_space));
    Ok(())
}

fn main() -> qinfo::Result<()> {
    run_example()
}
