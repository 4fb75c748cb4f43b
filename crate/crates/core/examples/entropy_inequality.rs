// Preparation information, von Neumann entropy and the information
// returned by a measurement, for a few ensembles.

use std::f64::consts::FRAC_1_SQRT_2;

use qinfo::ensembles::{density_operator, spectral_decompose, ProbVector, QuantumEnsemble};
use qinfo::information::{excess_measurement_info, info_report, measurement_distribution, shannon_info};
use qinfo::sampling::{sample_basis, RandomStream};
use qinfo::{MeasurementBasis, StateVector};

pub fn run_example() -> qinfo::Result<()> {
    let zero = StateVector::basis(2, 0)?;
    let one = StateVector::basis(2, 1)?;
    let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])?;

    let orthogonal = QuantumEnsemble::equal_weights(vec![zero.clone(), one])?;
    let skewed = QuantumEnsemble::new(vec![zero, plus], ProbVector::new(vec![0.5, 0.5])?)?;
    for (name, e) in [("{|0>, |1>}", &orthogonal), ("{|0>, |+>}", &skewed)] {
        let r = info_report(e)?;
        println!("{name}: I = {:.6} bits, S = {:.6} bits, gap {:.6}", r.preparation_bits, r.entropy_bits, r.gap_bits);
    }

    let rho = density_operator(&skewed)?;
    let eigen = spectral_decompose(&rho)?;
    println!("\neigenvalues of rho: {:?}", eigen.eigenvalues.as_slice());

    let mut rng = RandomStream::new(7, 0);
    let bases = [
        ("computational", MeasurementBasis::computational(2)?),
        ("eigenbasis", eigen.eigenvectors.clone()),
        ("random", sample_basis(2, &mut rng)?),
    ];
    for (name, basis) in &bases {
        let q = measurement_distribution(&rho, basis)?;
        println!(
            "{name:>13}: H(q) = {:.6} bits, excess over S = {:.2e}",
            shannon_info(&q),
            excess_measurement_info(&rho, basis)?
        );
    }
    Ok(())
}

fn main() -> qinfo::Result<()> {
    run_example()
}
