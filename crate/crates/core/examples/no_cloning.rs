// Which ensembles can a unitary copy? Only those whose members are
// pairwise identical or orthogonal.

use std::f64::consts::FRAC_1_SQRT_2;

use qinfo::cloning::{apparatus_clonability_check, clonability_check, DEFAULT_CLONE_TOL};
use qinfo::ensembles::QuantumEnsemble;
use qinfo::StateVector;

pub fn run_example() -> qinfo::Result<()> {
    let zero = StateVector::basis(2, 0)?;
    let one = StateVector::basis(2, 1)?;
    let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])?;

    let cases = [
        ("{|0>, |1>}", QuantumEnsemble::equal_weights(vec![zero.clone(), one])?),
        ("{|0>, |+>}", QuantumEnsemble::equal_weights(vec![zero, plus])?),
    ];
    for (name, e) in &cases {
        for copies in 1..=3 {
            let plain = clonability_check(e, copies, DEFAULT_CLONE_TOL)?;
            let apparatus = apparatus_clonability_check(e, copies, DEFAULT_CLONE_TOL)?;
            let worst = plain.violating_pairs.iter().map(|p| p.violation).fold(0.0, f64::max);
            println!(
                "{name} x{copies}: clonable {} (with apparatus {}), largest violation {worst:.6}",
                plain.clonable, apparatus.clonable
            );
        }
    }
    Ok(())
}

fn main() -> qinfo::Result<()> {
    run_example()
}
