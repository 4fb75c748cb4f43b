// Sending classical messages through quantum states: prepare a member of
// an ensemble, measure it, and see how much of the preparation survives.

use std::f64::consts::FRAC_1_SQRT_2;

use qinfo::commsim::{channel_experiment, run_experiment, uniform_ensemble_experiment, ExperimentConfig};
use qinfo::ensembles::QuantumEnsemble;
use qinfo::sampling::RandomStream;
use qinfo::{MeasurementBasis, StateVector};

pub fn run_example() -> qinfo::Result<()> {
    let mut rng = RandomStream::new(5, 0);
    let zero = StateVector::basis(2, 0)?;
    let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])?;
    let e = QuantumEnsemble::equal_weights(vec![zero, plus])?;
    let (report, counts) = channel_experiment(&e, &MeasurementBasis::computational(2)?, 10_000, &mut rng)?;
    report.check()?;
    println!(
        "{{|0>, |+>}} in the computational basis: MI = {:.4} bits, I = {}, S = {:.4}",
        report.mutual_info_bits, report.preparation_bits, report.vn_entropy_bits
    );
    let mut csv = Vec::new();
    counts.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));

    for dim in [2, 3, 5] {
        let r = uniform_ensemble_experiment(dim, 20_000, &mut rng)?;
        println!(
            "uniform ensemble D={dim}: MI = {:.4} +- {:.4} bits, J = {:.4}",
            r.mutual_info_bits,
            r.stderr_bits.unwrap_or(f64::NAN),
            r.accessible_closed_bits.unwrap_or(f64::NAN)
        );
    }

    let config = ExperimentConfig::from_json(
        r#"{"ensemble": "uniform", "dim": 4, "basis": "random", "trials": 5000, "seed": 1}"#,
    )?;
    let out = run_experiment(&config)?;
    println!("configured run, random basis D=4: MI = {:.4} bits", out.report.mutual_info_bits);
    Ok(())
}

fn main() -> qinfo::Result<()> {
    run_example()
}
