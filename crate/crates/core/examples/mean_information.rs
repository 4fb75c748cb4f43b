// Average information from measuring a random pure state, and the
// accessible information of the uniform ensemble.

use qinfo::information::{
    accessible_info_uniform, asymptotic_accessible_info, mean_measurement_info_closed, mean_measurement_info_mc,
};
use qinfo::sampling::RandomStream;

pub fn run_example() -> qinfo::Result<()> {
    let mut rng = RandomStream::new(2024, 0);
    println!("{:>8} {:>10} {:>18} {:>8}", "D", "H_bar", "Monte Carlo", "J");
    for dim in [2, 3, 5, 16] {
        let mc = mean_measurement_info_mc(dim, 20_000, &mut rng)?;
        println!(
            "{dim:>8} {:>10.6} {:>10.6} +- {:.4} {:>8.6}",
            mc.closed_form_bits,
            mc.mc_estimate_bits.unwrap_or(f64::NAN),
            mc.mc_stderr_bits.unwrap_or(f64::NAN),
            accessible_info_uniform(dim)?,
        );
    }
    for dim in [1_000, 1_000_000] {
        println!(
            "{dim:>8} {:>10.4} {:>18} {:>8.6}",
            mean_measurement_info_closed(dim)?,
            "",
            accessible_info_uniform(dim)?
        );
    }
    println!("large-D limit of J: {:.6} bits", asymptotic_accessible_info());
    Ok(())
}

fn main() -> qinfo::Result<()> {
    run_example()
}
