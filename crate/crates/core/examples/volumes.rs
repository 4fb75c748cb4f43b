// Fubini-Study volume of projective Hilbert space and the fraction taken
// up by a resolution sphere.

use qinfo::geometry::{
    projective_volume, resolution_fraction, resolution_volume, small_angle_ratio, sphere_area, QuantumResolutionSpec,
};

pub fn run_example() -> qinfo::Result<()> {
    println!("{:>4} {:>14} {:>14} {:>12} {:>10}", "D", "V_D", "S/(2(D-1))", "dv(phi)", "fraction");
    for dim in [2, 3, 4, 8, 16] {
        let spec = QuantumResolutionSpec::new(dim, 1.0 / 32.0)?;
        println!(
            "{dim:>4} {:>14.6e} {:>14.6e} {:>12.4e} {:>10.3e}",
            projective_volume(dim)?,
            sphere_area(dim)? / (2.0 * (dim - 1) as f64),
            resolution_volume(&spec),
            resolution_fraction(&spec),
        );
    }

    let spec = QuantumResolutionSpec::new(20, 0.03)?;
    println!("\nexact / small-angle volume at D=20, phi=0.03: {:.6}", small_angle_ratio(&spec));
    Ok(())
}

fn main() -> qinfo::Result<()> {
    run_example()
}
