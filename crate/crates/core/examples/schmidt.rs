// Schmidt decomposition of bipartite pure states and the entropy of the
// marginals.

use std::f64::consts::FRAC_1_SQRT_2;

use qinfo::information::{shannon_info, von_neumann_entropy};
use qinfo::sampling::{sample_pure_state, RandomStream};
use qinfo::subsystems::{marginal_density, schmidt_decompose, BipartiteState, Subsystem};
use qinfo::StateVector;

fn describe(name: &str, s: &BipartiteState) -> qinfo::Result<()> {
    let schmidt = schmidt_decompose(s)?;
    let s_a = von_neumann_entropy(&marginal_density(s, Subsystem::A)?)?;
    let s_b = von_neumann_entropy(&marginal_density(s, Subsystem::B)?)?;
    let lambdas: Vec<String> = schmidt.coefficients.as_slice().iter().map(|l| format!("{l:.4}")).collect();
    println!("{name}: lambda = [{}]", lambdas.join(", "));
    println!(
        "    rank {}, H(lambda) = {:.6}, S(A) = {:.6}, S(B) = {:.6}",
        schmidt.rank(1e-12),
        shannon_info(&schmidt.coefficients),
        s_a,
        s_b
    );
    Ok(())
}

pub fn run_example() -> qinfo::Result<()> {
    let bell = StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])?;
    describe("Bell state", &BipartiteState::new(bell, 2, 2)?)?;

    let product = StateVector::from_real(&[0.6, 0.8, 0.0, 0.0, 0.0, 0.0])?;
    describe("product state (2 x 3)", &BipartiteState::new(product, 2, 3)?)?;

    let mut rng = RandomStream::new(11, 0);
    let random = sample_pure_state(12, &mut rng)?;
    describe("random state (3 x 4)", &BipartiteState::new(random, 3, 4)?)?;
    Ok(())
}

fn main() -> qinfo::Result<()> {
    run_example()
}
