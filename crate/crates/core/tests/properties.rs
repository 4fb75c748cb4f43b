use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use proptest::prelude::*;

use qinfo::cloning::{apparatus_clonability_check, clonability_check, DEFAULT_CLONE_TOL};
use qinfo::commsim::channel_report;
use qinfo::ensembles::{density_operator, spectral_decompose, uniform_quantum_ensemble, QuantumEnsemble};
use qinfo::hilbert::{fiducial_decompose, hilbert_angle, tensor};
use qinfo::information::{accessible_info_uniform, preparation_info, von_neumann_entropy};
use qinfo::sampling::{sample_pure_state, sample_unitary, RandomStream};
use qinfo::subsystems::{partial_trace, Subsystem};
use qinfo::{MeasurementBasis, StateVector, C64};

fn state(dim: usize, seed: u64) -> StateVector {
    sample_pure_state(dim, &mut RandomStream::new(seed, 0)).unwrap()
}

fn operator(dim: usize, rng: &mut RandomStream) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.uniform() - 0.5, rng.uniform() - 0.5))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn angle_is_symmetric_and_phase_blind(dim in 1usize..=8, s1: u64, s2: u64, alpha in -7.0f64..7.0) {
        let (a, b) = (state(dim, s1), state(dim, s2));
        let ab = hilbert_angle(&a, &b).unwrap();
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&ab));
        prop_assert!((ab - hilbert_angle(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((ab - hilbert_angle(&a.with_phase(alpha), &b).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn angle_is_unitarily_invariant(dim in 1usize..=8, s1: u64, s2: u64, s3: u64) {
        let (a, b) = (state(dim, s1), state(dim, s2));
        let u = sample_unitary(dim, &mut RandomStream::new(s3, 1)).unwrap();
        let before = hilbert_angle(&a, &b).unwrap();
        let after = hilbert_angle(&a.apply(&u).unwrap(), &b.apply(&u).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn fiducial_decomposition_round_trips(dim in 1usize..=8, s1: u64, s2: u64) {
        let (psi, psi0) = (state(dim, s1), state(dim, s2));
        let d = fiducial_decompose(&psi, &psi0).unwrap();
        let rebuilt = d.reconstruct(&psi0).unwrap();
        prop_assert!(rebuilt.equal_up_to_phase(&psi));
        prop_assert!((d.polar_angle - hilbert_angle(&psi, &psi0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn tensor_product_is_associative(da in 1usize..=3, db in 1usize..=3, dc in 1usize..=3, s: u64) {
        let mut rng = RandomStream::new(s, 2);
        let a = sample_pure_state(da, &mut rng).unwrap();
        let b = sample_pure_state(db, &mut rng).unwrap();
        let c = sample_pure_state(dc, &mut rng).unwrap();
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert!((left.amplitudes() - right.amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn spectral_decomposition_reconstructs(dim in 1usize..=8, count in 1usize..=10, s: u64) {
        let e = uniform_quantum_ensemble(dim, count, &mut RandomStream::new(s, 3)).unwrap();
        let rho = density_operator(&e).unwrap();
        let spectral = spectral_decompose(&rho).unwrap();
        prop_assert!((spectral.reconstruct() - rho.matrix()).norm() < 1e-9);
        let eigen = spectral.eigenvalues.as_slice();
        prop_assert!(eigen.windows(2).all(|w| w[0] >= w[1]));
        let rebuilt = density_operator(&spectral.ensemble()).unwrap();
        prop_assert!(rebuilt.frobenius_distance(&rho).unwrap() < 1e-9);
        let s_rho = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s_rho <= preparation_info(&e) + 1e-9);
        prop_assert!(s_rho <= (dim as f64).log2() + 1e-9);
    }

    #[test]
    fn partial_trace_is_linear(da in 1usize..=4, db in 1usize..=4, s: u64, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let mut rng = RandomStream::new(s, 4);
        let p = operator(da * db, &mut rng);
        let q = operator(da * db, &mut rng);
        let (cx, cy) = (C64::new(x, 0.5), C64::new(y, -1.0));
        let combined = p.map(|v| v * cx) + q.map(|v| v * cy);
        for keep in [Subsystem::A, Subsystem::B] {
            let lhs = partial_trace(&combined, (da, db), keep).unwrap();
            let rhs = partial_trace(&p, (da, db), keep).unwrap().map(|v| v * cx)
                + partial_trace(&q, (da, db), keep).unwrap().map(|v| v * cy);
            prop_assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn clone_verdict_ignores_unitaries_and_order(dim in 1usize..=4, kind in 0usize..3, s: u64, copies in 1u32..=3) {
        let mut rng = RandomStream::new(s, 5);
        let u = sample_unitary(dim, &mut rng).unwrap();
        let basis = MeasurementBasis::from_unitary_columns(&u).unwrap();
        let states: Vec<StateVector> = match kind {
            0 => basis.vectors().to_vec(),
            1 => (0..3).map(|_| sample_pure_state(dim, &mut rng).unwrap()).collect(),
            _ => vec![basis.vectors()[0].clone(), basis.vectors()[dim - 1].clone(), basis.vectors()[0].clone()],
        };
        let e = QuantumEnsemble::equal_weights(states.clone()).unwrap();
        let verdict = clonability_check(&e, copies, DEFAULT_CLONE_TOL).unwrap();

        let v = sample_unitary(dim, &mut rng).unwrap();
        let rotated = clonability_check(&e.transformed(&v).unwrap(), copies, DEFAULT_CLONE_TOL).unwrap();
        prop_assert_eq!(verdict.clonable, rotated.clonable);
        prop_assert_eq!(verdict.violating_pairs.len(), rotated.violating_pairs.len());

        let reversed = QuantumEnsemble::equal_weights(states.into_iter().rev().collect()).unwrap();
        let flipped = clonability_check(&reversed, copies, DEFAULT_CLONE_TOL).unwrap();
        prop_assert_eq!(verdict.clonable, flipped.clonable);
        prop_assert!(flipped.violating_pairs.windows(2).all(|w| (w[0].j, w[0].k) < (w[1].j, w[1].k)));

        let apparatus = apparatus_clonability_check(&e, copies, DEFAULT_CLONE_TOL).unwrap();
        prop_assert_eq!(verdict.clonable, apparatus.clonable);
    }
}

#[test]
fn phase_duplicates_split_the_two_clone_checks() {
    let zero = StateVector::basis(2, 0).unwrap();
    let e = QuantumEnsemble::equal_weights(vec![zero.clone(), zero.with_phase(FRAC_1_SQRT_2)]).unwrap();
    assert!(!clonability_check(&e, 1, DEFAULT_CLONE_TOL).unwrap().clonable);
    assert!(apparatus_clonability_check(&e, 1, DEFAULT_CLONE_TOL).unwrap().clonable);
}

#[test]
fn finite_proxy_mutual_information_approaches_accessible_information() {
    let j = accessible_info_uniform(2).unwrap();
    let basis = MeasurementBasis::computational(2).unwrap();
    let replicates = 200;
    let mut stats = Vec::new();
    for (i, count) in [4usize, 16, 64, 256].into_iter().enumerate() {
        let mut rng = RandomStream::new(77, i as u64);
        let values: Vec<f64> = (0..replicates)
            .map(|_| {
                let e = uniform_quantum_ensemble(2, count, &mut rng).unwrap();
                channel_report(&e, &basis).unwrap().mutual_info_bits
            })
            .collect();
        let mean = values.iter().sum::<f64>() / replicates as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (replicates - 1) as f64;
        stats.push((count, mean, (var / replicates as f64).sqrt()));
    }
    for &(count, mean, se) in &stats {
        assert!(mean <= j + 3.0 * se, "K={count}: mean {mean} above J={j}");
    }
    for w in stats.windows(2) {
        let ((_, m0, s0), (k1, m1, s1)) = (w[0], w[1]);
        assert!(m1 >= m0 - 3.0 * (s0 * s0 + s1 * s1).sqrt(), "K={k1}: {m1} fell below {m0}");
    }
    let (first, last) = (stats[0], stats[3]);
    assert!((j - last.1).abs() < (j - first.1).abs());
    assert!((j - last.1).abs() <= 3.0 * last.2 + 0.01);
}
