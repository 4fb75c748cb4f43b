//! One-shot reproduction of the reference numbers, each checked against a
//! fixed tolerance.
//!
//! [`run`] evaluates ten groups of gates (closed forms, Monte Carlo
//! agreement, geometry, the running `D = 16` example, property suites,
//! subsystem spectra, cloning verdicts and sequence counting) and returns a
//! [`PaperTable`] whose `passed` flag is the conjunction of all gates.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::time::Instant;

use serde::Serialize;

use crate::cloning::{apparatus_clonability_check, clonability_check, DEFAULT_CLONE_TOL};
use crate::commsim::{channel_experiment, ChannelReport};
use crate::ensembles::{density_operator, spectral_decompose, ProbVector, QuantumEnsemble};
use crate::error::Result;
use crate::geometry::{
    classical_vs_quantum_counts, projective_volume, quantum_microstate_bits, sphere_area, QuantumResolutionSpec,
};
use crate::hilbert::{hilbert_angle, StateVector};
use crate::information::{
    accessible_info_uniform, asymptotic_accessible_info, double_stochastic_matrix, excess_measurement_info,
    gibbs_sequence_bits, info_report, mean_measurement_info_closed, mean_measurement_info_mc, shannon_info,
    von_neumann_entropy,
};
use crate::sampling::{sample_basis, sample_pure_state, RandomStream};
use crate::subsystems::{marginal_density, schmidt_decompose, BipartiteState, Subsystem};

/// Asymptotic Kolmogorov-Smirnov critical coefficient at the 1% level.
pub const KS_CRITICAL_1PCT: f64 = 1.6276;

/// One gate: `value` must satisfy the comparison described by `rule`.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub rule: String,
    pub passed: bool,
}

impl Check {
    fn near(criterion: u8, name: &str, value: f64, expected: f64, tol: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            value,
            expected: Some(expected),
            rule: if tol == 0.0 { "value == expected".into() } else { format!("|value - expected| <= {tol:e}") },
            passed: (value - expected).abs() <= tol,
        }
    }

    fn at_most(criterion: u8, name: &str, value: f64, bound: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            value,
            expected: None,
            rule: format!("value <= {bound:e}"),
            passed: value <= bound,
        }
    }

    fn holds(criterion: u8, name: &str, ok: bool) -> Self {
        Self {
            criterion,
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            expected: Some(1.0),
            rule: "holds".into(),
            passed: ok,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperTable {
    pub seed: u64,
    #[serde(rename = "all_passed")]
    pub passed: bool,
    /// Wall-clock time; left out of the serialized table so repeated runs
    /// produce identical output.
    #[serde(skip)]
    pub elapsed_seconds: f64,
    pub checks: Vec<Check>,
}

/// Runs every gate. `seed` drives all random parts; each group uses its own
/// stream.
pub fn run(seed: u64) -> Result<PaperTable> {
    let start = Instant::now();
    let mut checks = Vec::new();
    checks.extend(closed_forms()?);
    checks.extend(accessible()?);
    checks.extend(monte_carlo(seed)?);
    checks.extend(geometry(seed)?);
    checks.extend(running_example()?);
    checks.extend(inequality_suites(seed)?);
    checks.extend(subsystem_spectra(seed)?);
    checks.extend(cloning(seed)?);
    checks.extend(gibbs()?);
    Ok(PaperTable {
        seed,
        passed: checks.iter().all(|c| c.passed),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        checks,
    })
}

fn closed_forms() -> Result<Vec<Check>> {
    let start = Instant::now();
    let h2 = mean_measurement_info_closed(2)?;
    let h3 = mean_measurement_info_closed(3)?;
    let micros = start.elapsed().as_secs_f64() * 1e6;
    Ok(vec![
        Check::near(1, "H_bar(2) = 1/(2 ln 2) bits", h2, 0.721, 1e-3),
        Check::near(1, "H_bar(2) identity 1/(2 ln 2)", h2, 1.0 / (2.0 * LN_2), 1e-12),
        Check::near(1, "H_bar(3) = 5/(6 ln 2) bits", h3, 1.202, 1e-3),
        Check::near(1, "H_bar(3) identity 5/(6 ln 2)", h3, 5.0 / (6.0 * LN_2), 1e-12),
        Check::holds(1, "closed-form runtime under 1 ms", micros < 1000.0),
    ])
}

fn accessible() -> Result<Vec<Check>> {
    let big = 1_000_000;
    let asym = asymptotic_accessible_info();
    Ok(vec![
        Check::near(2, "J(2) bits", accessible_info_uniform(2)?, 0.279, 1e-3),
        Check::near(2, "J(3) bits", accessible_info_uniform(3)?, 0.383, 1e-3),
        Check::near(2, "(1 - gamma)/ln 2 bits", asym, 0.60995, 1e-5),
        Check::near(2, "J(10^6) against the asymptote", accessible_info_uniform(big)?, 0.60995, 1e-4),
        Check::near(
            2,
            "H_bar(10^6) against log2 D - 0.60995",
            mean_measurement_info_closed(big)?,
            (big as f64).log2() - 0.60995,
            1e-4,
        ),
        Check::holds(2, "J(10^6) below the asymptote", accessible_info_uniform(big)? < asym),
    ])
}

fn monte_carlo(seed: u64) -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (i, dim) in [2usize, 3, 5].into_iter().enumerate() {
        let mut rng = RandomStream::new(seed, 30 + i as u64);
        let r = mean_measurement_info_mc(dim, 100_000, &mut rng)?;
        checks.push(Check::at_most(
            3,
            &format!("|MC - closed| / stderr, D={dim}, 1e5 samples"),
            r.z_score().unwrap_or(f64::INFINITY).abs(),
            4.0,
        ));
    }
    checks.push(Check::holds(3, "Monte Carlo runtime under 10 s", start.elapsed().as_secs_f64() < 10.0));
    Ok(checks)
}

/// Largest relative gap between `V_D` and `S_{2D-3} / (2(D-1))`.
fn volume_identity_error() -> Result<f64> {
    let mut worst = 0.0f64;
    for dim in 2..=100 {
        let v = projective_volume(dim)?;
        let s = sphere_area(dim)? / (2.0 * (dim - 1) as f64);
        worst = worst.max(((v - s) / v).abs());
    }
    Ok(worst)
}

/// Kolmogorov-Smirnov distance between sampled Hilbert-space angles from a
/// fixed fiducial and the CDF `sin(x)^{2(D-1)}`.
pub fn angle_ks_statistic(dim: usize, samples: usize, rng: &mut RandomStream) -> Result<f64> {
    let fiducial = StateVector::basis(dim, 0)?;
    let mut angles =
        (0..samples).map(|_| hilbert_angle(&fiducial, &sample_pure_state(dim, rng)?)).collect::<Result<Vec<_>>>()?;
    angles.sort_by(f64::total_cmp);
    let n = samples as f64;
    let exponent = 2.0 * (dim - 1) as f64;
    Ok(angles
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = x.sin().powf(exponent);
            (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max))
}

fn geometry(seed: u64) -> Result<Vec<Check>> {
    let samples = 100_000;
    let ks = angle_ks_statistic(3, samples, &mut RandomStream::new(seed, 40))?;
    Ok(vec![
        Check::at_most(4, "max relative |V_D - S_{2D-3}/(2(D-1))|, D=2..100", volume_identity_error()?, 1e-12),
        Check::at_most(
            4,
            "KS distance of angle CDF vs sin^4, D=3, 1e5 samples",
            ks,
            KS_CRITICAL_1PCT / (samples as f64).sqrt(),
        ),
    ])
}

fn running_example() -> Result<Vec<Check>> {
    let spec = QuantumResolutionSpec::from_bits_per_amplitude(16, 10.0)?;
    let counts = classical_vs_quantum_counts(16, 10.0)?;
    Ok(vec![
        Check::near(
            5,
            "preparation information, D=16 at 10 bits/amplitude",
            quantum_microstate_bits(&spec),
            150.0,
            0.0,
        ),
        Check::near(5, "quantum count comparison bits", counts.quantum_bits, 150.0, 0.0),
        Check::near(5, "classical capacity log2 D", counts.classical_bits, 4.0, 0.0),
        Check::near(
            5,
            "resolution angle for 10 bits/amplitude (degrees)",
            spec.resolution_angle().to_degrees(),
            1.79,
            0.01,
        ),
    ])
}

/// A random ensemble in `D <= 8` with up to 16 members. Every fourth case is
/// built from orthogonal basis vectors.
pub fn random_ensemble(rng: &mut RandomStream) -> Result<(QuantumEnsemble, bool)> {
    let dim = 1 + (rng.uniform() * 8.0) as usize;
    let orthogonal = rng.uniform() < 0.25;
    let count =
        if orthogonal { 1 + (rng.uniform() * dim as f64) as usize } else { 1 + (rng.uniform() * 16.0) as usize };
    let states = if orthogonal {
        sample_basis(dim, rng)?.vectors()[..count].to_vec()
    } else {
        (0..count).map(|_| sample_pure_state(dim, rng)).collect::<Result<Vec<_>>>()?
    };
    let weights = (0..count).map(|_| rng.uniform() + 1e-3).collect();
    Ok((QuantumEnsemble::new(states, ProbVector::from_weights(weights)?)?, orthogonal))
}

fn inequality_suites(seed: u64) -> Result<Vec<Check>> {
    let cases = 1000;
    let mut rng = RandomStream::new(seed, 60);
    let mut worst_excess = f64::INFINITY;
    let mut worst_eigen_gap = 0.0f64;
    let mut worst_gap = f64::INFINITY;
    let mut worst_orth_gap = 0.0f64;
    let mut worst_stochastic = 0.0f64;
    let mut worst_mi_exact = f64::NEG_INFINITY;
    let mut worst_mi_sampled = f64::NEG_INFINITY;

    for _ in 0..cases {
        let (e, orthogonal) = random_ensemble(&mut rng)?;
        let dim = e.dim();
        let rho = density_operator(&e)?;
        let basis = sample_basis(dim, &mut rng)?;
        worst_excess = worst_excess.min(excess_measurement_info(&rho, &basis)?);
        let eigen = spectral_decompose(&rho)?.eigenvectors;
        worst_eigen_gap = worst_eigen_gap.max(excess_measurement_info(&rho, &eigen)?.abs());

        let report = info_report(&e)?;
        worst_gap = worst_gap.min(report.gap_bits);
        if orthogonal {
            worst_orth_gap = worst_orth_gap.max(report.gap_bits.abs());
        }

        let other = sample_basis(dim, &mut rng)?;
        let m = double_stochastic_matrix(&basis, &other)?;
        for i in 0..dim {
            worst_stochastic = worst_stochastic.max((m.row(i).sum() - 1.0).abs()).max((m.column(i).sum() - 1.0).abs());
        }

        let (channel, _) = channel_experiment(&e, &basis, 200, &mut rng)?;
        channel.check()?;
        worst_mi_exact = worst_mi_exact.max(channel.mutual_info_bits - channel.preparation_bits);
        worst_mi_sampled = worst_mi_sampled.max(sampled_excess(&channel));
    }
    Ok(vec![
        Check::holds(6, "H(q) >= S(rho) - 1e-9 over 1000 random pairs", worst_excess >= -1e-9),
        Check::at_most(6, "max |H(q) - S(rho)| in the eigenbasis", worst_eigen_gap, 1e-9),
        Check::holds(6, "I >= S - 1e-9 over 1000 random ensembles", worst_gap >= -1e-9),
        Check::at_most(6, "max |I - S| for orthogonal ensembles", worst_orth_gap, 1e-9),
        Check::at_most(6, "max double-stochastic row/column deviation", worst_stochastic, 1e-9),
        Check::at_most(6, "max exact MI - I over 1000 channels", worst_mi_exact, 1e-9),
        Check::at_most(6, "max sampled MI - sampled input entropy", worst_mi_sampled, 1e-9),
    ])
}

fn sampled_excess(report: &ChannelReport) -> f64 {
    report
        .sampled
        .map(|s| s.decomposition.mutual_info_bits - s.decomposition.input_entropy_bits)
        .unwrap_or(f64::NEG_INFINITY)
}

fn subsystem_spectra(seed: u64) -> Result<Vec<Check>> {
    let mut rng = RandomStream::new(seed, 70);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let da = 1 + (rng.uniform() * 6.0) as usize;
        let db = 1 + (rng.uniform() * 6.0) as usize;
        let s = BipartiteState::new(sample_pure_state(da * db, &mut rng)?, da, db)?;
        let schmidt = schmidt_decompose(&s)?;
        for keep in [Subsystem::A, Subsystem::B] {
            let spectrum = spectral_decompose(&marginal_density(&s, keep)?)?.eigenvalues;
            for (m, &l) in spectrum.as_slice().iter().enumerate() {
                let expected = schmidt.coefficients.as_slice().get(m).copied().unwrap_or(0.0);
                worst = worst.max((l - expected).abs());
            }
        }
    }
    let bell = BipartiteState::new(StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])?, 2, 2)?;
    let lambda = schmidt_decompose(&bell)?.coefficients;
    let entropy = von_neumann_entropy(&marginal_density(&bell, Subsystem::A)?)?;
    Ok(vec![
        Check::at_most(7, "max |Schmidt - marginal spectra|, 100 states up to (6,6)", worst, 1e-9),
        Check::near(7, "Bell lambda_1", lambda.get(0), 0.5, 1e-12),
        Check::near(7, "Bell lambda_2", lambda.get(1), 0.5, 1e-12),
        Check::near(7, "Bell marginal entropy (bits)", entropy, 1.0, 0.0),
    ])
}

fn cloning(seed: u64) -> Result<Vec<Check>> {
    let zero = StateVector::basis(2, 0)?;
    let one = StateVector::basis(2, 1)?;
    let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])?;
    let orth = clonability_check(&QuantumEnsemble::equal_weights(vec![zero.clone(), one])?, 1, DEFAULT_CLONE_TOL)?;
    let non = clonability_check(&QuantumEnsemble::equal_weights(vec![zero, plus])?, 1, DEFAULT_CLONE_TOL)?;
    let violation = non.violating_pairs.first().map(|p| p.violation).unwrap_or(0.0);

    let mut rng = RandomStream::new(seed, 80);
    let mut agree = true;
    let mut clonable_seen = 0;
    for _ in 0..500 {
        let e = random_cloning_ensemble(&mut rng)?;
        let copies = 1 + (rng.uniform() * 3.0) as u32;
        let plain = clonability_check(&e, copies, DEFAULT_CLONE_TOL)?;
        let apparatus = apparatus_clonability_check(&e, copies, DEFAULT_CLONE_TOL)?;
        agree &= plain.clonable == apparatus.clonable;
        clonable_seen += plain.clonable as usize;
    }
    Ok(vec![
        Check::holds(8, "{|0>, |1>} clonable", orth.clonable),
        Check::holds(8, "{|0>, |+>} not clonable", !non.clonable),
        Check::near(8, "{|0>, |+>} violation", violation, FRAC_1_SQRT_2 - 0.5, 1e-6),
        Check::holds(8, "apparatus verdicts identical on 500 random ensembles", agree),
        Check::holds(8, "random suite includes clonable ensembles", clonable_seen > 0),
    ])
}

/// Random ensembles in `D <= 4` for the cloning comparison: orthogonal
/// subsets of a random basis, generic random states, or basis vectors with
/// exact repeats.
pub fn random_cloning_ensemble(rng: &mut RandomStream) -> Result<QuantumEnsemble> {
    let dim = 1 + (rng.uniform() * 4.0) as usize;
    let basis = sample_basis(dim, rng)?;
    let kind = (rng.uniform() * 3.0) as usize;
    let states: Vec<StateVector> = match kind {
        0 => basis.vectors()[..1 + (rng.uniform() * dim as f64) as usize].to_vec(),
        1 => (0..2 + (rng.uniform() * 3.0) as usize).map(|_| sample_pure_state(dim, rng)).collect::<Result<_>>()?,
        _ => (0..2 + (rng.uniform() * 4.0) as usize)
            .map(|_| basis.vectors()[(rng.uniform() * dim as f64) as usize].clone())
            .collect(),
    };
    QuantumEnsemble::equal_weights(states)
}

fn gibbs() -> Result<Vec<Check>> {
    let p = ProbVector::new(vec![0.5, 0.25, 0.25])?;
    let h = shannon_info(&p);
    let per_letter = gibbs_sequence_bits(1000, &p)? / 1000.0;
    let mut bound_holds = true;
    for n in [4u64, 8, 100, 1000, 10_000] {
        bound_holds &= gibbs_sequence_bits(n, &p)? <= n as f64 * h;
    }
    for (n, probs) in [(10u64, vec![0.5, 0.5]), (10, vec![0.1, 0.2, 0.3, 0.4]), (60, vec![1.0 / 3.0; 3])] {
        let q = ProbVector::new(probs)?;
        bound_holds &= gibbs_sequence_bits(n, &q)? <= n as f64 * shannon_info(&q);
    }
    Ok(vec![
        Check::near(9, "log2(N)/N at N=1000, p=(1/2,1/4,1/4)", per_letter, h, 0.02),
        Check::holds(9, "log2 N <= N H on the test grid", bound_holds),
    ])
}
