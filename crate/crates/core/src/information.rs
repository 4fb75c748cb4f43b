//! Information measures, all in bits: Gibbs-Shannon information, sequence
//! counting for Gibbs ensembles, preparation information, von Neumann
//! entropy, measurement statistics, and the mean measurement information and
//! accessible information of the uniform ensemble.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::ensembles::{density_operator, spectral_decompose, DensityOperator, Ensemble, ProbVector, QuantumEnsemble};
use crate::error::{Error, Result};
use crate::geometry::nats_to_bits;
use crate::hilbert::{MeasurementBasis, StateVector};
use crate::sampling::{map_chunks, sample_pure_state, RandomStream};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.5772156649;

/// Closed-form and Monte Carlo results must agree within this many standard
/// errors.
pub const MC_SIGMA_GATE: f64 = 4.0;

/// `(1 - gamma) / ln 2`, the large-`D` limit of the accessible information of
/// the uniform ensemble, and the gap `log2 D - H_bar` as `D -> infinity`.
pub fn asymptotic_accessible_info() -> f64 {
    (1.0 - EULER_GAMMA) / LN_2
}

/// `p log2 p` with `0 log 0 = 0`.
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

pub(crate) fn entropy_of(probs: &[f64]) -> f64 {
    -probs.iter().copied().map(plogp).sum::<f64>()
}

/// Gibbs-Shannon information `H = -sum_j p_j log2 p_j`.
pub fn shannon_info(p: &ProbVector) -> f64 {
    entropy_of(p.as_slice()).max(0.0)
}

/// `log2` of the multinomial count `N! / prod_j (N p_j)!` of length-`N`
/// sequences with occupation numbers `N p_j`.
pub fn gibbs_sequence_bits(n: u64, p: &ProbVector) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("sequence length must be positive".into()));
    }
    let mut occupations = Vec::with_capacity(p.len());
    for (index, &pj) in p.as_slice().iter().enumerate() {
        let value = n as f64 * pj;
        let occupation = value.round();
        if (value - occupation).abs() > 1e-6 {
            return Err(Error::NonIntegerOccupation { index, value });
        }
        occupations.push(occupation);
    }
    if occupations.contains(&(n as f64)) {
        return Ok(0.0);
    }
    let ln_count = occupations.iter().fold(ln_gamma(n as f64 + 1.0), |acc, &k| acc - ln_gamma(k + 1.0));
    Ok(nats_to_bits(ln_count).max(0.0))
}

/// Preparation information `I = H(p)`: the information needed to pick one
/// microstate out of the ensemble.
pub fn preparation_info(e: &impl Ensemble) -> f64 {
    shannon_info(e.probabilities())
}

/// For a classical ensemble the missing information is the same quantity as
/// the preparation information.
pub fn missing_information(e: &crate::ensembles::ClassicalEnsemble) -> f64 {
    preparation_info(e)
}

/// `S(rho) = -tr(rho log2 rho)`, from the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    Ok(shannon_info(&spectral_decompose(rho)?.eigenvalues))
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Outcome probabilities `q_n = <n|rho|n>` of a pure von Neumann measurement.
pub fn measurement_distribution(rho: &DensityOperator, basis: &MeasurementBasis) -> Result<ProbVector> {
    check_dims(rho.dim(), basis.dim())?;
    let q = basis.vectors().iter().map(|n| rho.expectation(n)).collect::<Result<Vec<_>>>()?;
    ProbVector::from_nearly_normalized(q, 1e-12)
}

/// `H = -sum_n |<n|psi>|^2 log2 |<n|psi>|^2`, the information gained by
/// measuring a known pure state.
pub fn measurement_info_given_state(psi: &StateVector, basis: &MeasurementBasis) -> Result<f64> {
    check_dims(psi.dim(), basis.dim())?;
    let probs: Vec<f64> = basis.vectors().iter().map(|n| n.amplitudes().dotc(psi.amplitudes()).norm_sqr()).collect();
    Ok(entropy_of(&probs).max(0.0))
}

/// Entries `|<a_n|b_m>|^2`, row `n`, column `m`. Every row and column sums
/// to one.
pub fn double_stochastic_matrix(a: &MeasurementBasis, b: &MeasurementBasis) -> Result<DMatrix<f64>> {
    check_dims(a.dim(), b.dim())?;
    let dim = a.dim();
    Ok(DMatrix::from_fn(dim, dim, |n, m| a.vectors()[n].amplitudes().dotc(b.vectors()[m].amplitudes()).norm_sqr()))
}

/// `H(q) - S(rho)`: nonnegative, and zero exactly when `basis` is an
/// eigenbasis of `rho`.
pub fn excess_measurement_info(rho: &DensityOperator, basis: &MeasurementBasis) -> Result<f64> {
    let q = measurement_distribution(rho, basis)?;
    Ok(shannon_info(&q) - von_neumann_entropy(rho)?)
}

/// Preparation information against von Neumann entropy for one ensemble.
#[derive(Clone, Debug, Serialize)]
pub struct InfoReport {
    pub context: String,
    pub preparation_bits: f64,
    pub entropy_bits: f64,
    pub gap_bits: f64,
}

/// `I = H(p) >= S(rho)`, with equality iff the members of nonzero
/// probability are mutually orthogonal.
pub fn info_report(e: &QuantumEnsemble) -> Result<InfoReport> {
    let preparation_bits = preparation_info(e);
    let entropy_bits = von_neumann_entropy(&density_operator(e)?)?;
    let gap_bits = preparation_bits - entropy_bits;
    if gap_bits < -1e-9 {
        return Err(Error::Numerical(format!("preparation information below entropy by {}", -gap_bits)));
    }
    Ok(InfoReport { context: format!("{} states in D={}", e.len(), e.dim()), preparation_bits, entropy_bits, gap_bits })
}

fn require_dim_two(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "needs D >= 2" });
    }
    Ok(())
}

/// Mean information `H_bar = (1/ln 2) sum_{k=2}^{D} 1/k` from a pure von
/// Neumann measurement on a uniformly random state.
pub fn mean_measurement_info_closed(dim: usize) -> Result<f64> {
    require_dim_two(dim)?;
    // smallest terms first
    let partial: f64 = (2..=dim).rev().map(|k| 1.0 / k as f64).sum();
    Ok(partial / LN_2)
}

/// Accessible information of the uniform ensemble, `J = log2 D - H_bar`.
pub fn accessible_info_uniform(dim: usize) -> Result<f64> {
    Ok((dim as f64).log2() - mean_measurement_info_closed(dim)?)
}

/// Closed form next to an optional Monte Carlo estimate.
#[derive(Clone, Debug, Serialize)]
pub struct MeanInfoResult {
    pub dim: usize,
    pub closed_form_bits: f64,
    pub mc_estimate_bits: Option<f64>,
    pub mc_stderr_bits: Option<f64>,
    pub samples: Option<usize>,
}

impl MeanInfoResult {
    /// `|closed - estimate| <= 4 stderr`; vacuous without an estimate.
    pub fn is_consistent(&self) -> bool {
        match (self.mc_estimate_bits, self.mc_stderr_bits) {
            (Some(est), Some(se)) => (est - self.closed_form_bits).abs() <= MC_SIGMA_GATE * se,
            _ => true,
        }
    }

    /// Deviation in units of the standard error.
    pub fn z_score(&self) -> Option<f64> {
        let (est, se) = (self.mc_estimate_bits?, self.mc_stderr_bits?);
        Some((est - self.closed_form_bits) / se)
    }
}

/// Running mean and sample standard error.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    pub(crate) fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub(crate) fn merge(self, other: Self) -> Self {
        Self { n: self.n + other.n, sum: self.sum + other.sum, sum_sq: self.sum_sq + other.sum_sq }
    }

    pub(crate) fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    pub(crate) fn stderr(&self) -> f64 {
        let n = self.n as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Monte Carlo estimate of `H_bar` in the computational basis.
pub fn mean_measurement_info_mc(dim: usize, samples: usize, rng: &mut RandomStream) -> Result<MeanInfoResult> {
    mean_measurement_info_mc_in(&MeasurementBasis::computational(dim)?, samples, rng)
}

/// Monte Carlo estimate of `H_bar` against a fixed measurement basis: the
/// mean of [`measurement_info_given_state`] over Haar-random states.
pub fn mean_measurement_info_mc_in(
    basis: &MeasurementBasis,
    samples: usize,
    rng: &mut RandomStream,
) -> Result<MeanInfoResult> {
    let dim = basis.dim();
    require_dim_two(dim)?;
    if samples < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 samples, got {samples}")));
    }
    let chunks = map_chunks(rng, samples, |stream, n| -> Result<Moments> {
        let mut m = Moments::default();
        for _ in 0..n {
            let psi = sample_pure_state(dim, stream)?;
            m.push(measurement_info_given_state(&psi, basis)?);
        }
        Ok(m)
    });
    let moments = chunks.into_iter().try_fold(Moments::default(), |acc, m| m.map(|m| acc.merge(m)))?;
    Ok(MeanInfoResult {
        dim,
        closed_form_bits: mean_measurement_info_closed(dim)?,
        mc_estimate_bits: Some(moments.mean()),
        mc_stderr_bits: Some(moments.stderr()),
        samples: Some(samples),
    })
}

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Mc,
}

/// One reported quantity, as emitted in JSON and CSV output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfoRecord {
    pub quantity: String,
    pub dim: usize,
    pub value_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr_bits: Option<f64>,
    pub method: Method,
}

impl InfoRecord {
    pub fn closed(quantity: &str, dim: usize, value_bits: f64) -> Self {
        Self { quantity: quantity.into(), dim, value_bits, stderr_bits: None, method: Method::Closed }
    }

    pub fn mc(quantity: &str, dim: usize, value_bits: f64, stderr_bits: f64) -> Self {
        Self { quantity: quantity.into(), dim, value_bits, stderr_bits: Some(stderr_bits), method: Method::Mc }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::ClassicalEnsemble;
    use crate::geometry::PhaseSpaceSpec;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn plus() -> StateVector {
        StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    fn ket(dim: usize, n: usize) -> StateVector {
        StateVector::basis(dim, n).unwrap()
    }

    fn pv(p: &[f64]) -> ProbVector {
        ProbVector::new(p.to_vec()).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_info(&pv(&[0.0, 1.0, 0.0])), 0.0);
        for n in [1usize, 2, 7, 64] {
            let h = shannon_info(&ProbVector::uniform(n).unwrap());
            assert!((h - (n as f64).log2()).abs() < 1e-12);
        }
        assert_eq!(shannon_info(&pv(&[0.5, 0.25, 0.25])), 1.5);
    }

    #[test]
    fn gibbs_examples() {
        let bits = gibbs_sequence_bits(10, &pv(&[0.5, 0.5])).unwrap();
        assert!((bits - 252f64.log2()).abs() < 1e-12);
        assert_eq!(gibbs_sequence_bits(1, &pv(&[0.0, 1.0])).unwrap(), 0.0);
        let p = pv(&[0.5, 0.25, 0.25]);
        let per_letter = gibbs_sequence_bits(1000, &p).unwrap() / 1000.0;
        // multinomial(1000; 500, 250, 250), evaluated in 30-digit arithmetic
        assert!((per_letter - 1.489_881_637_565_126).abs() < 1e-10);
        assert!((per_letter - 1.5).abs() < 0.02);
    }

    #[test]
    fn gibbs_rejects_fractional_occupations() {
        let err = gibbs_sequence_bits(3, &pv(&[0.5, 0.5])).unwrap_err();
        assert!(matches!(err, Error::NonIntegerOccupation { index: 0, .. }));
        assert!(gibbs_sequence_bits(0, &pv(&[1.0])).is_err());
    }

    #[test]
    fn gibbs_per_letter_rises_toward_entropy() {
        let p = pv(&[0.5, 0.25, 0.25]);
        let h = shannon_info(&p);
        let mut last = 0.0;
        for n in [100u64, 1000, 10_000] {
            let per = gibbs_sequence_bits(n, &p).unwrap() / n as f64;
            assert!(per <= h && per > last);
            last = per;
        }
    }

    #[test]
    fn preparation_examples() {
        let spec = PhaseSpaceSpec::from_ratio(3, 2.0).unwrap();
        let classical = ClassicalEnsemble::uniform(spec).unwrap();
        assert!((preparation_info(&classical) - 3.0).abs() < 1e-12);
        assert_eq!(missing_information(&classical), preparation_info(&classical));
        let mut rng = RandomStream::new(1, 0);
        let q = crate::ensembles::uniform_quantum_ensemble(2, 32, &mut rng).unwrap();
        assert!((preparation_info(&q) - 5.0).abs() < 1e-12);
        let one = QuantumEnsemble::equal_weights(vec![plus()]).unwrap();
        assert_eq!(preparation_info(&one), 0.0);
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&DensityOperator::pure(&plus())).unwrap().abs() < 1e-12);
        for d in [2, 3, 8] {
            let s = von_neumann_entropy(&DensityOperator::maximally_mixed(d).unwrap()).unwrap();
            assert!((s - (d as f64).log2()).abs() < 1e-12);
        }
        let e = QuantumEnsemble::equal_weights(vec![ket(2, 0), plus()]).unwrap();
        let s = von_neumann_entropy(&density_operator(&e).unwrap()).unwrap();
        assert!((s - 0.600_876_036_692_856).abs() < 1e-12, "{s}");
    }

    #[test]
    fn measurement_distribution_examples() {
        let e = QuantumEnsemble::equal_weights(vec![ket(2, 0), plus()]).unwrap();
        let rho = density_operator(&e).unwrap();
        let q = measurement_distribution(&rho, &MeasurementBasis::computational(2).unwrap()).unwrap();
        assert!((q.get(0) - 0.75).abs() < 1e-15 && (q.get(1) - 0.25).abs() < 1e-15);

        let spectral = spectral_decompose(&rho).unwrap();
        let q = measurement_distribution(&rho, &spectral.eigenvectors).unwrap();
        for (a, b) in q.as_slice().iter().zip(spectral.eigenvalues.as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }

        let mixed = DensityOperator::maximally_mixed(5).unwrap();
        let q = measurement_distribution(&mixed, &MeasurementBasis::fourier(5).unwrap()).unwrap();
        assert!(q.as_slice().iter().all(|&x| (x - 0.2).abs() < 1e-12));

        assert!(measurement_distribution(&mixed, &MeasurementBasis::computational(2).unwrap()).is_err());
    }

    #[test]
    fn measurement_info_examples() {
        let comp = MeasurementBasis::computational(2).unwrap();
        assert_eq!(measurement_info_given_state(&ket(2, 1), &comp).unwrap(), 0.0);
        assert!((measurement_info_given_state(&plus(), &comp).unwrap() - 1.0).abs() < 1e-15);
        assert!(measurement_info_given_state(&ket(3, 0), &comp).is_err());
    }

    #[test]
    fn double_stochastic_examples() {
        let comp = MeasurementBasis::computational(2).unwrap();
        let had = MeasurementBasis::fourier(2).unwrap();
        let m = double_stochastic_matrix(&comp, &had).unwrap();
        assert!(m.iter().all(|&x| (x - 0.5).abs() < 1e-15));
        let id = double_stochastic_matrix(&had, &had).unwrap();
        assert!((id - DMatrix::<f64>::identity(2, 2)).norm() < 1e-15);
        assert!(double_stochastic_matrix(&comp, &MeasurementBasis::computational(3).unwrap()).is_err());
    }

    #[test]
    fn excess_examples() {
        let zero = DensityOperator::pure(&ket(2, 0));
        let had = MeasurementBasis::fourier(2).unwrap();
        assert!((excess_measurement_info(&zero, &had).unwrap() - 1.0).abs() < 1e-12);
        let e = QuantumEnsemble::equal_weights(vec![ket(2, 0), plus()]).unwrap();
        let rho = density_operator(&e).unwrap();
        let eig = spectral_decompose(&rho).unwrap().eigenvectors;
        assert!(excess_measurement_info(&rho, &eig).unwrap().abs() < 1e-9);
    }

    #[test]
    fn info_report_examples() {
        let orth = QuantumEnsemble::equal_weights(vec![ket(2, 0), ket(2, 1)]).unwrap();
        let r = info_report(&orth).unwrap();
        assert!((r.preparation_bits - 1.0).abs() < 1e-12);
        assert!((r.entropy_bits - 1.0).abs() < 1e-12);
        assert!(r.gap_bits.abs() < 1e-12);

        let e = QuantumEnsemble::equal_weights(vec![ket(2, 0), plus()]).unwrap();
        let r = info_report(&e).unwrap();
        assert!((r.gap_bits - (1.0 - 0.600_876_036_692_856)).abs() < 1e-12);

        let mut rng = RandomStream::new(256, 0);
        let u = crate::ensembles::uniform_quantum_ensemble(2, 256, &mut rng).unwrap();
        let r = info_report(&u).unwrap();
        assert!((r.preparation_bits - 8.0).abs() < 1e-12);
        assert!((r.entropy_bits - 1.0).abs() < 0.05, "{}", r.entropy_bits);
    }

    #[test]
    fn closed_form_values() {
        // 30-digit reference values of (H_D - 1)/ln 2
        assert!((mean_measurement_info_closed(2).unwrap() - 0.721_347_520_444_481_7).abs() < 1e-15);
        assert!((mean_measurement_info_closed(3).unwrap() - 1.202_245_867_407_469_5).abs() < 1e-15);
        assert_eq!(mean_measurement_info_closed(2).unwrap(), 1.0 / (2.0 * LN_2));
        assert!(mean_measurement_info_closed(1).is_err());
        let big = mean_measurement_info_closed(1_000_000).unwrap();
        assert!((big - (1e6f64.log2() - 0.60995)).abs() < 1e-5);
        assert!((big - 19.321_620_427_059_48).abs() < 1e-9);
    }

    #[test]
    fn accessible_values() {
        assert!((accessible_info_uniform(2).unwrap() - 0.278_652_479_555_518_3).abs() < 1e-15);
        assert!((accessible_info_uniform(3).unwrap() - 0.382_716_633_313_686_7).abs() < 1e-14);
        let asym = asymptotic_accessible_info();
        assert!((asym - 0.60995).abs() < 1e-5);
        let mut last = 0.0;
        for d in (2..2000).chain([10_000, 100_000, 1_000_000]) {
            let j = accessible_info_uniform(d).unwrap();
            assert!(j > last && j < asym, "D={d}");
            last = j;
        }
    }

    #[test]
    fn mc_gate_and_errors() {
        let mut rng = RandomStream::new(3, 0);
        assert!(mean_measurement_info_mc(2, 99, &mut rng).is_err());
        assert!(mean_measurement_info_mc(1, 1000, &mut rng).is_err());
        let r = mean_measurement_info_mc(4, 20_000, &mut rng).unwrap();
        assert!(r.is_consistent(), "{r:?}");
        let off = MeanInfoResult { mc_estimate_bits: Some(1.0), mc_stderr_bits: Some(0.01), ..r.clone() };
        assert!(!off.is_consistent());
        let bare = MeanInfoResult { mc_estimate_bits: None, mc_stderr_bits: None, samples: None, ..r };
        assert!(bare.is_consistent() && bare.z_score().is_none());
    }

    #[test]
    fn record_json_shape() {
        let r = InfoRecord::closed("J", 2, 0.25);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"quantity":"J","dim":2,"value_bits":0.25,"method":"closed"}"#
        );
        let m = InfoRecord::mc("H_bar", 3, 1.0, 0.5);
        assert!(serde_json::to_string(&m).unwrap().contains(r#""stderr_bits":0.5,"method":"mc""#));
    }
}
