//! Prepare-and-measure channels: we draw a microstate from an ensemble and
//! send it; you measure in some basis. The mutual information between the
//! prepared alternative and your outcome is what gets through.
//!
//! Two routes are available for finite ensembles: the exact joint
//! distribution `P(j, n) = p_j |<n|psi_j>|^2`, and a seeded simulation that
//! accumulates [`JointCounts`] for the plug-in estimator (no bias
//! correction; its upward bias is of order `rows * cols / trials`). The
//! continuous uniform ensemble has no finite joint table, so its experiment
//! uses the decomposition `J = log2 D - H_bar` with `H_bar` estimated by
//! Monte Carlo.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::ensembles::{density_operator, ClassicalEnsemble, Ensemble, EnsembleFile, ProbVector, QuantumEnsemble};
use crate::error::{Error, Result};
use crate::geometry::{quantum_microstate_bits, QuantumResolutionSpec};
use crate::hilbert::{decode_amplitudes, MeasurementBasis};
use crate::information::{
    accessible_info_uniform, entropy_of, mean_measurement_info_mc_in, preparation_info, shannon_info,
    von_neumann_entropy, MC_SIGMA_GATE,
};
use crate::sampling::{map_chunks, sample_basis, RandomStream};

/// Resolution used for the preparation information of the continuous
/// uniform ensemble unless another is given: 10 bits per amplitude.
pub const DEFAULT_RESOLUTION_ANGLE: f64 = 0.03125;

/// Row-major table of `(input, outcome)` counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointCounts {
    pub rows: usize,
    pub cols: usize,
    pub counts: Vec<u64>,
    pub trials: u64,
}

impl JointCounts {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, counts: vec![0; rows * cols], trials: 0 }
    }

    pub fn get(&self, input: usize, outcome: usize) -> u64 {
        self.counts[input * self.cols + outcome]
    }

    fn record(&mut self, input: usize, outcome: usize) {
        self.counts[input * self.cols + outcome] += 1;
        self.trials += 1;
    }

    fn merge(mut self, other: &Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.trials += other.trials;
        self
    }

    pub fn row_total(&self, input: usize) -> u64 {
        self.counts[input * self.cols..(input + 1) * self.cols].iter().sum()
    }

    /// CSV with header `input,outcome,count`, one line per cell in row-major
    /// order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["input", "outcome", "count"]).map_err(to_io)?;
        for j in 0..self.rows {
            for n in 0..self.cols {
                w.write_record([j.to_string(), n.to_string(), self.get(j, n).to_string()]).map_err(to_io)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// An exact joint distribution over `(input, outcome)`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbMatrix {
    pub rows: usize,
    pub cols: usize,
    probs: Vec<f64>,
}

impl ProbMatrix {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || probs.len() != rows * cols {
            return Err(Error::InvalidArgument(format!("{} entries do not fill a {rows}x{cols} table", probs.len())));
        }
        let checked = ProbVector::new(probs)?;
        Ok(Self { rows, cols, probs: checked.as_slice().to_vec() })
    }

    pub fn get(&self, input: usize, outcome: usize) -> f64 {
        self.probs[input * self.cols + outcome]
    }

    pub fn input_marginal(&self) -> Vec<f64> {
        (0..self.rows).map(|j| (0..self.cols).map(|n| self.get(j, n)).sum()).collect()
    }

    pub fn outcome_marginal(&self) -> Vec<f64> {
        (0..self.cols).map(|n| (0..self.rows).map(|j| self.get(j, n)).sum()).collect()
    }

    pub fn decomposition(&self) -> MiDecomposition {
        let input_entropy_bits = entropy_of(&self.input_marginal()).max(0.0);
        let outcome_entropy_bits = entropy_of(&self.outcome_marginal()).max(0.0);
        let joint = entropy_of(&self.probs);
        let conditional_entropy_bits = (joint - input_entropy_bits).max(0.0);
        MiDecomposition {
            mutual_info_bits: (outcome_entropy_bits - conditional_entropy_bits).max(0.0),
            input_entropy_bits,
            outcome_entropy_bits,
            conditional_entropy_bits,
        }
    }
}

/// `I(X;Y) = H(Y) - H(Y|X)` along with its parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MiDecomposition {
    pub mutual_info_bits: f64,
    pub input_entropy_bits: f64,
    pub outcome_entropy_bits: f64,
    pub conditional_entropy_bits: f64,
}

/// A table from which a normalized joint distribution can be formed.
pub trait JointDistribution {
    fn joint_probs(&self) -> Result<ProbMatrix>;
}

impl JointDistribution for ProbMatrix {
    fn joint_probs(&self) -> Result<ProbMatrix> {
        Ok(self.clone())
    }
}

impl JointDistribution for JointCounts {
    fn joint_probs(&self) -> Result<ProbMatrix> {
        if self.trials == 0 {
            return Err(Error::ZeroTrials);
        }
        let total = self.trials as f64;
        ProbMatrix::new(self.rows, self.cols, self.counts.iter().map(|&c| c as f64 / total).collect())
    }
}

/// Plug-in mutual information `H(X) + H(Y) - H(X, Y)`.
pub fn mutual_information(joint: &impl JointDistribution) -> Result<f64> {
    Ok(joint.joint_probs()?.decomposition().mutual_info_bits)
}

fn born_table(e: &QuantumEnsemble, basis: &MeasurementBasis) -> Result<Vec<Vec<f64>>> {
    if e.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: basis.dim() });
    }
    Ok(e.states()
        .iter()
        .map(|psi| basis.vectors().iter().map(|n| n.amplitudes().dotc(psi.amplitudes()).norm_sqr()).collect())
        .collect())
}

/// Exact `P(j, n) = p_j |<n|psi_j>|^2`.
pub fn exact_joint(e: &QuantumEnsemble, basis: &MeasurementBasis) -> Result<ProbMatrix> {
    let table = born_table(e, basis)?;
    let p = e.probabilities().as_slice();
    let mut probs: Vec<f64> = table.iter().zip(p).flat_map(|(row, &pj)| row.iter().map(move |&q| pj * q)).collect();
    let sum: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|x| *x /= sum);
    ProbMatrix::new(e.len(), basis.dim(), probs)
}

fn cumulative(weights: &[f64]) -> Vec<f64> {
    weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect()
}

/// Inverse-CDF draw; `u` in `[0, 1)`. Skips zero-weight entries.
fn draw(cdf: &[f64], u: f64) -> usize {
    let target = u * cdf[cdf.len() - 1];
    cdf.iter().position(|&c| c > target).unwrap_or(cdf.len() - 1)
}

/// Runs `trials` rounds: draw `j ~ p`, prepare `|psi_j>`, measure in `basis`
/// and record the Born-rule outcome.
pub fn simulate_channel(
    e: &QuantumEnsemble,
    basis: &MeasurementBasis,
    trials: u64,
    rng: &mut RandomStream,
) -> Result<JointCounts> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let rows: Vec<Vec<f64>> = born_table(e, basis)?.iter().map(|r| cumulative(r)).collect();
    let input_cdf = cumulative(e.probabilities().as_slice());
    let (nrows, ncols) = (e.len(), basis.dim());
    let chunks = map_chunks(rng, trials as usize, |stream, n| {
        let mut counts = JointCounts::zeros(nrows, ncols);
        for _ in 0..n {
            let j = draw(&input_cdf, stream.uniform());
            let outcome = draw(&rows[j], stream.uniform());
            counts.record(j, outcome);
        }
        counts
    });
    Ok(chunks.iter().fold(JointCounts::zeros(nrows, ncols), JointCounts::merge))
}

/// How the headline mutual information of a [`ChannelReport`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelMethod {
    Exact,
    Mc,
}

/// Plug-in estimates from simulated trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampledEstimate {
    pub trials: u64,
    #[serde(flatten)]
    pub decomposition: MiDecomposition,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelReport {
    pub method: ChannelMethod,
    pub dim: usize,
    pub mutual_info_bits: f64,
    pub outcome_entropy_bits: f64,
    pub conditional_entropy_bits: f64,
    pub preparation_bits: f64,
    pub vn_entropy_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accessible_closed_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<SampledEstimate>,
}

impl ChannelReport {
    /// Checks the report's invariants: the mutual information never exceeds
    /// the preparation information, it equals outcome entropy minus
    /// conditional entropy, and a Monte Carlo value sits within 4 standard
    /// errors of the closed form. Sampled estimates are held to the
    /// empirical input entropy, since sampling noise can push the plug-in
    /// value above `H(p)` itself.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Numerical(msg));
        if self.mutual_info_bits > self.preparation_bits + 1e-9 {
            return fail(format!(
                "mutual information {} exceeds preparation information {}",
                self.mutual_info_bits, self.preparation_bits
            ));
        }
        let split = self.outcome_entropy_bits - self.conditional_entropy_bits;
        if (self.mutual_info_bits - split).abs() > 1e-9 {
            return fail(format!("mutual information {} != H(Y) - H(Y|X) = {split}", self.mutual_info_bits));
        }
        if let (Some(closed), Some(se)) = (self.accessible_closed_bits, self.stderr_bits) {
            if (self.mutual_info_bits - closed).abs() > MC_SIGMA_GATE * se {
                return fail(format!(
                    "Monte Carlo estimate {} is more than {MC_SIGMA_GATE} sigma ({se}) from {closed}",
                    self.mutual_info_bits
                ));
            }
        }
        if let Some(s) = &self.sampled {
            let d = s.decomposition;
            if d.mutual_info_bits > d.input_entropy_bits + 1e-9 {
                return fail(format!(
                    "sampled mutual information {} exceeds sampled input entropy {}",
                    d.mutual_info_bits, d.input_entropy_bits
                ));
            }
        }
        Ok(())
    }
}

/// Exact-path report for a finite quantum ensemble measured in `basis`.
pub fn channel_report(e: &QuantumEnsemble, basis: &MeasurementBasis) -> Result<ChannelReport> {
    let d = exact_joint(e, basis)?.decomposition();
    Ok(ChannelReport {
        method: ChannelMethod::Exact,
        dim: e.dim(),
        mutual_info_bits: d.mutual_info_bits,
        outcome_entropy_bits: d.outcome_entropy_bits,
        conditional_entropy_bits: d.conditional_entropy_bits,
        preparation_bits: preparation_info(e),
        vn_entropy_bits: von_neumann_entropy(&density_operator(e)?)?,
        accessible_closed_bits: None,
        stderr_bits: None,
        sampled: None,
    })
}

/// Exact report plus a simulated run of `trials` rounds. Returns the counts
/// too.
pub fn channel_experiment(
    e: &QuantumEnsemble,
    basis: &MeasurementBasis,
    trials: u64,
    rng: &mut RandomStream,
) -> Result<(ChannelReport, JointCounts)> {
    let mut report = channel_report(e, basis)?;
    let counts = simulate_channel(e, basis, trials, rng)?;
    report.sampled = Some(SampledEstimate { trials, decomposition: counts.joint_probs()?.decomposition() });
    Ok((report, counts))
}

/// The continuous uniform ensemble in dimension `D`, measured in the
/// computational basis, with preparation information counted at
/// [`DEFAULT_RESOLUTION_ANGLE`].
pub fn uniform_ensemble_experiment(dim: usize, samples: usize, rng: &mut RandomStream) -> Result<ChannelReport> {
    let basis = MeasurementBasis::computational(dim)?;
    let resolution = QuantumResolutionSpec::new(dim, DEFAULT_RESOLUTION_ANGLE)?;
    uniform_ensemble_experiment_in(&basis, &resolution, samples, rng)
}

/// `J ~ log2 D - mean_psi H(psi)`: the outcomes are uniform, so `H(Y) =
/// log2 D`, and `H(Y|X)` is the Monte Carlo mean measurement information.
pub fn uniform_ensemble_experiment_in(
    basis: &MeasurementBasis,
    resolution: &QuantumResolutionSpec,
    samples: usize,
    rng: &mut RandomStream,
) -> Result<ChannelReport> {
    let dim = basis.dim();
    if resolution.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: resolution.dim() });
    }
    let mean = mean_measurement_info_mc_in(basis, samples, rng)?;
    let (Some(conditional), Some(stderr)) = (mean.mc_estimate_bits, mean.mc_stderr_bits) else {
        return Err(Error::Numerical("Monte Carlo run returned no estimate".into()));
    };
    let log_d = (dim as f64).log2();
    Ok(ChannelReport {
        method: ChannelMethod::Mc,
        dim,
        mutual_info_bits: log_d - conditional,
        outcome_entropy_bits: log_d,
        conditional_entropy_bits: conditional,
        preparation_bits: quantum_microstate_bits(resolution),
        vn_entropy_bits: log_d,
        accessible_closed_bits: Some(accessible_info_uniform(dim)?),
        stderr_bits: Some(stderr),
        sampled: None,
    })
}

/// Noiseless readout of phase-space cells: the outcome is the cell. The
/// exact mutual information is `H(p) = I = S`; `trials` simulated readouts
/// give the plug-in estimate alongside.
pub fn classical_channel_experiment(
    e: &ClassicalEnsemble,
    trials: u64,
    rng: &mut RandomStream,
) -> Result<(ChannelReport, JointCounts)> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let cells = e.cell_count();
    let h = shannon_info(e.probabilities());
    let cdf = cumulative(e.probabilities().as_slice());
    let chunks = map_chunks(rng, trials as usize, |stream, n| {
        let mut counts = JointCounts::zeros(cells, cells);
        for _ in 0..n {
            let j = draw(&cdf, stream.uniform());
            counts.record(j, j);
        }
        counts
    });
    let counts = chunks.iter().fold(JointCounts::zeros(cells, cells), JointCounts::merge);
    let report = ChannelReport {
        method: ChannelMethod::Exact,
        dim: cells,
        mutual_info_bits: h,
        outcome_entropy_bits: h,
        conditional_entropy_bits: 0.0,
        preparation_bits: preparation_info(e),
        vn_entropy_bits: h,
        accessible_closed_bits: None,
        stderr_bits: None,
        sampled: Some(SampledEstimate { trials, decomposition: counts.joint_probs()?.decomposition() }),
    };
    Ok((report, counts))
}

/// `"uniform"` or an explicit ensemble.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnsembleChoice {
    Named(String),
    Explicit(EnsembleFile),
}

/// `"computational"`, `"random"`, or explicit basis vectors as
/// `[[[re, im], ...], ...]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisChoice {
    Named(String),
    Explicit(Vec<Vec<[f64; 2]>>),
}

impl Default for BasisChoice {
    fn default() -> Self {
        BasisChoice::Named("computational".into())
    }
}

/// Experiment configuration read from JSON:
/// `{"ensemble": {...} | "uniform", "dim": D, "basis": ..., "trials": n, "seed": s}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleChoice,
    pub dim: usize,
    #[serde(default)]
    pub basis: BasisChoice,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

/// Output of [`run_experiment`].
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub report: ChannelReport,
    pub counts: Option<JointCounts>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn basis(&self) -> Result<MeasurementBasis> {
        match &self.basis {
            BasisChoice::Named(name) if name == "computational" => MeasurementBasis::computational(self.dim),
            BasisChoice::Named(name) if name == "random" => {
                sample_basis(self.dim, &mut RandomStream::new(self.seed, 1))
            }
            BasisChoice::Named(name) => Err(Error::InvalidArgument(format!("unknown basis {name:?}"))),
            BasisChoice::Explicit(vectors) => {
                MeasurementBasis::new(vectors.iter().map(|v| decode_amplitudes(v)).collect::<Result<_>>()?)
            }
        }
    }
}

/// Runs a configured experiment. Stream 0 of `seed` drives the trials and
/// stream 1 draws a random basis.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if config.trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let basis = config.basis()?;
    if basis.dim() != config.dim {
        return Err(Error::DimensionMismatch { expected: config.dim, found: basis.dim() });
    }
    let mut rng = RandomStream::new(config.seed, 0);
    match &config.ensemble {
        EnsembleChoice::Named(name) if name == "uniform" => {
            let resolution = QuantumResolutionSpec::new(config.dim, DEFAULT_RESOLUTION_ANGLE)?;
            let report = uniform_ensemble_experiment_in(&basis, &resolution, config.trials as usize, &mut rng)?;
            Ok(ExperimentOutput { report, counts: None })
        }
        EnsembleChoice::Named(name) => Err(Error::InvalidArgument(format!("unknown ensemble {name:?}"))),
        EnsembleChoice::Explicit(file) => {
            let e = file.clone().into_ensemble()?;
            if e.dim() != config.dim {
                return Err(Error::DimensionMismatch { expected: config.dim, found: e.dim() });
            }
            let (report, counts) = channel_experiment(&e, &basis, config.trials, &mut rng)?;
            Ok(ExperimentOutput { report, counts: Some(counts) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PhaseSpaceSpec;
    use crate::hilbert::StateVector;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(n: usize) -> StateVector {
        StateVector::basis(2, n).unwrap()
    }

    fn plus() -> StateVector {
        StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    fn minus() -> StateVector {
        StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap()
    }

    fn comp() -> MeasurementBasis {
        MeasurementBasis::computational(2).unwrap()
    }

    #[test]
    fn orthogonal_states_never_confused() {
        let e = QuantumEnsemble::equal_weights(vec![ket(0), ket(1)]).unwrap();
        let counts = simulate_channel(&e, &comp(), 10_000, &mut RandomStream::new(1, 0)).unwrap();
        assert_eq!(counts.get(0, 1) + counts.get(1, 0), 0);
        assert_eq!(counts.trials, 10_000);
        assert!((mutual_information(&counts).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn born_rule_frequencies() {
        let e = QuantumEnsemble::equal_weights(vec![ket(0), plus()]).unwrap();
        let counts = simulate_channel(&e, &comp(), 40_000, &mut RandomStream::new(2, 0)).unwrap();
        assert_eq!(counts.get(0, 1), 0);
        let n_plus = counts.row_total(1) as f64;
        let p = counts.get(1, 1) as f64 / n_plus;
        let se = (0.25 / n_plus).sqrt();
        assert!((p - 0.5).abs() < 3.0 * se, "{p}");
        let row0 = counts.row_total(0) as f64 / 40_000.0;
        assert!((row0 - 0.5).abs() < 3.0 * (0.25f64 / 40_000.0).sqrt());
    }

    #[test]
    fn simulation_is_deterministic() {
        let e = QuantumEnsemble::equal_weights(vec![ket(0), plus()]).unwrap();
        let a = simulate_channel(&e, &comp(), 9000, &mut RandomStream::new(5, 0)).unwrap();
        let b = simulate_channel(&e, &comp(), 9000, &mut RandomStream::new(5, 0)).unwrap();
        assert_eq!(a, b);
        assert!(simulate_channel(&e, &comp(), 0, &mut RandomStream::new(5, 0)).is_err());
        assert!(simulate_channel(&e, &MeasurementBasis::computational(3).unwrap(), 10, &mut RandomStream::new(5, 0))
            .is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let product = ProbMatrix::new(2, 2, vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        assert!(mutual_information(&product).unwrap().abs() < 1e-15);
        let correlated = ProbMatrix::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(mutual_information(&correlated).unwrap(), 1.0);

        let e = QuantumEnsemble::equal_weights(vec![ket(0), ket(1), plus(), minus()]).unwrap();
        let d = exact_joint(&e, &comp()).unwrap().decomposition();
        assert!((d.outcome_entropy_bits - 1.0).abs() < 1e-12);
        assert!((d.conditional_entropy_bits - 0.5).abs() < 1e-12);
        assert!((d.mutual_info_bits - 0.5).abs() < 1e-12);

        assert!(matches!(mutual_information(&JointCounts::zeros(2, 2)), Err(Error::ZeroTrials)));
        assert!(ProbMatrix::new(2, 2, vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn exact_channel_report_invariants() {
        let e = QuantumEnsemble::equal_weights(vec![ket(0), plus()]).unwrap();
        let r = channel_report(&e, &comp()).unwrap();
        r.check().unwrap();
        assert!(r.mutual_info_bits < r.vn_entropy_bits);
        let orth = QuantumEnsemble::equal_weights(vec![ket(0), ket(1)]).unwrap();
        let r = channel_report(&orth, &comp()).unwrap();
        assert!((r.mutual_info_bits - r.preparation_bits).abs() < 1e-12);
    }

    #[test]
    fn classical_channel_examples() {
        let spec = PhaseSpaceSpec::from_ratio(3, 2.0).unwrap();
        let uniform = ClassicalEnsemble::uniform(spec).unwrap();
        let (r, _) = classical_channel_experiment(&uniform, 1000, &mut RandomStream::new(1, 0)).unwrap();
        assert!((r.mutual_info_bits - 3.0).abs() < 1e-12);
        assert_eq!(r.mutual_info_bits, r.preparation_bits);
        assert_eq!(r.vn_entropy_bits, r.preparation_bits);
        r.check().unwrap();

        let one_hot = ClassicalEnsemble::new(ProbVector::new(vec![1.0, 0.0, 0.0]).unwrap(), None).unwrap();
        let (r, counts) = classical_channel_experiment(&one_hot, 500, &mut RandomStream::new(1, 0)).unwrap();
        assert_eq!(r.mutual_info_bits, 0.0);
        assert_eq!(r.sampled.unwrap().decomposition.mutual_info_bits, 0.0);
        assert_eq!(counts.get(0, 0), 500);
    }

    #[test]
    fn plug_in_classical_estimate_converges() {
        let mut rng = RandomStream::new(77, 0);
        for _ in 0..20 {
            let weights: Vec<f64> = (0..8).map(|_| rng.uniform()).collect();
            let e = ClassicalEnsemble::new(ProbVector::from_weights(weights).unwrap(), None).unwrap();
            let (r, _) = classical_channel_experiment(&e, 10_000, &mut rng).unwrap();
            let est = r.sampled.unwrap().decomposition.mutual_info_bits;
            assert!((est - r.preparation_bits).abs() < 0.02, "{est} vs {}", r.preparation_bits);
            r.check().unwrap();
        }
    }

    #[test]
    fn uniform_experiment_matches_closed_form() {
        let r = uniform_ensemble_experiment(2, 20_000, &mut RandomStream::new(3, 0)).unwrap();
        r.check().unwrap();
        assert!(r.mutual_info_bits < r.vn_entropy_bits);
        assert_eq!(r.preparation_bits, 10.0);
        let bad = ChannelReport { mutual_info_bits: 0.5, conditional_entropy_bits: 0.5, ..r };
        assert!(bad.check().is_err());
    }

    #[test]
    fn csv_layout() {
        let mut c = JointCounts::zeros(2, 2);
        c.record(0, 0);
        c.record(1, 0);
        c.record(1, 0);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "input,outcome,count\n0,0,1\n0,1,0\n1,0,2\n1,1,0\n");
    }

    #[test]
    fn config_parsing() {
        let uniform: ExperimentConfig =
            ExperimentConfig::from_json(r#"{"ensemble":"uniform","dim":2,"trials":1000,"seed":4}"#).unwrap();
        let out = run_experiment(&uniform).unwrap();
        assert!(out.counts.is_none());
        assert_eq!(out.report.method, ChannelMethod::Mc);

        let explicit = r#"{"ensemble":{"dim":2,"states":[[[1,0],[0,0]],[[0,0],[1,0]]],"probs":[0.5,0.5]},
            "dim":2,"basis":"random","trials":100,"seed":1}"#;
        let out = run_experiment(&ExperimentConfig::from_json(explicit).unwrap()).unwrap();
        assert_eq!(out.counts.unwrap().trials, 100);

        assert!(ExperimentConfig::from_json(r#"{"ensemble":"uniform","dim":2,"trials":10,"bogus":1}"#).is_err());
        let unknown = ExperimentConfig::from_json(r#"{"ensemble":"gaussian","dim":2,"trials":10}"#).unwrap();
        assert!(run_experiment(&unknown).is_err());
        let bad_basis =
            ExperimentConfig::from_json(r#"{"ensemble":"uniform","dim":2,"basis":"x","trials":10}"#).unwrap();
        assert!(run_experiment(&bad_basis).is_err());
    }
}
