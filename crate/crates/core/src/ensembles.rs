//! Ensembles of microstates, density operators and their spectral
//! decompositions.
//!
//! A [`QuantumEnsemble`] and the [`DensityOperator`] it gives rise to are
//! distinct types and are never converted implicitly: many ensembles share
//! one density operator, and a marginal density operator has no ensemble
//! attached at all.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PhaseSpaceSpec;
use crate::hilbert::{decode_amplitudes, encode_amplitudes, MeasurementBasis, StateVector, C64};
use crate::linalg::{hermitian_deviation, hermitian_eigen};
use crate::sampling::{sample_pure_state, RandomStream};

/// Tolerance for probability sums, traces and Hermiticity.
pub const PROB_TOL: f64 = 1e-9;

/// Eigenvalues in `[-NEGATIVE_EIGEN_TOL, 0)` are clamped to zero; anything
/// more negative means the operator is not positive.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-9;

/// Maximum Frobenius residual of a spectral reconstruction.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Two eigenvalues closer than this are ordered by their eigenvectors.
const TIE_TOL: f64 = 1e-12;

/// A normalized probability distribution over a finite set of alternatives.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbVector {
    probs: Vec<f64>,
}

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("no alternatives".into()));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidProbabilities(format!("entry {i} is {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidProbabilities(format!("entries sum to {sum}")));
        }
        Ok(Self { probs })
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InvalidProbabilities(format!("weights sum to {sum}")));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProbabilities("no alternatives".into()));
        }
        Ok(Self { probs: vec![1.0 / n as f64; n] })
    }

    /// Clamps entries in `[-tol, 0)` to zero and rescales to unit sum.
    pub(crate) fn from_nearly_normalized(mut probs: Vec<f64>, tol: f64) -> Result<Self> {
        for p in probs.iter_mut() {
            if *p < 0.0 && *p >= -tol {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidProbabilities(format!("entries sum to {sum}")));
        }
        probs.iter_mut().for_each(|p| *p /= sum);
        Self::new(probs)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }
}

/// Anything carrying a probability assignment over alternatives.
pub trait Ensemble {
    fn probabilities(&self) -> &ProbVector;
}

/// State vectors `|psi_j>` with probabilities `p_j`.
#[derive(Clone, Debug)]
pub struct QuantumEnsemble {
    states: Vec<StateVector>,
    probs: ProbVector,
}

impl QuantumEnsemble {
    pub fn new(states: Vec<StateVector>, probs: ProbVector) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::EmptyEnsemble);
        };
        if states.len() != probs.len() {
            return Err(Error::LengthMismatch { states: states.len(), probs: probs.len() });
        }
        let dim = first.dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self { states, probs })
    }

    /// Equal weights on every state.
    pub fn equal_weights(states: Vec<StateVector>) -> Result<Self> {
        let probs = ProbVector::uniform(states.len()).map_err(|_| Error::EmptyEnsemble)?;
        Self::new(states, probs)
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// `(index, state, probability)` for members with nonzero probability.
    pub fn support(&self) -> impl Iterator<Item = (usize, &StateVector, f64)> {
        self.states
            .iter()
            .zip(self.probs.as_slice())
            .enumerate()
            .filter(|(_, (_, &p))| p > 0.0)
            .map(|(j, (s, &p))| (j, s, p))
    }

    /// Applies the same unitary to every member.
    pub fn transformed(&self, u: &DMatrix<C64>) -> Result<Self> {
        let states = self.states.iter().map(|s| s.apply(u)).collect::<Result<_>>()?;
        Self::new(states, self.probs.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<EnsembleFile>(text)?.into_ensemble()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&EnsembleFile::from_ensemble(self))?)
    }
}

impl Ensemble for QuantumEnsemble {
    fn probabilities(&self) -> &ProbVector {
        &self.probs
    }
}

/// JSON form of a quantum ensemble:
/// `{"dim": D, "states": [[[re, im], ...], ...], "probs": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub dim: usize,
    pub states: Vec<Vec<[f64; 2]>>,
    pub probs: Vec<f64>,
}

impl EnsembleFile {
    pub fn from_ensemble(e: &QuantumEnsemble) -> Self {
        Self {
            dim: e.dim(),
            states: e.states.iter().map(encode_amplitudes).collect(),
            probs: e.probs.as_slice().to_vec(),
        }
    }

    pub fn into_ensemble(self) -> Result<QuantumEnsemble> {
        let states = self
            .states
            .iter()
            .map(|amps| {
                if amps.len() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, found: amps.len() });
                }
                decode_amplitudes(amps)
            })
            .collect::<Result<Vec<_>>>()?;
        QuantumEnsemble::new(states, ProbVector::new(self.probs)?)
    }
}

/// Fine-grained phase-space cells, identified by index, with probabilities.
#[derive(Clone, Debug)]
pub struct ClassicalEnsemble {
    probs: ProbVector,
    spec: Option<PhaseSpaceSpec>,
}

impl ClassicalEnsemble {
    /// When `spec` is given, the cells must tile its accessible volume, so
    /// the cell count equals `(A/h0)^F`.
    pub fn new(probs: ProbVector, spec: Option<PhaseSpaceSpec>) -> Result<Self> {
        if let Some(spec) = spec {
            let cells = spec.area_ratio().powi(spec.dof() as i32);
            let n = probs.len() as f64;
            if (cells - n).abs() > 1e-9 * n {
                return Err(Error::InvalidArgument(format!("{n} cells do not tile a phase space of {cells} cells")));
            }
        }
        Ok(Self { probs, spec })
    }

    /// Every cell of `spec` equally likely.
    pub fn uniform(spec: PhaseSpaceSpec) -> Result<Self> {
        let cells = spec.area_ratio().powi(spec.dof() as i32);
        let rounded = cells.round();
        if (cells - rounded).abs() > 1e-9 * rounded || !(1.0..=1e8).contains(&rounded) {
            return Err(Error::InvalidArgument(format!(
                "phase space holds {cells} cells; need a whole number up to 1e8"
            )));
        }
        Self::new(ProbVector::uniform(rounded as usize)?, Some(spec))
    }

    pub fn cell_count(&self) -> usize {
        self.probs.len()
    }

    pub fn spec(&self) -> Option<&PhaseSpaceSpec> {
        self.spec.as_ref()
    }
}

impl Ensemble for ClassicalEnsemble {
    fn probabilities(&self) -> &ProbVector {
        &self.probs
    }
}

/// Hermitian, positive-semidefinite, unit-trace operator.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let deviation = hermitian_deviation(&matrix);
        if deviation > PROB_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > PROB_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let (values, _) = hermitian_eigen(&matrix)?;
        let min_eigenvalue = values.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -NEGATIVE_EIGEN_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    /// `I / D`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim, reason: "dimension must be positive" });
        }
        Ok(Self { matrix: DMatrix::identity(dim, dim).unscale(dim as f64) })
    }

    /// `|psi><psi|`.
    pub fn pure(psi: &StateVector) -> Self {
        Self { matrix: psi.projector() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok((&self.matrix - &other.matrix).norm())
    }

    /// `<psi|rho|psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        Ok(psi.amplitudes().dotc(&(&self.matrix * psi.amplitudes())).re)
    }
}

/// `rho = sum_j p_j |psi_j><psi_j|`.
pub fn density_operator(e: &QuantumEnsemble) -> Result<DensityOperator> {
    let dim = e.dim();
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for (_, state, p) in e.support() {
        let a = state.amplitudes();
        rho.ger(C64::new(p, 0.0), a, &a.conjugate(), C64::new(1.0, 0.0));
    }
    DensityOperator::new(rho)
}

/// Eigenvalues `lambda_m` (descending) and eigenbasis `|phi_m>` of a density
/// operator.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: ProbVector,
    pub eigenvectors: MeasurementBasis,
}

impl SpectralDecomposition {
    /// `sum_m lambda_m |phi_m><phi_m|`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let v = self.eigenvectors.to_matrix();
        let lambda = DVector::from_iterator(v.ncols(), self.eigenvalues.as_slice().iter().map(|&l| C64::new(l, 0.0)));
        &v * DMatrix::from_diagonal(&lambda) * v.adjoint()
    }

    /// The eigen-ensemble: eigenvectors weighted by eigenvalues.
    pub fn ensemble(&self) -> QuantumEnsemble {
        QuantumEnsemble { states: self.eigenvectors.vectors().to_vec(), probs: self.eigenvalues.clone() }
    }
}

/// Eigenvalues sorted descending. Within a run of eigenvalues closer than
/// `1e-12`, the eigenvalues keep their order while the eigenvectors (each rotated so its first non-negligible component
/// is real positive) are ordered lexicographically by `(re, im)`.
pub fn spectral_decompose(rho: &DensityOperator) -> Result<SpectralDecomposition> {
    let (values, vectors) = hermitian_eigen(rho.matrix())?;
    let min_eigenvalue = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -NEGATIVE_EIGEN_TOL {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    let mut pairs: Vec<(f64, StateVector)> = values
        .into_iter()
        .zip(vectors.column_iter())
        .map(|(l, v)| (l, StateVector::from_dvector_unchecked(v.into_owned()).canonical_phase()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end - 1].0 - pairs[end].0 < TIE_TOL {
            end += 1;
        }
        let mut group: Vec<StateVector> = pairs[start..end].iter().map(|p| p.1.clone()).collect();
        group.sort_by(lexicographic);
        for (pair, state) in pairs[start..end].iter_mut().zip(group) {
            pair.1 = state;
        }
        start = end;
    }
    let (lambdas, states): (Vec<f64>, Vec<StateVector>) = pairs.into_iter().unzip();
    let decomposition = SpectralDecomposition {
        eigenvalues: ProbVector::from_nearly_normalized(lambdas, NEGATIVE_EIGEN_TOL)?,
        eigenvectors: MeasurementBasis::new(states)?,
    };
    let residual = (decomposition.reconstruct() - rho.matrix()).norm();
    if residual > RECONSTRUCTION_TOL {
        return Err(Error::Numerical(format!("spectral reconstruction residual {residual:e}")));
    }
    Ok(decomposition)
}

fn lexicographic(a: &StateVector, b: &StateVector) -> Ordering {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes().iter())
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// True iff the two ensembles give density operators within `tol` in
/// Frobenius norm.
pub fn ensembles_equivalent(a: &QuantumEnsemble, b: &QuantumEnsemble, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(density_operator(a)?.frobenius_distance(&density_operator(b)?)? <= tol)
}

/// Per-cell phase-space density `p_j / Delta v_cl`.
pub fn classical_density(e: &ClassicalEnsemble) -> Result<Vec<f64>> {
    let spec = e.spec.ok_or_else(|| Error::InvalidArgument("classical density needs a phase-space spec".into()))?;
    let cell = spec.cell_volume();
    Ok(e.probs.as_slice().iter().map(|p| p / cell).collect())
}

/// `count` Haar-random states with equal weights: a finite stand-in for the
/// continuous uniform ensemble, whose exact density operator is
/// [`DensityOperator::maximally_mixed`].
pub fn uniform_quantum_ensemble(dim: usize, count: usize, rng: &mut RandomStream) -> Result<QuantumEnsemble> {
    if count == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let states = (0..count).map(|_| sample_pure_state(dim, rng)).collect::<Result<_>>()?;
    QuantumEnsemble::equal_weights(states)
}
