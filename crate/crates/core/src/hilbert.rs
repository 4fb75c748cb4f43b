//! Finite-dimensional complex Hilbert space: state vectors, overlaps,
//! Hilbert-space angles, fiducial decompositions and tensor products.
//!
//! A [`StateVector`] is validated on construction (unit norm within
//! [`NORM_TOL`]); vectors that are off by more are rejected rather than
//! silently rescaled. Use [`StateVector::normalized`] to rescale explicitly.
//!
//! State vectors carry no canonical global phase. Comparisons go through
//! [`StateVector::equal_up_to_phase`], never componentwise equality.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = nalgebra::Complex<f64>;

/// Tolerance on `|<psi|psi> - 1|` accepted by validated constructors.
pub const NORM_TOL: f64 = 1e-9;

/// Two vectors whose Hilbert-space angle is below this are treated as the
/// same ray.
pub const PHASE_EQ_TOL: f64 = 1e-8;

/// Below this value of `sin(phi)` the fiducial decomposition is singular.
pub const FIDUCIAL_SINGULAR_TOL: f64 = 1e-9;

/// A normalized pure state `|psi>` in a `D`-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    /// Validating constructor: `amplitudes` must already have unit norm.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(amplitudes))
    }

    pub fn from_dvector(amps: DVector<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension { dim: 0, reason: "a state vector needs at least one amplitude" });
        }
        let norm_sqr = amps.norm_squared();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let mut amps = DVector::from_vec(amplitudes);
        let norm = amps.norm();
        if amps.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize an empty or zero vector".into()));
        }
        amps.unscale_mut(norm);
        Ok(Self { amps })
    }

    /// Real amplitudes, validated.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 || index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Skips validation. Callers guarantee unit norm up to rounding.
    pub(crate) fn from_dvector_unchecked(amps: DVector<C64>) -> Self {
        debug_assert!((amps.norm_squared() - 1.0).abs() < 1e-6);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    /// Born probabilities `|<n|psi>|^2` in the standard basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> DMatrix<C64> {
        &self.amps * self.amps.adjoint()
    }

    /// Multiplies every amplitude by `e^{i alpha}`.
    pub fn with_phase(&self, alpha: f64) -> Self {
        let phase = C64::from_polar(1.0, alpha);
        Self { amps: self.amps.map(|a| a * phase) }
    }

    /// Applies a square matrix; the result must still be normalized, which
    /// holds for any unitary.
    pub fn apply(&self, op: &DMatrix<C64>) -> Result<Self> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: op.ncols() });
        }
        Self::from_dvector(op * &self.amps)
    }

    /// True when the two vectors describe the same ray.
    pub fn equal_up_to_phase(&self, other: &Self) -> bool {
        matches!(hilbert_angle(self, other), Ok(angle) if angle < PHASE_EQ_TOL)
    }

    /// Rotates the global phase so the first component with magnitude above
    /// `1e-12` is real and positive.
    pub fn canonical_phase(&self) -> Self {
        let mut out = self.clone();
        if let Some(pivot) = self.amps.iter().find(|a| a.norm() > 1e-12) {
            let phase = pivot.conj() / pivot.norm();
            out.amps.apply(|a| *a *= phase);
        }
        out
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// `<a|b>`, conjugate-linear in the first argument.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<C64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.amps.dotc(&b.amps))
}

/// Hilbert-space angle `arccos |<a|b>|`, in `[0, pi/2]`.
///
/// Evaluated as `atan2(|b - <a|b> a|, |<a|b>|)` with the overlap magnitude
/// clamped to `[0, 1]`; this agrees with the arccos form but keeps full
/// relative precision for nearly parallel vectors.
pub fn hilbert_angle(a: &StateVector, b: &StateVector) -> Result<f64> {
    let overlap = inner_product(a, b)?;
    let cos = overlap.norm().clamp(0.0, 1.0);
    let residual = (&b.amps - &a.amps * overlap).norm();
    Ok(residual.atan2(cos).clamp(0.0, FRAC_PI_2))
}

/// `|psi> = cos(phi)|psi0> + sin(phi)|eta>` after fixing the global phase of
/// `|psi>` so that `<psi0|psi>` is real and nonnegative.
#[derive(Clone, Debug)]
pub struct FiducialDecomposition {
    pub polar_angle: f64,
    pub orthogonal_part: StateVector,
    /// False when `sin(phi)` is below [`FIDUCIAL_SINGULAR_TOL`]; the
    /// orthogonal part is then a deterministic placeholder.
    pub defined: bool,
}

impl FiducialDecomposition {
    /// `cos(phi)|psi0> + sin(phi)|eta>`.
    pub fn reconstruct(&self, psi0: &StateVector) -> Result<StateVector> {
        check_dims(psi0.dim(), self.orthogonal_part.dim())?;
        let (sin, cos) = self.polar_angle.sin_cos();
        let amps = psi0.amps.scale(cos) + self.orthogonal_part.amps.scale(sin);
        StateVector::from_dvector(amps)
    }
}

pub fn fiducial_decompose(psi: &StateVector, psi0: &StateVector) -> Result<FiducialDecomposition> {
    check_dims(psi.dim(), psi0.dim())?;
    let norm_sqr = psi0.amps.norm_squared();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let overlap = psi0.amps.dotc(&psi.amps);
    let magnitude = overlap.norm().min(1.0);
    let aligned =
        if magnitude > 0.0 { psi.amps.map(|a| a * (overlap.conj() / overlap.norm())) } else { psi.amps.clone() };
    let residual = &aligned - psi0.amps.scale(magnitude);
    let sin = residual.norm();
    let polar_angle = sin.atan2(magnitude).clamp(0.0, FRAC_PI_2);

    if sin < FIDUCIAL_SINGULAR_TOL {
        return Ok(FiducialDecomposition {
            polar_angle,
            orthogonal_part: placeholder_orthogonal(psi0),
            defined: false,
        });
    }
    Ok(FiducialDecomposition {
        polar_angle,
        orthogonal_part: StateVector::from_dvector_unchecked(residual.unscale(sin)),
        defined: true,
    })
}

/// First standard basis vector with at least half its weight outside
/// `psi0`, orthogonalized against `psi0`. In `D = 1` no orthogonal vector
/// exists and `psi0` itself is returned.
fn placeholder_orthogonal(psi0: &StateVector) -> StateVector {
    let dim = psi0.dim();
    for n in 0..dim {
        let mut e = DVector::<C64>::zeros(dim);
        e[n] = C64::new(1.0, 0.0);
        let r = &e - &psi0.amps * psi0.amps[n].conj();
        let norm = r.norm();
        if norm * norm >= 0.5 {
            return StateVector::from_dvector_unchecked(r.unscale(norm));
        }
    }
    psi0.clone()
}

/// `|a> (x) |b>` with `a`'s index varying slowest.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    StateVector::from_dvector_unchecked(a.amps.kronecker(&b.amps))
}

/// An ordered orthonormal basis `|n>`, `n = 0..D`, defining a pure von
/// Neumann measurement.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    vectors: Vec<StateVector>,
}

impl MeasurementBasis {
    /// Validates that there are exactly `D` vectors of dimension `D` whose
    /// Gram matrix is the identity within [`NORM_TOL`].
    pub fn new(vectors: Vec<StateVector>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::InvalidDimension { dim: 0, reason: "empty basis" });
        };
        let dim = first.dim();
        if vectors.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: vectors.len() });
        }
        for v in &vectors {
            check_dims(dim, v.dim())?;
        }
        let basis = Self { vectors };
        let deviation = basis.gram_deviation();
        if deviation > NORM_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(basis)
    }

    pub fn computational(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim, reason: "dimension must be positive" });
        }
        Ok(Self { vectors: (0..dim).map(|n| StateVector::basis(dim, n)).collect::<Result<_>>()? })
    }

    /// Discrete Fourier basis `|k> = D^{-1/2} sum_n e^{2 pi i nk/D} |n>`;
    /// for `D = 2` these are `|+>` and `|->`.
    pub fn fourier(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim, reason: "dimension must be positive" });
        }
        let scale = (dim as f64).sqrt().recip();
        let vectors = (0..dim)
            .map(|k| {
                let amps = DVector::from_fn(dim, |n, _| {
                    let theta = 2.0 * std::f64::consts::PI * ((n * k) % dim) as f64 / dim as f64;
                    C64::from_polar(scale, theta)
                });
                StateVector::from_dvector_unchecked(amps)
            })
            .collect();
        Ok(Self { vectors })
    }

    /// Columns of a unitary matrix, in order.
    pub fn from_unitary_columns(u: &DMatrix<C64>) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch { expected: u.nrows(), found: u.ncols() });
        }
        let vectors = u.column_iter().map(|c| StateVector::from_dvector(c.into_owned())).collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    /// The basis vectors as the columns of a unitary.
    pub fn to_matrix(&self) -> DMatrix<C64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |row, col| self.vectors[col].amps[row])
    }

    /// Largest entry of `|G - I|` where `G` is the Gram matrix.
    pub fn gram_deviation(&self) -> f64 {
        let m = self.to_matrix();
        let gram = m.adjoint() * &m;
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// JSON form of a state: `{"dim": D, "amplitudes": [[re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(psi: &StateVector) -> Self {
        Self { dim: psi.dim(), amplitudes: encode_amplitudes(psi) }
    }

    pub fn into_state(self) -> Result<StateVector> {
        if self.amplitudes.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: self.amplitudes.len() });
        }
        decode_amplitudes(&self.amplitudes)
    }
}

pub(crate) fn encode_amplitudes(psi: &StateVector) -> Vec<[f64; 2]> {
    psi.amps.iter().map(|a| [a.re, a.im]).collect()
}

pub(crate) fn decode_amplitudes(pairs: &[[f64; 2]]) -> Result<StateVector> {
    StateVector::new(pairs.iter().map(|&[re, im]| C64::new(re, im)).collect())
}
