//! Bipartite pure states: Schmidt decomposition, partial traces and
//! marginal density operators.
//!
//! Joint amplitudes use the product basis `|n>|k>` with subsystem A's index
//! varying slowest: joint index `n * dim_b + k`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::ensembles::{DensityOperator, ProbVector, NEGATIVE_EIGEN_TOL, RECONSTRUCTION_TOL};
use crate::error::{Error, Result};
use crate::hilbert::{hilbert_angle, StateVector, C64};

/// Which factor of a bipartite system to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// A joint pure state of subsystems A and B.
#[derive(Clone, Debug)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    joint: StateVector,
}

impl BipartiteState {
    pub fn new(joint: StateVector, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidDimension { dim: 0, reason: "subsystem dimensions must be positive" });
        }
        if dim_a * dim_b != joint.dim() {
            return Err(Error::DimensionMismatch { expected: dim_a * dim_b, found: joint.dim() });
        }
        Ok(Self { dim_a, dim_b, joint })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn joint(&self) -> &StateVector {
        &self.joint
    }

    /// Amplitudes reshaped to the `dim_a x dim_b` coefficient matrix.
    pub fn coefficient_matrix(&self) -> DMatrix<C64> {
        let amps = self.joint.amplitudes();
        DMatrix::from_fn(self.dim_a, self.dim_b, |n, k| amps[n * self.dim_b + k])
    }
}

/// `|Psi> = sum_m sqrt(lambda_m) |phi_m>|eta_m>`.
#[derive(Clone, Debug)]
pub struct SchmidtResult {
    /// Descending, length `min(dim_a, dim_b)`.
    pub coefficients: ProbVector,
    pub basis_a: Vec<StateVector>,
    pub basis_b: Vec<StateVector>,
}

impl SchmidtResult {
    pub fn reconstruct(&self) -> DVector<C64> {
        let dim = self.basis_a[0].dim() * self.basis_b[0].dim();
        let mut out = DVector::zeros(dim);
        for ((l, a), b) in self.coefficients.as_slice().iter().zip(&self.basis_a).zip(&self.basis_b) {
            out += a.amplitudes().kronecker(b.amplitudes()).scale(l.sqrt());
        }
        out
    }

    /// Number of nonzero coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.as_slice().iter().filter(|&&l| l > tol).count()
    }
}

/// Schmidt decomposition from the SVD of the coefficient matrix. Each
/// `|phi_m>` is rephased so its largest-magnitude component is real
/// positive, with the opposite phase moved onto `|eta_m>`.
pub fn schmidt_decompose(s: &BipartiteState) -> Result<SchmidtResult> {
    let svd = s.coefficient_matrix().svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(Error::Numerical("SVD did not return singular vectors".into()));
    };
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));

    let mut lambdas = Vec::with_capacity(order.len());
    let mut basis_a = Vec::with_capacity(order.len());
    let mut basis_b = Vec::with_capacity(order.len());
    for m in order {
        let mut phi = u.column(m).into_owned();
        // rows of V^dagger are the conjugated right singular vectors
        let mut eta = v_t.row(m).transpose();
        let pivot = phi.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(C64::new(1.0, 0.0));
        if pivot.norm() > 0.0 {
            let phase = pivot / pivot.norm();
            phi *= phase.conj();
            eta *= phase;
        }
        lambdas.push(svd.singular_values[m].powi(2));
        basis_a.push(StateVector::from_dvector(phi)?);
        basis_b.push(StateVector::from_dvector(eta)?);
    }
    let result = SchmidtResult {
        coefficients: ProbVector::from_nearly_normalized(lambdas, NEGATIVE_EIGEN_TOL)?,
        basis_a,
        basis_b,
    };
    let rebuilt = StateVector::from_dvector(result.reconstruct())
        .map_err(|e| Error::Numerical(format!("Schmidt reconstruction: {e}")))?;
    let residual = hilbert_angle(&rebuilt, s.joint())?;
    if residual > RECONSTRUCTION_TOL {
        return Err(Error::Numerical(format!("Schmidt reconstruction residual {residual:e}")));
    }
    Ok(result)
}

/// Partial trace of an operator on `A (x) B` over the subsystem not kept:
/// keeping A gives `sum_k <k|O|k>` over B's basis.
pub fn partial_trace(op: &DMatrix<C64>, dims: (usize, usize), keep: Subsystem) -> Result<DMatrix<C64>> {
    let (da, db) = dims;
    let joint = da * db;
    if !op.is_square() || op.nrows() != joint {
        return Err(Error::DimensionMismatch { expected: joint, found: op.nrows() });
    }
    Ok(match keep {
        Subsystem::A => DMatrix::from_fn(da, da, |n, m| (0..db).map(|k| op[(n * db + k, m * db + k)]).sum()),
        Subsystem::B => DMatrix::from_fn(db, db, |k, l| (0..da).map(|n| op[(n * db + k, n * db + l)]).sum()),
    })
}

/// `tr_B |Psi><Psi|` or `tr_A |Psi><Psi|`.
pub fn marginal_density(s: &BipartiteState, keep: Subsystem) -> Result<DensityOperator> {
    DensityOperator::new(partial_trace(&s.joint.projector(), s.dims(), keep)?)
}
