//! The unitarity criterion for copying the members of an ensemble.
//!
//! A unitary that takes `|psi>|standard>` to `|psi>^{(N+1)}` for every
//! member must preserve overlaps, so each pair needs
//! `<psi_j|psi_k> = <psi_j|psi_k>^{N+1}`, which holds only for overlaps 0
//! or 1. With an apparatus the condition becomes
//! `<psi_j|psi_k> = <psi_j|psi_k>^{N+1} <A_j|A_k>` for some apparatus
//! overlap of modulus at most 1.

use serde::Serialize;

use crate::ensembles::QuantumEnsemble;
use crate::error::{Error, Result};
use crate::hilbert::{inner_product, C64};

/// Default tolerance on the violation magnitude.
pub const DEFAULT_CLONE_TOL: f64 = 1e-9;

/// A pair of members whose overlap breaks the copying condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolatingPair {
    pub j: usize,
    pub k: usize,
    pub overlap_magnitude: f64,
    pub violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClonabilityVerdict {
    pub clonable: bool,
    pub copies: u32,
    /// Sorted by `(j, k)` with `j < k`.
    pub violating_pairs: Vec<ViolatingPair>,
}

fn check_pairs(
    e: &QuantumEnsemble,
    copies: u32,
    tol: f64,
    violation: impl Fn(C64) -> f64,
) -> Result<ClonabilityVerdict> {
    if copies == 0 {
        return Err(Error::InvalidArgument("need at least one copy".into()));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be nonnegative")));
    }
    let members: Vec<_> = e.support().collect();
    let mut violating_pairs = Vec::new();
    for (a, &(j, psi_j, _)) in members.iter().enumerate() {
        for &(k, psi_k, _) in &members[a + 1..] {
            let overlap = inner_product(psi_j, psi_k)?;
            let v = violation(overlap);
            if v > tol {
                violating_pairs.push(ViolatingPair { j, k, overlap_magnitude: overlap.norm(), violation: v });
            }
        }
    }
    Ok(ClonabilityVerdict { clonable: violating_pairs.is_empty(), copies, violating_pairs })
}

/// Checks `|x - x^{N+1}| <= tol` on the complex overlap `x` of every pair of
/// members with nonzero probability.
pub fn clonability_check(e: &QuantumEnsemble, copies: u32, tol: f64) -> Result<ClonabilityVerdict> {
    check_pairs(e, copies, tol, |x| (x - x.powu(copies + 1)).norm())
}

/// Same question with a measuring-and-preparing apparatus folded into the
/// copying unitary. The residual is minimized over apparatus overlaps
/// `|a| <= 1`: `min |x - x^{N+1} a| = |x| (1 - |x|^N)`, which vanishes only
/// for `|x|` equal to 0 or 1.
pub fn apparatus_clonability_check(e: &QuantumEnsemble, copies: u32, tol: f64) -> Result<ClonabilityVerdict> {
    check_pairs(e, copies, tol, |x| {
        let r = x.norm().min(1.0);
        (r * (1.0 - r.powi(copies as i32))).max(0.0)
    })
}
