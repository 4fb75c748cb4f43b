//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Density operators here are small (tens of rows at most), where Jacobi is
//! both simple and accurate to a few ulps of the matrix norm. Schmidt
//! decompositions use nalgebra's SVD instead, which keeps the two routes to
//! the marginal spectra independent.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::C64;

const MAX_SWEEPS: usize = 64;

/// Largest `|A_ij - conj(A_ji)|`.
pub fn hermitian_deviation(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues (unsorted) and unit eigenvectors (matching columns) of a
/// Hermitian matrix. Only the upper triangle's Hermitian part is trusted.
pub fn hermitian_eigen(a: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    let n = a.nrows();
    let mut m = (a + a.adjoint()).scale(0.5);
    let mut v = DMatrix::<C64>::identity(n, n);
    let scale = m.norm_squared();
    if scale == 0.0 || n == 1 {
        return Ok(((0..n).map(|i| m[(i, i)].re).collect(), v));
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| m[(p, q)].norm_sqr()).sum();
        if off <= 1e-32 * scale {
            return Ok(((0..n).map(|i| m[(i, i)].re).collect(), v));
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    Err(Error::Numerical("Jacobi eigensolver did not converge".into()))
}

fn rotate(m: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize) {
    let g = m[(p, q)];
    let abs_g = g.norm();
    if abs_g == 0.0 {
        return;
    }
    let phase = g / abs_g;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * abs_g);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    let n = m.nrows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * j_pp + mkq * j_qp;
        m[(k, q)] = mkp * j_pq + mkq * j_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = j_pp.conj() * mpk + j_qp.conj() * mqk;
        m[(q, k)] = j_pq.conj() * mpk + j_qq.conj() * mqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}
