//! Seeded sampling of the unitarily invariant ensembles: Haar-random pure
//! states, Haar-random unitaries and random measurement bases.
//!
//! Every draw comes from a [`RandomStream`], a ChaCha20 generator keyed by
//! `(seed, stream_id)`. Identical keys give identical sequences on every
//! platform. Monte Carlo work is split into fixed-size chunks, each with its
//! own forked stream, so results do not depend on the number of worker
//! threads.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{MeasurementBasis, StateVector, C64};

/// Trials handled by one forked stream in chunked Monte Carlo loops.
pub const CHUNK_SIZE: usize = 4096;

/// A deterministic random source identified by `(seed, stream_id)`.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derives an independent child stream. Consumes one word of this
    /// stream, so repeated forks differ.
    pub fn fork(&mut self, child: u64) -> RandomStream {
        let base = self.rng.next_u64();
        RandomStream::new(base, child)
    }

    fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Haar-random pure state: `2D` independent standard normals as real and
/// imaginary parts, normalized. In `D = 1` the only state is `(1)`.
pub fn sample_pure_state(dim: usize, rng: &mut RandomStream) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::InvalidDimension { dim, reason: "dimension must be positive" });
    }
    if dim == 1 {
        return StateVector::basis(1, 0);
    }
    loop {
        let amps = DVector::from_fn(dim, |_, _| rng.complex_normal());
        let norm = amps.norm();
        if norm > 0.0 {
            return Ok(StateVector::from_dvector_unchecked(amps.unscale(norm)));
        }
    }
}

/// Haar-random unitary: QR of a complex Gaussian matrix, with the columns of
/// `Q` rephased by `r_ii / |r_ii|` so the distribution is exactly Haar.
pub fn sample_unitary(dim: usize, rng: &mut RandomStream) -> Result<DMatrix<C64>> {
    if dim == 0 {
        return Err(Error::InvalidDimension { dim, reason: "dimension must be positive" });
    }
    let z = DMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            col *= d / d.norm();
        }
    }
    Ok(q)
}

/// The columns of a Haar-random unitary as a measurement basis.
pub fn sample_basis(dim: usize, rng: &mut RandomStream) -> Result<MeasurementBasis> {
    MeasurementBasis::from_unitary_columns(&sample_unitary(dim, rng)?)
}

/// Splits `total` trials into [`CHUNK_SIZE`] chunks, runs `work(stream, n)`
/// on each with its own forked stream (possibly in parallel), and returns
/// the chunk results in chunk order.
pub fn map_chunks<T, F>(rng: &mut RandomStream, total: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RandomStream, usize) -> T + Sync,
{
    let chunks = total.div_ceil(CHUNK_SIZE);
    let base = rng.next_u64();
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut stream = RandomStream::new(base, c as u64);
            let n = CHUNK_SIZE.min(total - c * CHUNK_SIZE);
            work(&mut stream, n)
        })
        .collect()
}
