//! Fubini-Study volumes of projective Hilbert space and microstate counts
//! for classical phase space and quantum state space.
//!
//! Factorials go through `ln_gamma`, and counts are returned as `log2`
//! values (bits): the quantum count `phi^{-2(D-1)}` overflows an `f64`
//! already for moderate `D`.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Classical phase space with `dof` pairs of canonical coordinates, each
/// pair spanning `area_per_pair` and fine-grained at `resolution_per_pair`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceSpec {
    dof: u32,
    area_per_pair: f64,
    resolution_per_pair: f64,
}

impl PhaseSpaceSpec {
    pub fn new(dof: u32, area_per_pair: f64, resolution_per_pair: f64) -> Result<Self> {
        if dof == 0 {
            return Err(Error::InvalidArgument("phase space needs at least one degree of freedom".into()));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(area_per_pair) || !positive(resolution_per_pair) {
            return Err(Error::InvalidArgument("phase-space areas must be positive and finite".into()));
        }
        if resolution_per_pair > area_per_pair {
            return Err(Error::InvalidArgument(format!(
                "resolution {resolution_per_pair} is coarser than the accessible area {area_per_pair}"
            )));
        }
        Ok(Self { dof, area_per_pair, resolution_per_pair })
    }

    /// Only the ratio `area / resolution` enters any count.
    pub fn from_ratio(dof: u32, area_ratio: f64) -> Result<Self> {
        Self::new(dof, area_ratio, 1.0)
    }

    pub fn dof(&self) -> u32 {
        self.dof
    }

    pub fn area_ratio(&self) -> f64 {
        self.area_per_pair / self.resolution_per_pair
    }

    /// Accessible phase-space volume `A^F`.
    pub fn total_volume(&self) -> f64 {
        self.area_per_pair.powi(self.dof as i32)
    }

    /// Volume of one fine-grained cell `h0^F`.
    pub fn cell_volume(&self) -> f64 {
        self.resolution_per_pair.powi(self.dof as i32)
    }
}

/// A resolution sphere of Hilbert-space radius `phi` in dimension `D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumResolutionSpec {
    dim: usize,
    resolution_angle: f64,
}

impl QuantumResolutionSpec {
    pub fn new(dim: usize, resolution_angle: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim, reason: "dimension must be positive" });
        }
        if !(resolution_angle > 0.0 && resolution_angle <= FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!("resolution angle {resolution_angle} outside (0, pi/2]")));
        }
        Ok(Self { dim, resolution_angle })
    }

    /// Resolution chosen so each amplitude carries `bits` bits, i.e.
    /// `log2 phi^{-2} = bits`.
    pub fn from_bits_per_amplitude(dim: usize, bits: f64) -> Result<Self> {
        Self::new(dim, (-bits / 2.0).exp2())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution_angle(&self) -> f64 {
        self.resolution_angle
    }

    /// `log2 phi^{-2}`.
    pub fn bits_per_amplitude(&self) -> f64 {
        -2.0 * self.resolution_angle.log2()
    }
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Area `2 pi^{D-1} / (D-2)!` of the unit `(2D-3)`-sphere.
pub fn sphere_area(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "sphere area needs D >= 2" });
    }
    Ok(2.0 * ((dim - 1) as f64 * PI.ln() - ln_factorial(dim - 2)).exp())
}

/// `ln` of the total Fubini-Study volume, for dimensions where the volume
/// itself underflows.
pub fn ln_projective_volume(dim: usize) -> Result<f64> {
    if dim < 1 {
        return Err(Error::InvalidDimension { dim, reason: "projective volume needs D >= 1" });
    }
    Ok(ln_volume(dim))
}

fn ln_volume(dim: usize) -> f64 {
    (dim - 1) as f64 * PI.ln() - ln_factorial(dim - 1)
}

/// Total Fubini-Study volume `pi^{D-1} / (D-1)!` of projective Hilbert space.
pub fn projective_volume(dim: usize) -> Result<f64> {
    ln_projective_volume(dim).map(f64::exp)
}

/// Volume `sin(phi)^{2(D-1)} V_D` of a resolution sphere (exact sine form).
pub fn resolution_volume(spec: &QuantumResolutionSpec) -> f64 {
    let exponent = 2.0 * (spec.dim - 1) as f64;
    let ln_vol = exponent * spec.resolution_angle.sin().ln() + ln_volume(spec.dim);
    ln_vol.exp()
}

/// `Delta v / V_D = sin(phi)^{2(D-1)}`, the fraction of state space inside
/// one resolution sphere. Callers judge whether it is small enough.
pub fn resolution_fraction(spec: &QuantumResolutionSpec) -> f64 {
    spec.resolution_angle.sin().powf(2.0 * (spec.dim - 1) as f64)
}

/// Ratio of the exact sphere volume to its small-angle form
/// `phi^{2(D-1)} V_D`; tends to 1 as `phi -> 0`.
pub fn small_angle_ratio(spec: &QuantumResolutionSpec) -> f64 {
    let phi = spec.resolution_angle;
    (phi.sin() / phi).powf(2.0 * (spec.dim - 1) as f64)
}

/// `log2` of the quantum microstate count `phi^{-2(D-1)}`, i.e.
/// `(D-1) log2 phi^{-2}` bits.
pub fn quantum_microstate_bits(spec: &QuantumResolutionSpec) -> f64 {
    (spec.dim - 1) as f64 * spec.bits_per_amplitude()
}

/// `log2` of the classical microstate count `(A/h0)^F`.
pub fn classical_microstate_bits(spec: &PhaseSpaceSpec) -> f64 {
    spec.dof as f64 * spec.area_ratio().log2()
}

/// Side-by-side count of classical cells and quantum microstates for the
/// same system: `D` cells classically, `2^{(D-1) b}` resolvable state
/// vectors quantum mechanically at `b` bits per amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MicrostateComparison {
    pub dim: usize,
    pub bits_per_amplitude: f64,
    pub classical_bits: f64,
    pub quantum_bits: f64,
    /// Strictly more quantum microstates than classical ones.
    pub quantum_exceeds: bool,
    /// `D = 2` at one bit per amplitude: both counts are 1 bit.
    pub equality_boundary: bool,
}

pub fn classical_vs_quantum_counts(dim: usize, bits_per_amplitude: f64) -> Result<MicrostateComparison> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "comparison needs D >= 2" });
    }
    if !bits_per_amplitude.is_finite() || bits_per_amplitude < 1.0 {
        return Err(Error::InvalidArgument(format!("bits per amplitude must be >= 1, got {bits_per_amplitude}")));
    }
    let classical_bits = (dim as f64).log2();
    let quantum_bits = (dim - 1) as f64 * bits_per_amplitude;
    Ok(MicrostateComparison {
        dim,
        bits_per_amplitude,
        classical_bits,
        quantum_bits,
        quantum_exceeds: quantum_bits > classical_bits,
        equality_boundary: quantum_bits == classical_bits,
    })
}

/// Converts a natural-log quantity to bits.
pub(crate) fn nats_to_bits(x: f64) -> f64 {
    x / LN_2
}
