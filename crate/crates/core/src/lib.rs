//! # qinfo
//!
//! How much information is in a quantum state vector? This crate computes
//! the quantities that answer that question numerically, for finite
//! dimension `D`:
//!
//! - [`geometry`]: Fubini-Study volumes of projective Hilbert space,
//!   resolution spheres, and classical versus quantum microstate counts.
//! - [`sampling`]: seeded Haar-random states, unitaries and bases.
//! - [`ensembles`]: quantum and classical ensembles, density operators and
//!   spectral decompositions.
//! - [`information`]: Gibbs-Shannon information, von Neumann entropy,
//!   measurement statistics, the mean information of a random measurement
//!   and the accessible information of the uniform ensemble.
//! - [`subsystems`]: Schmidt decomposition, partial trace, marginals.
//! - [`cloning`]: the overlap criterion for copying ensemble members.
//! - [`commsim`]: prepare-and-measure channel simulation and mutual
//!   information.
//! - [`paper_table`] and [`cli`]: one-shot reproduction of the reference
//!   numbers and the batch command line.
//!
//! Every information quantity is reported in bits.

#![forbid(unsafe_code)]

pub mod cli;
pub mod cloning;
pub mod commsim;
pub mod ensembles;
pub mod error;
pub mod geometry;
pub mod hilbert;
pub mod information;
pub mod linalg;
pub mod paper_table;
pub mod sampling;
pub mod subsystems;

pub use error::{Error, Result};
pub use hilbert::{MeasurementBasis, StateVector, C64};
