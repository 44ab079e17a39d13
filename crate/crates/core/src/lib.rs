//! Boundary triplets for implicit port-Hamiltonian systems on an interval.
//!
//! Given constant matrix coefficients of even-order operators `𝒫`, `𝒮` and
//! of a skew operator `𝒥`, the crate builds the boundary matrices, assembles
//! boundary triplets, classifies matrix boundary conditions and verifies the
//! results against an exact polynomial integration-by-parts oracle.

pub mod classify;
pub mod coercivity;
pub mod error;
pub mod fixtures;
pub mod greens;
pub mod numkernel;
pub mod opspec;
pub mod triplet;

pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, C64};

/// Default tolerances, collected in one place so reports can echo them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Singular values below `rank_rtol × σ_max` count as zero.
    pub rank_rtol: f64,
    /// Relative tolerance for the structural coefficient checks.
    pub structural: f64,
    /// Relative tolerance for symmetry and dissipativity defects of
    /// boundary conditions, scaled by `max(1, ‖K‖‖L‖)`.
    pub classify: f64,
    /// Relative tolerance for Green-identity residuals.
    pub green: f64,
    /// Relative threshold deciding the degree of a determinant polynomial.
    pub deg_tol: f64,
    /// Number of Fourier modes scanned by the coercivity certificate.
    pub k_max: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rtol: numkernel::DEFAULT_RANK_RTOL,
            structural: triplet::DEFAULT_STRUCTURAL_TOL,
            classify: 1e-9,
            green: 1e-9,
            deg_tol: opspec::DEFAULT_DEG_TOL,
            k_max: 100,
        }
    }
}
