//! The beta function `B^u(s) = ∫_M ‖v − u‖^s dA(v)` and `B_M(s) = ∫_M B^u dA`:
//! direct evaluation, meromorphic continuation, residues, finite parts,
//! Möbius energy and closed-form sphere references.

mod continuation;
mod cutoff;
mod direct;
pub mod oracle;
mod spherical_mean;

use std::ops::Add;

use num_complex::Complex64;
use thiserror::Error;

pub use continuation::{
    base_point_weight, beta_global_continued, beta_global_continued_at_level, beta_point_continued, default_depth,
    finite_part_at_pole, global_residue, mobius_energy, mobius_energy_at_level, nearest_pole, residue_numeric,
    FinitePart, MAX_DEPTH,
};
pub use cutoff::CutoffSpec;
pub use direct::{beta_global_direct, beta_global_direct_at_level, beta_point_direct};
pub use spherical_mean::{default_cutoff_radius, SphericalMean};

use crate::jet::JetError;
use crate::special::SpecialError;
use crate::surface::SurfaceError;

/// Inside this distance of a pole only residue and finite-part modes apply.
pub const POLE_GUARD: f64 = 1e-3;

/// Direct quadrature requires `Re s > −2 + DIRECT_GUARD`.
pub const DIRECT_GUARD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BetaError {
    #[error("s = {s} is outside the direct-quadrature region Re s > {boundary}")]
    OutsideConvergence { s: Complex64, boundary: f64 },
    #[error("tolerance {requested:e} not reached within node budget (achieved {achieved:e})")]
    ToleranceNotReached { requested: f64, achieved: f64 },
    #[error("subtraction depth {depth} too small for s = {s}: need Re s > -2 - depth")]
    DepthTooShallow { depth: usize, s: Complex64 },
    #[error("Richardson extrapolation failed: {0}")]
    Richardson(String),
    #[error("could not locate the surface point over tangent-plane position ({x:e}, {y:e})")]
    GraphSolve { x: f64, y: f64 },
    #[error("s = {s} lies within the pole guard of the pole at {pole}")]
    NearPole { s: Complex64, pole: f64 },
    #[error("operation needs a closed surface")]
    NotClosed,
    #[error("{0}")]
    InvalidOption(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Self { value, error: 0.0 }
    }
}

impl Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
}

/// Value of the continued beta function together with pole metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeromorphicResult {
    /// `None` when `s` is within [`POLE_GUARD`] of a pole.
    pub value: Option<Complex64>,
    pub error_estimate: f64,
    pub nearest_pole: Option<f64>,
    pub distance_to_pole: f64,
    pub is_finite_part: bool,
    /// Number of subtracted radial Taylor orders.
    pub depth: usize,
    pub cutoff_radius: f64,
}

/// Knobs for the continuation evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationOptions {
    pub tol: f64,
    /// Override of the default cutoff radius.
    pub cutoff_radius: Option<f64>,
    pub circle_nodes: usize,
    /// Outer quadrature level for surface integrals of pointwise values.
    pub outer_level: u32,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self { tol: 1e-8, cutoff_radius: None, circle_nodes: 64, outer_level: 1 }
    }
}
