//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size n = {n} is invalid: n must be even and at least 4")]
    GridSize { n: usize },

    #[error("box length {box_length} is invalid: must be positive and finite")]
    BoxLength { box_length: f64 },

    #[error("grids do not match: {left} vs {right} points per axis")]
    GridMismatch { left: usize, right: usize },

    #[error("negative power of D is undefined: the k = 0 coefficient is nonzero")]
    MeanModeNotZero,

    #[error("field is not divergence-free: relative divergence residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotSolenoidal { residual: f64, tolerance: f64 },

    #[error("box length {box_length} is not a positive integer multiple of 2*pi resolvable on n = {n}")]
    BoxNotTwoPiMultiple { box_length: f64, n: usize },

    #[error("invalid shell: {reason}")]
    InvalidShell { reason: &'static str },

    #[error("spectral shell [{lo:.4}, {hi:.4}] contains no lattice wavevector of the grid")]
    EmptyShell { lo: f64, hi: f64 },

    #[error("cutoff radius must be positive and finite, got {m}")]
    InvalidCutoff { m: f64 },

    #[error("cutoff wraps around the torus: 2M = {two_m} exceeds L/2 = {half_l}")]
    CutoffWraps { two_m: f64, half_l: f64 },

    #[error("field is not Beltrami: curl eigenrelation residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotBeltrami { residual: f64, tolerance: f64 },

    #[error("dt = {dt} exceeds the advective stability bound 0.5*dx/max|u| = {bound:.6e}")]
    CflExceeded { dt: f64, bound: f64 },

    #[error("blow-up guard triggered at t = {t:.6}: ||u||_H1 grew by a factor {growth:.3e} over the initial value (under-resolution or genuine growth)")]
    BlowUp { t: f64, growth: f64 },

    #[error("diagnostics series is empty")]
    EmptySeries,

    #[error("need at least {needed} recorded states for this check, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("diagnostics series carries no perturbation block")]
    MissingPerturbation,

    #[error("invalid run parameters: {reason}")]
    InvalidRunParameters { reason: &'static str },

    #[error("non-finite value produced in {context}")]
    NonFinite { context: &'static str },
}
