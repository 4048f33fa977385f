//! Pseudo-spectral solver for the 3D incompressible Navier-Stokes equations
//! on a periodic box, built around the helical decomposition `u = u_plus + u_minus`
//! of divergence-free velocity fields.
//!
//! The crate is organized in layers:
//!
//! - [`grid`] / [`field`]: the Fourier representation of vector fields on the
//!   torus `[0, L)^3` and the linear spectral operators (Leray projection,
//!   curl, fractional Laplacian powers, helical split, Sobolev seminorms,
//!   helicity).
//! - [`data`]: initial-data constructions — ABC/Beltrami flows, shell-supported
//!   helical random fields, smooth radial cut-offs, the curl-curl localization
//!   of Beltrami data, and a free-space annulus profile evaluated by spherical
//!   quadrature for spatial-decay studies.
//! - [`solver`]: dealiased pseudo-spectral right-hand side, integrating-factor
//!   RK4 time stepping, exact spectral heat flow, and accumulation of the
//!   dissipation integrals entering the critical-energy balance.
//! - [`verify`]: diagnostics rows and the named conservation/orthogonality/
//!   decay/perturbation checks, each returning a machine-readable verdict.
//!
//! All operations are pure functions of their inputs; runs are deterministic
//! for a fixed configuration and seed.

pub mod data;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod ops;
pub mod solver;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use field::{RealVectorField, SpectralVectorField};
pub use grid::Grid;
pub use ops::HelicalPair;
pub use solver::{heat_flow, nonlinear_rhs, run, RunOutput, RunSpec, SimState};
pub use verify::{CheckReport, DiagnosticsRow};
