//! Simulation and verification laboratory for a nonlocal Novikov-type
//! equation on the circle and the pseudospherical-surface structure its
//! solutions carry.
//!
//! The crate has five layers:
//!
//! * [`spectral`] — periodic spectral toolbox: transforms, derivatives, the
//!   Helmholtz inverse in multiplier and Green-kernel form, Sobolev norms,
//!   dealiasing and spectral refinement.
//! * [`solver`] — method-of-lines evolution of the nonlocal Cauchy problem
//!   with conservation, positivity and gradient-bound monitors.
//! * [`geometry`] — the one-form triads carried by solutions, structure
//!   equation and zero-curvature residuals, Gaussian curvature, genericity.
//! * [`connection`] — second-fundamental-form coefficients: closed form for
//!   `mu = 0`, ODE integration for `mu != 0`, Codazzi/Gauss residuals.
//! * [`config`] / [`report`] / [`verify`] / [`cli`] — configuration parsing,
//!   deterministic artifact export, and the end-to-end verification suite
//!   behind the `psslab verify` subcommand.

pub mod cli;
pub mod config;
pub mod connection;
pub mod datum;
pub mod geometry;
pub mod report;
pub mod solver;
pub mod spectral;
pub mod verify;

pub use spectral::{Field, PeriodicGrid};
