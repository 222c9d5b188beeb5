//! Overcrowding toolkit for stationary Gaussian processes.
//!
//! Centered stationary Gaussian processes on R and R^2 are determined by a
//! symmetric spectral probability measure mu; their covariance is k = mu-hat.
//! This crate measures how unlikely an excessive zero count N_T (or nodal
//! length L_T) is:
//!
//! - [`spectral`]: measures, moment tables (C_n, D_n, R_n, L_n), assumption
//!   checks with realized constants.
//! - [`kernel`]: covariance kernels and derivatives, sampled Gram matrices,
//!   folded spectral densities, eigenvalue certificates, Turan ratios.
//! - [`sampler`]: exact (Cholesky) and spectral-superposition path/field
//!   samplers with analytic derivatives and deterministic seeding.
//! - [`geometry`]: zero counting, nodal length via marching squares, and the
//!   deterministic derivative-cascade / zero-cap / nodal-box certificates.
//! - [`bounds`]: evaluators for the tail bound formulas with explicit
//!   precondition reporting in log space.
//! - [`montecarlo`]: tail / small-ball / nodal estimators with Wilson
//!   intervals, the alternating-sign orthant probability, and the constant
//!   calibration that realizes the existential constants.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod logspace;
pub mod montecarlo;
pub mod quad;
pub mod rng;
pub mod sampler;
pub mod special;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
