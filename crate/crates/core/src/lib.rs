//! Numerical solvers for algebraic systems that carry a continuous symmetry
//! group: fixed-point and Petviashvili iterations, Newton–Krylov with
//! symmetric inner solvers, and orbital-convergence diagnostics.
//!
//! Two benchmark problem families are included: planar N-body relative
//! equilibria with rotational symmetry ([`nbody`]) and Bona-Smith solitary
//! waves with translational symmetry ([`boussinesq`]).

pub mod boussinesq;
pub mod error;
pub mod format;
pub mod nbody;
pub mod numlin;
pub mod solvers;
pub mod symmetry;

pub use error::{Error, Result};

/// Dense real vector used throughout the crate.
pub type Vector = nalgebra::DVector<f64>;
/// Dense real matrix used throughout the crate.
pub type Matrix = nalgebra::DMatrix<f64>;
