//! Exact and numerically verified bound states of the radial Schrodinger
//! equation with the potential V(r) = a r^2 + b r^-4 + c r^-6 (hbar = 2m = 1),
//! in three and two dimensions.
//!
//! The potential admits closed-form ground and first-excited states when the
//! couplings satisfy certain constraints. [`analytic`] carries the constraint
//! residuals, the solvers for the coupling families, and the closed-form
//! solutions themselves; [`oracle`] verifies them independently with a
//! finite-difference eigensolver, ODE residuals, and quadrature
//! normalization.

pub mod analytic;
pub mod error;
pub mod oracle;
pub mod potential;

pub use error::{CoreError, Result};
pub use potential::{Dimension, PotentialParams, ProblemSpec, QnRole, StateLabel};
