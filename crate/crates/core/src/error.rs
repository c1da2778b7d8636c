use thiserror::Error;

/// Errors shared by the analytic and numeric layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    /// Invalid coupling or quantum-number combination.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested closed-form family does not exist for these quantum numbers.
    #[error("no exact solution: {0}")]
    NoSolution(String),

    /// The nonlinear constraint solver failed to converge.
    #[error("root finder did not converge: {0}")]
    NoConvergence(String),

    /// A coefficient denominator vanished at the iterate.
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    /// Radial evaluation requested at r <= 0.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Input parameters violate the constraint manifold of the requested state.
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    /// The eigensolver refinement pair did not show convergence.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// The eigensolver window truncates the bound-state mass.
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    /// The normalization integrand failed to decay or converge.
    #[error("non-integrable: {0}")]
    NonIntegrable(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
