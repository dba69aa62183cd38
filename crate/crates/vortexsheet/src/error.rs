//! Error type shared by all stability computations.

use thiserror::Error;

/// Errors surfaced by state validation, symbol evaluation, and root searches.
#[derive(Debug, Error)]
pub enum VsError {
    /// A constructor argument violates its documented range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// The flow speed reaches or exceeds the light speed 1/eps.
    #[error("velocity exceeds light speed: eps*|v| = {value}")]
    LightSpeed { value: f64 },

    /// The frequency sits on a pole of the interior symbol.
    #[error("interior symbol pole on side {side}: |tau + i v1 eta| = {distance:e} below guard")]
    SymbolPole { side: char, distance: f64 },

    /// The front has degenerated: rho^2 + sigma^2 vanished at a frozen point.
    #[error("degenerate front: varrho^2 + varsigma^2 = {value:e}")]
    DegenerateFront { value: f64 },

    /// A frozen input state fails the eikonal constraint.
    #[error("eikonal residual {residual:e} exceeds tolerance {tol:e}")]
    EikonalViolation { residual: f64, tol: f64 },

    /// An eigenvalue sits too close to the imaginary axis for a stable/unstable split.
    #[error("boundary case: eigenvalue real part {value:e} within {tol:e} of zero")]
    BoundaryCase { value: f64, tol: f64 },

    /// An ODE integration overflowed.
    #[error("integration overflow at x2 = {x2}; try a smaller x2_max")]
    Overflow { x2: f64 },

    /// The root-polynomial extraction failed its residual check.
    #[error("root polynomial fit residual {residual:e} exceeds {tol:e}; frozen state too degenerate")]
    DegenerateFit { residual: f64, tol: f64 },

    /// An iterative solver failed to converge.
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    /// A verification property failed.
    #[error("verification failed: {name}: {detail}")]
    Verification { name: String, detail: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, VsError>;

impl VsError {
    /// Builds an `InvalidParam` from anything displayable.
    pub fn invalid(name: &'static str, reason: impl std::fmt::Display) -> Self {
        VsError::InvalidParam {
            name,
            reason: reason.to_string(),
        }
    }
}
