//! Pinned numerical tolerances.
//!
//! Every threshold that decides a pass/fail or a branch lives here so that the
//! acceptance tests and the library agree on one set of constants.

/// Relative tolerance for identities that hold exactly in real arithmetic.
pub const IDENTITY_RTOL: f64 = 1e-12;

/// Pole guard for the interior symbol: reject |tau +- i v1 eta| below this times k.
pub const POLE_RTOL: f64 = 1e-14;

/// Eigenvalue-collision threshold flagging glancing frequencies, relative to k.
pub const GLANCING_RTOL: f64 = 1e-10;

/// Residual bound for eigenvector and subspace checks, relative to k.
pub const EIGEN_RTOL: f64 = 1e-10;

/// Relative convergence target for scalar root searches (density inversion).
pub const ROOT_RTOL: f64 = 1e-13;

/// Absolute bound on |Delta| certifying an interior root of the determinant.
pub const INTERIOR_ROOT_TOL: f64 = 1e-10;

/// Relative half-width of the transition band around the critical Mach number.
pub const TRANSITION_RTOL: f64 = 1e-12;

/// Relative residual above which a polynomial least-squares fit is rejected.
pub const POLY_FIT_TOL: f64 = 1e-8;

/// Residual above which frozen input states fail the eikonal constraint.
pub const EIKONAL_TOL: f64 = 1e-8;

/// Lower bound certifying a determinant root as simple, relative to scale.
pub const SIMPLE_ROOT_TOL: f64 = 1e-8;

/// Floor on +-d2(Phi) keeping frozen fronts away from degeneracy.
pub const FRONT_FLOOR: f64 = 0.5;

/// Slack below which an ordering-chain link counts as violated; relative.
pub const ORDERING_SLACK_RTOL: f64 = 1e-12;

/// Polynomial root residual bound, relative to coefficient scale.
pub const POLY_ROOT_RTOL: f64 = 1e-9;

/// Eigen residual bound for the generic 4x4 solver, relative to the matrix norm.
pub const EIG_RESIDUAL_RTOL: f64 = 1e-9;

/// Eigenvector-matrix condition number above which a warning is attached.
pub const DEFECTIVE_COND: f64 = 1e10;

/// Real-part floor separating stable from unstable eigenvalues, relative.
pub const SPECTRAL_SPLIT_RTOL: f64 = 1e-12;

/// Step-size control for fixed-step integration: ||A|| * h stays below this.
pub const ODE_STEP_FRACTION: f64 = 0.05;

/// Magnitude treated as overflow during integration.
pub const ODE_OVERFLOW: f64 = 1e200;

/// Relative coefficient floor when trimming polynomial leading terms.
pub const POLY_TRIM_RTOL: f64 = 1e-14;
