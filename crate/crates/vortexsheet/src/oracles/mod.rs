//! Independent numerical routes used to cross-check every closed form:
//! companion-matrix polynomial roots, a dense 4x4 eigensolver, spectral
//! subspace splitting, and direct ODE integration.

pub mod eig4;
pub mod ode;
pub mod poly;
pub mod qr;
pub mod subspace;

pub use eig4::{eig4, Eig4};
pub use ode::{ode_decay_fit, DecayFit, Direction};
pub use poly::{poly_deriv, poly_eval, poly_eval_real, poly_roots, poly_roots_real, real_roots, PolyRoots};
pub use subspace::{stable_subspace, subspace_angle, StableSubspace};
