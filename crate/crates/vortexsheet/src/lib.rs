//! Linear normal-mode stability of relativistic vortex sheets in two space
//! dimensions: symmetrized Euler matrices, frequency-space interior and
//! boundary symbols, the associated determinant and its root structure, and
//! independent numerical cross-checks for all of it.

pub mod eos;
pub mod error;
pub mod linalg;
pub mod lopatinskii;
pub mod oracles;
pub mod presets;
pub mod symbols;
pub mod symmetrization;
pub mod tol;

pub use eos::{
    classify_threshold, critical_mach, prim_to_u, u_to_prim, Eos, EosSpec, FluidParams, PrimState,
    Regime, SheetConfig, SheetConfigSpec, UState,
};
pub use error::{Result, VsError};
pub use lopatinskii::{LopReport, OrderingReport, RootPoly, ScanRow, SimplicityReport};
pub use symbols::{CBar, Frequency, Side};
