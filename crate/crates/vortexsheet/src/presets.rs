//! Named reference configurations used by the verification suite, the
//! command-line tools, and the benchmarks.

use crate::eos::{Eos, FluidParams, SheetConfig};
use crate::error::Result;

const RHO_MIN: f64 = 1e-3;
const RHO_MAX: f64 = 1e3;

fn linear_sheet(epsilon: f64, sigma: f64, rho_bar: f64, v_bar: f64) -> Result<SheetConfig> {
    let eos = Eos::linear(sigma, RHO_MIN, RHO_MAX, rho_bar)?;
    SheetConfig::new(eos, FluidParams::new(epsilon)?, rho_bar, v_bar)
}

/// Supersonic Newtonian sheet: epsilon = 0, c = 1, v = 2, M = 2 > sqrt(2).
pub fn newtonian_supersonic() -> SheetConfig {
    linear_sheet(0.0, 1.0, 1.0, 2.0).expect("preset parameters are admissible")
}

/// Relativistic sheet above the critical Mach number: epsilon = 1, c = 0.6,
/// v = 0.8.
pub fn relativistic_weakly_stable() -> SheetConfig {
    linear_sheet(1.0, 0.36, 1.0, 0.8).expect("preset parameters are admissible")
}

/// Relativistic sheet below the critical Mach number: epsilon = 1, c = 0.6,
/// v = 0.5.
pub fn relativistic_unstable() -> SheetConfig {
    linear_sheet(1.0, 0.36, 1.0, 0.5).expect("preset parameters are admissible")
}

/// Relativistic sheet at the critical Mach number exactly: v chosen so that
/// M = M_c = sqrt(2)/sqrt(1 + c^2).
pub fn relativistic_transition() -> SheetConfig {
    let v_bar = (0.72f64 / 1.36).sqrt();
    linear_sheet(1.0, 0.36, 1.0, v_bar).expect("preset parameters are admissible")
}

/// All presets with stable identifiers, in documentation order.
pub fn all() -> Vec<(&'static str, SheetConfig)> {
    vec![
        ("newtonian_supersonic", newtonian_supersonic()),
        ("relativistic_weakly_stable", relativistic_weakly_stable()),
        ("relativistic_unstable", relativistic_unstable()),
        ("relativistic_transition", relativistic_transition()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::Regime;

    #[test]
    fn regimes_are_as_documented() {
        assert_eq!(newtonian_supersonic().regime(), Regime::WeaklyStable);
        assert_eq!(relativistic_weakly_stable().regime(), Regime::WeaklyStable);
        assert_eq!(relativistic_unstable().regime(), Regime::ViolentlyUnstable);
        assert_eq!(relativistic_transition().regime(), Regime::Transition);
    }

    #[test]
    fn sound_speeds_are_exact() {
        assert_eq!(newtonian_supersonic().c_bar, 1.0);
        assert_eq!(relativistic_weakly_stable().c_bar, 0.6);
        assert_eq!(relativistic_unstable().c_bar, 0.6);
    }
}
