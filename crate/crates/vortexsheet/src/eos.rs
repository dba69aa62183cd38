//! Barotropic equation of state, fluid states on both sides of the sheet, and
//! the piecewise-constant background configuration with its Mach classification.
//!
//! The inverse light speed `epsilon` is an explicit parameter everywhere;
//! `epsilon = 0` is the exact Newtonian limit, not a small-parameter expansion.

use crate::error::{Result, VsError};
use crate::tol;
use serde::Deserialize;
use std::fmt;
use std::sync::Arc;

/// Pressure law p(rho) on a validated density window.
#[derive(Clone)]
pub struct Eos {
    kind: EosKind,
    rho_min: f64,
    rho_max: f64,
    reference_density: f64,
}

#[derive(Clone)]
enum EosKind {
    /// p = sigma rho.
    Linear { sigma: f64 },
    /// p = coeff rho^gamma_ad.
    GammaLaw { coeff: f64, gamma_ad: f64 },
    /// Arbitrary callables for p and dp/drho.
    Tabulated {
        p: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        dp: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for Eos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            EosKind::Linear { sigma } => format!("Linear {{ sigma: {sigma} }}"),
            EosKind::GammaLaw { coeff, gamma_ad } => {
                format!("GammaLaw {{ coeff: {coeff}, gamma_ad: {gamma_ad} }}")
            }
            EosKind::Tabulated { .. } => "Tabulated".to_string(),
        };
        f.debug_struct("Eos")
            .field("kind", &kind)
            .field("rho_min", &self.rho_min)
            .field("rho_max", &self.rho_max)
            .field("reference_density", &self.reference_density)
            .finish()
    }
}

/// Number of grid points used for pressure-law sanity checks.
const VALIDATION_GRID: usize = 64;

impl Eos {
    /// Linear law p = sigma rho.
    pub fn linear(sigma: f64, rho_min: f64, rho_max: f64, reference_density: f64) -> Result<Eos> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(VsError::invalid("sigma", "must be finite and positive"));
        }
        Eos::build(EosKind::Linear { sigma }, rho_min, rho_max, reference_density)
    }

    /// Power law p = coeff rho^gamma_ad.
    pub fn gamma_law(
        coeff: f64,
        gamma_ad: f64,
        rho_min: f64,
        rho_max: f64,
        reference_density: f64,
    ) -> Result<Eos> {
        if !(coeff > 0.0) || !coeff.is_finite() {
            return Err(VsError::invalid("coeff", "must be finite and positive"));
        }
        if !(gamma_ad > 0.0) || !gamma_ad.is_finite() {
            return Err(VsError::invalid("gamma_ad", "must be finite and positive"));
        }
        Eos::build(
            EosKind::GammaLaw { coeff, gamma_ad },
            rho_min,
            rho_max,
            reference_density,
        )
    }

    /// Pressure law given as callables for p and dp/drho.
    pub fn tabulated(
        p: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        dp: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        rho_min: f64,
        rho_max: f64,
        reference_density: f64,
    ) -> Result<Eos> {
        Eos::build(EosKind::Tabulated { p, dp }, rho_min, rho_max, reference_density)
    }

    fn build(kind: EosKind, rho_min: f64, rho_max: f64, reference_density: f64) -> Result<Eos> {
        if !(rho_min > 0.0) || !rho_min.is_finite() {
            return Err(VsError::invalid("rho_min", "must be finite and positive"));
        }
        if !(rho_max > rho_min) || !rho_max.is_finite() {
            return Err(VsError::invalid("rho_max", "must be finite and exceed rho_min"));
        }
        if !(reference_density > rho_min) || !(reference_density < rho_max) {
            return Err(VsError::invalid(
                "reference_density",
                format!("must lie strictly inside ({rho_min}, {rho_max})"),
            ));
        }
        let eos = Eos {
            kind,
            rho_min,
            rho_max,
            reference_density,
        };
        for i in 0..VALIDATION_GRID {
            let rho = rho_min
                + (rho_max - rho_min) * i as f64 / (VALIDATION_GRID - 1) as f64;
            let p = eos.pressure(rho);
            let dp = eos.dpressure(rho);
            if !(p > 0.0) || !p.is_finite() {
                return Err(VsError::invalid(
                    "pressure",
                    format!("p({rho}) = {p} must be finite and positive"),
                ));
            }
            if !(dp > 0.0) || !dp.is_finite() {
                return Err(VsError::invalid(
                    "pressure",
                    format!("dp/drho({rho}) = {dp} must be finite and positive"),
                ));
            }
        }
        Ok(eos)
    }

    pub fn rho_min(&self) -> f64 {
        self.rho_min
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn reference_density(&self) -> f64 {
        self.reference_density
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        match &self.kind {
            EosKind::Linear { sigma } => sigma * rho,
            EosKind::GammaLaw { coeff, gamma_ad } => coeff * rho.powf(*gamma_ad),
            EosKind::Tabulated { p, .. } => p(rho),
        }
    }

    pub fn dpressure(&self, rho: f64) -> f64 {
        match &self.kind {
            EosKind::Linear { sigma } => *sigma,
            EosKind::GammaLaw { coeff, gamma_ad } => {
                coeff * gamma_ad * rho.powf(gamma_ad - 1.0)
            }
            EosKind::Tabulated { dp, .. } => dp(rho),
        }
    }

    /// Sound speed c(rho) = sqrt(dp/drho).
    pub fn sound_speed(&self, rho: f64) -> f64 {
        self.dpressure(rho).sqrt()
    }

    /// Checks the causality bound c(rho) < 1/eps on the validation grid.
    pub fn validate_causality(&self, params: &FluidParams) -> Result<()> {
        if params.epsilon == 0.0 {
            return Ok(());
        }
        let limit = 1.0 / (params.epsilon * params.epsilon);
        for i in 0..VALIDATION_GRID {
            let rho = self.rho_min
                + (self.rho_max - self.rho_min) * i as f64 / (VALIDATION_GRID - 1) as f64;
            let dp = self.dpressure(rho);
            if dp >= limit {
                return Err(VsError::invalid(
                    "sound_speed",
                    format!(
                        "c({rho})^2 = {dp} reaches the causal limit {limit} at epsilon = {}",
                        params.epsilon
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Normalized particle density N(rho) with N(reference_density) = 1.
    ///
    /// Defined by d(ln N)/drho = 1/(rho + eps^2 p(rho)). Closed forms for the
    /// linear and power laws; adaptive quadrature otherwise.
    pub fn particle_density(&self, rho: f64, params: &FluidParams) -> f64 {
        let e2 = params.epsilon * params.epsilon;
        let r0 = self.reference_density;
        match &self.kind {
            EosKind::Linear { sigma } => (rho / r0).powf(1.0 / (1.0 + e2 * sigma)),
            EosKind::GammaLaw { coeff, gamma_ad } if (gamma_ad - 1.0).abs() >= 1e-9 => {
                let g1 = gamma_ad - 1.0;
                let ratio = (1.0 + e2 * coeff * r0.powf(g1)) / (1.0 + e2 * coeff * rho.powf(g1));
                (rho / r0) * ratio.powf(1.0 / g1)
            }
            EosKind::GammaLaw { coeff, .. } => {
                // gamma_ad ~ 1 degenerates to the linear law with sigma = coeff.
                (rho / r0).powf(1.0 / (1.0 + e2 * coeff))
            }
            EosKind::Tabulated { .. } => {
                let f = |s: f64| 1.0 / (s + e2 * self.pressure(s));
                adaptive_simpson(&f, r0, rho, 1e-12).exp()
            }
        }
    }

    /// Enthalpy-like ratio h(rho) = (rho + eps^2 p(rho)) / N(rho).
    pub fn enthalpy_ratio(&self, rho: f64, params: &FluidParams) -> f64 {
        let e2 = params.epsilon * params.epsilon;
        (rho + e2 * self.pressure(rho)) / self.particle_density(rho, params)
    }

    /// Inverts p(rho) = p by bisection on the density window.
    pub fn density_from_pressure(&self, p: f64) -> Result<f64> {
        let p_lo = self.pressure(self.rho_min);
        let p_hi = self.pressure(self.rho_max);
        if !(p > p_lo) || !(p < p_hi) {
            return Err(VsError::invalid(
                "pressure",
                format!("p = {p} outside the representable range ({p_lo}, {p_hi})"),
            ));
        }
        let mut lo = self.rho_min;
        let mut hi = self.rho_max;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.pressure(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= tol::ROOT_RTOL * mid {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Signature matching an adaptive Simpson quadrature with absolute tolerance.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abstol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol_here: f64,
        depth: usize,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol_here {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, tol_here * 0.5, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, tol_here * 0.5, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, abstol, 48)
}

/// Global fluid parameters: the inverse light speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluidParams {
    pub epsilon: f64,
}

impl FluidParams {
    pub fn new(epsilon: f64) -> Result<FluidParams> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(VsError::invalid("epsilon", "must be finite and >= 0"));
        }
        Ok(FluidParams { epsilon })
    }

    /// Exact Newtonian limit.
    pub fn newtonian() -> FluidParams {
        FluidParams { epsilon: 0.0 }
    }
}

/// Primitive state (rho, v1, v2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimState {
    pub rho: f64,
    pub v1: f64,
    pub v2: f64,
}

impl PrimState {
    /// Validates the density window and the causal speed bound eps |v| < 1.
    pub fn new(rho: f64, v1: f64, v2: f64, eos: &Eos, params: &FluidParams) -> Result<PrimState> {
        if !(rho > eos.rho_min()) || !(rho < eos.rho_max()) {
            return Err(VsError::invalid(
                "rho",
                format!(
                    "{} outside the density window ({}, {})",
                    rho,
                    eos.rho_min(),
                    eos.rho_max()
                ),
            ));
        }
        let speed = params.epsilon * (v1 * v1 + v2 * v2).sqrt();
        if speed >= 1.0 {
            return Err(VsError::LightSpeed { value: speed });
        }
        Ok(PrimState { rho, v1, v2 })
    }

    /// Lorentz factor at these parameters.
    pub fn lorentz(&self, params: &FluidParams) -> f64 {
        let e2 = params.epsilon * params.epsilon;
        1.0 / (1.0 - e2 * (self.v1 * self.v1 + self.v2 * self.v2)).sqrt()
    }
}

/// Symmetrizable unknowns U = (p, h w1, h w2) with w = Gamma v.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UState {
    pub p: f64,
    pub hw1: f64,
    pub hw2: f64,
}

/// Maps a primitive state to the symmetrizable unknowns.
pub fn prim_to_u(state: &PrimState, eos: &Eos, params: &FluidParams) -> UState {
    let p = eos.pressure(state.rho);
    let h = eos.enthalpy_ratio(state.rho, params);
    let gamma = state.lorentz(params);
    UState {
        p,
        hw1: h * gamma * state.v1,
        hw2: h * gamma * state.v2,
    }
}

/// Recovers the primitive state from the symmetrizable unknowns.
///
/// The density comes from inverting the pressure; the Lorentz factor then has
/// the closed form Gamma = sqrt(h^2 + eps^2 (U2^2 + U3^2)) / h.
pub fn u_to_prim(u: &UState, eos: &Eos, params: &FluidParams) -> Result<PrimState> {
    let rho = eos.density_from_pressure(u.p)?;
    let h = eos.enthalpy_ratio(rho, params);
    let e2 = params.epsilon * params.epsilon;
    let gamma = (h * h + e2 * (u.hw1 * u.hw1 + u.hw2 * u.hw2)).sqrt() / h;
    let gh = gamma * h;
    let state = PrimState {
        rho,
        v1: u.hw1 / gh,
        v2: u.hw2 / gh,
    };
    let speed = params.epsilon * (state.v1 * state.v1 + state.v2 * state.v2).sqrt();
    if speed >= 1.0 {
        return Err(VsError::LightSpeed { value: speed });
    }
    Ok(state)
}

/// Stability regime of the background sheet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    WeaklyStable,
    Transition,
    ViolentlyUnstable,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::WeaklyStable => "weakly_stable",
            Regime::Transition => "transition",
            Regime::ViolentlyUnstable => "violently_unstable",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Critical Mach number sqrt(2) / sqrt(1 + eps^2 c^2).
pub fn critical_mach(epsilon: f64, c_bar: f64) -> f64 {
    std::f64::consts::SQRT_2 / (1.0 + epsilon * epsilon * c_bar * c_bar).sqrt()
}

/// Classifies M against the critical value with a pinned relative band.
pub fn classify_threshold(mach: f64, mach_crit: f64) -> Regime {
    let scale = mach.abs().max(mach_crit.abs());
    if (mach - mach_crit).abs() <= tol::TRANSITION_RTOL * scale {
        Regime::Transition
    } else if mach > mach_crit {
        Regime::WeaklyStable
    } else {
        Regime::ViolentlyUnstable
    }
}

/// Planar vortex-sheet background: uniform states (rho_bar, +-v_bar, 0) glued
/// along x2 = 0, with every derived constant the symbol algebra needs.
#[derive(Clone, Debug)]
pub struct SheetConfig {
    pub eos: Eos,
    pub params: FluidParams,
    pub rho_bar: f64,
    pub v_bar: f64,
    pub p_bar: f64,
    pub c_bar: f64,
    pub gamma_bar: f64,
    pub w_bar: f64,
    pub h_bar: f64,
    pub mach: f64,
    pub mach_crit: f64,
}

impl SheetConfig {
    pub fn new(eos: Eos, params: FluidParams, rho_bar: f64, v_bar: f64) -> Result<SheetConfig> {
        if !(v_bar > 0.0) || !v_bar.is_finite() {
            return Err(VsError::invalid("v_bar", "must be finite and positive"));
        }
        if eos.reference_density() != rho_bar {
            return Err(VsError::invalid(
                "rho_bar",
                format!(
                    "equation of state is normalized at {}, not at rho_bar = {}",
                    eos.reference_density(),
                    rho_bar
                ),
            ));
        }
        let eps = params.epsilon;
        if eps * v_bar >= 1.0 {
            return Err(VsError::LightSpeed { value: eps * v_bar });
        }
        eos.validate_causality(&params)?;
        let p_bar = eos.pressure(rho_bar);
        let c_bar = eos.sound_speed(rho_bar);
        if eps > 0.0 && eps * c_bar >= 1.0 {
            return Err(VsError::invalid(
                "c_bar",
                format!("sound speed {c_bar} reaches the light speed {}", 1.0 / eps),
            ));
        }
        let n_bar = eos.particle_density(rho_bar, &params);
        debug_assert!((n_bar - 1.0).abs() < 1e-14);
        let gamma_bar = 1.0 / (1.0 - eps * eps * v_bar * v_bar).sqrt();
        let w_bar = gamma_bar * v_bar;
        let h_bar = (rho_bar + eps * eps * p_bar) / n_bar;
        let mach = v_bar / c_bar;
        let mach_crit = critical_mach(eps, c_bar);
        Ok(SheetConfig {
            eos,
            params,
            rho_bar,
            v_bar,
            p_bar,
            c_bar,
            gamma_bar,
            w_bar,
            h_bar,
            mach,
            mach_crit,
        })
    }

    /// Builds the configuration from a target Mach number instead of v_bar.
    pub fn from_mach(eos: Eos, params: FluidParams, rho_bar: f64, mach: f64) -> Result<SheetConfig> {
        if !(mach > 0.0) || !mach.is_finite() {
            return Err(VsError::invalid("mach", "must be finite and positive"));
        }
        let c_bar = eos.sound_speed(rho_bar);
        SheetConfig::new(eos, params, rho_bar, mach * c_bar)
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    pub fn regime(&self) -> Regime {
        classify_threshold(self.mach, self.mach_crit)
    }

    /// The two background states in symmetrizable unknowns: (p, +-h w, 0).
    pub fn background_u(&self) -> (UState, UState) {
        let hw = self.h_bar * self.w_bar;
        (
            UState {
                p: self.p_bar,
                hw1: hw,
                hw2: 0.0,
            },
            UState {
                p: self.p_bar,
                hw1: -hw,
                hw2: 0.0,
            },
        )
    }

    /// The two background states in primitive variables: (rho, +-v, 0).
    pub fn background_prim(&self) -> (PrimState, PrimState) {
        (
            PrimState {
                rho: self.rho_bar,
                v1: self.v_bar,
                v2: 0.0,
            },
            PrimState {
                rho: self.rho_bar,
                v1: -self.v_bar,
                v2: 0.0,
            },
        )
    }
}

/// Serde shape for the equation of state.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EosSpec {
    Linear {
        sigma: f64,
        rho_min: f64,
        rho_max: f64,
        #[serde(default)]
        reference_density: Option<f64>,
    },
    GammaLaw {
        coefficient: f64,
        gamma_ad: f64,
        rho_min: f64,
        rho_max: f64,
        #[serde(default)]
        reference_density: Option<f64>,
    },
}

impl EosSpec {
    /// Builds the EOS, taking the reference density from the spec or, when
    /// absent, from the caller (the sheet density).
    pub fn build(&self, default_reference: Option<f64>) -> Result<Eos> {
        let pick = |r: &Option<f64>| -> Result<f64> {
            r.or(default_reference).ok_or_else(|| {
                VsError::invalid("reference_density", "missing and no rho_bar to default to")
            })
        };
        match self {
            EosSpec::Linear {
                sigma,
                rho_min,
                rho_max,
                reference_density,
            } => Eos::linear(*sigma, *rho_min, *rho_max, pick(reference_density)?),
            EosSpec::GammaLaw {
                coefficient,
                gamma_ad,
                rho_min,
                rho_max,
                reference_density,
            } => Eos::gamma_law(
                *coefficient,
                *gamma_ad,
                *rho_min,
                *rho_max,
                pick(reference_density)?,
            ),
        }
    }
}

impl TryFrom<EosSpec> for Eos {
    type Error = VsError;

    fn try_from(spec: EosSpec) -> Result<Eos> {
        spec.build(None)
    }
}

/// Serde shape for a full sheet configuration.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheetConfigSpec {
    pub eos: EosSpec,
    pub epsilon: f64,
    pub rho_bar: f64,
    pub v_bar: f64,
}

impl TryFrom<SheetConfigSpec> for SheetConfig {
    type Error = VsError;

    fn try_from(spec: SheetConfigSpec) -> Result<SheetConfig> {
        let eos = spec.eos.build(Some(spec.rho_bar))?;
        let params = FluidParams::new(spec.epsilon)?;
        SheetConfig::new(eos, params, spec.rho_bar, spec.v_bar)
    }
}
