//! Frequency-space symbols of the linearized planar-sheet problem: front
//! symbols b, Q, theta, the reduced boundary symbol beta, the two-block
//! interior symbol with its decaying eigenvalues, stable eigenvectors, and
//! the triangularizing basis.

use num_complex::Complex64 as C64;

use crate::eos::SheetConfig;
use crate::error::{Result, VsError};
use crate::linalg::{cim, cinverse, cone, cre, czero, CMat, CMat3, CMat4};
use crate::tol;

/// Laplace-Fourier frequency (tau, eta) = (gamma + i delta, eta).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frequency {
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
}

impl Frequency {
    /// Validated frequency: gamma >= 0 and (tau, eta) != (0, 0).
    pub fn new(gamma: f64, delta: f64, eta: f64) -> Result<Frequency> {
        if !(gamma.is_finite() && delta.is_finite() && eta.is_finite()) {
            return Err(VsError::invalid("frequency", "components must be finite"));
        }
        if gamma < 0.0 {
            return Err(VsError::invalid("frequency", "gamma must be nonnegative"));
        }
        if gamma == 0.0 && delta == 0.0 && eta == 0.0 {
            return Err(VsError::invalid("frequency", "(tau, eta) must be nonzero"));
        }
        Ok(Frequency { gamma, delta, eta })
    }

    /// Dual time variable tau = gamma + i delta.
    pub fn tau(&self) -> C64 {
        C64::new(self.gamma, self.delta)
    }

    /// Magnitude sqrt(|tau|^2 + eta^2).
    pub fn k(&self) -> f64 {
        (self.gamma * self.gamma + self.delta * self.delta + self.eta * self.eta).sqrt()
    }

    /// Radial projection onto the hemisphere |tau|^2 + eta^2 = 1.
    pub fn normalized(&self) -> Frequency {
        self.scaled(1.0 / self.k())
    }

    /// Scaled frequency (s tau, s eta), s > 0.
    pub fn scaled(&self, s: f64) -> Frequency {
        Frequency {
            gamma: self.gamma * s,
            delta: self.delta * s,
            eta: self.eta * s,
        }
    }
}

/// Side of the sheet; fixes the sign in tau +- i v eta.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn label(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }
}

/// tau +- i v eta, the advected time frequency seen from one side.
pub fn a_pm(cfg: &SheetConfig, f: &Frequency, side: Side) -> C64 {
    f.tau() + cim(side.sign() * cfg.v_bar * f.eta)
}

/// Positive constants of the eigenvalue quadratic
/// omega^2 = C0^2 (C1^2 (tau +- i C2 eta)^2 + eta^2).
#[derive(Clone, Copy, Debug)]
pub struct CBar {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl CBar {
    pub fn new(cfg: &SheetConfig) -> CBar {
        let e2 = cfg.epsilon() * cfg.epsilon();
        let v = cfg.v_bar;
        let c = cfg.c_bar;
        let s = 1.0 - e2 * e2 * c * c * v * v;
        let one_minus = 1.0 - e2 * v * v;
        CBar {
            c0: cfg.gamma_bar * one_minus / s.sqrt(),
            c1: s / (one_minus * c),
            c2: (1.0 - e2 * c * c) * v / s,
        }
    }
}

/// Front symbol b, its annihilator Q with Q b = (0, 0, theta), and the
/// two-row boundary symbol beta (degree-zero homogeneous).
#[derive(Clone, Debug)]
pub struct BoundarySymbols {
    pub b: [C64; 3],
    pub q: CMat3,
    pub theta: C64,
    pub beta: CMat<2, 4>,
}

pub fn boundary_symbols(cfg: &SheetConfig, f: &Frequency) -> BoundarySymbols {
    let v = cfg.v_bar;
    let k = f.k();
    let tau = f.tau();
    let ive = cim(v * f.eta);
    let b = [cim(2.0 * v * f.eta), tau + ive, czero()];
    let q = CMat3::from_rows([
        [czero(), czero(), cre(1.0)],
        [(tau + ive) / k, -cim(2.0 * v * f.eta) / k, czero()],
        [-cim(2.0 * v * f.eta) / k, (tau.conj() - ive) / k, czero()],
    ]);
    let theta = cre((b[0].norm_sqr() + b[1].norm_sqr()) / k);
    // Degree-zero extension: the linear rows are evaluated on the hemisphere.
    let tn = tau / k;
    let en = f.eta / k;
    let d = cfg.gamma_bar * cfg.c_bar * cfg.h_bar;
    let ap = tn + cim(v * en);
    let am = tn - cim(v * en);
    let beta = CMat::from_rows([
        [cre(1.0), cre(1.0), cre(-1.0), cre(-1.0)],
        [am / d, -am / d, -ap / d, ap / d],
    ]);
    BoundarySymbols { b, q, theta, beta }
}

/// Interior symbol: block matrix of two 2x2 blocks together with its entry
/// functions mu and m per side.
#[derive(Clone, Debug)]
pub struct InteriorSymbol {
    pub a: CMat4,
    pub mu_plus: C64,
    pub mu_minus: C64,
    pub m_plus: C64,
    pub m_minus: C64,
}

fn m_pm(cfg: &SheetConfig, f: &Frequency, side: Side) -> Result<C64> {
    let a = a_pm(cfg, f, side);
    let k = f.k();
    if a.norm() < tol::POLE_RTOL * k {
        return Err(VsError::SymbolPole {
            side: side.label(),
            distance: a.norm() / k,
        });
    }
    let e2 = cfg.epsilon() * cfg.epsilon();
    let w = cim(f.eta) + f.tau() * (side.sign() * e2 * cfg.v_bar);
    Ok(w * w * (0.5 * cfg.c_bar * cfg.gamma_bar) / a)
}

pub fn interior_symbol(cfg: &SheetConfig, f: &Frequency) -> Result<InteriorSymbol> {
    let m_plus = m_pm(cfg, f, Side::Plus)?;
    let m_minus = m_pm(cfg, f, Side::Minus)?;
    let gc = cfg.gamma_bar / cfg.c_bar;
    let mu_plus = a_pm(cfg, f, Side::Plus) * gc - m_plus;
    let mu_minus = a_pm(cfg, f, Side::Minus) * gc - m_minus;
    let z = czero();
    let a = CMat4::from_rows([
        [mu_plus, -m_plus, z, z],
        [m_plus, -mu_plus, z, z],
        [z, z, -mu_minus, m_minus],
        [z, z, -m_minus, mu_minus],
    ]);
    Ok(InteriorSymbol {
        a,
        mu_plus,
        mu_minus,
        m_plus,
        m_minus,
    })
}

/// Block eigenvalue with nonpositive real part, plus a flag marking the
/// glancing degeneracy omega = 0 within tolerance.
#[derive(Clone, Copy, Debug)]
pub struct OmegaBranch {
    pub value: C64,
    pub glancing: bool,
}

/// Decaying eigenvalue of one 2x2 block. For gamma > 0 the branch is the
/// root of the quadratic with negative real part; on gamma = 0 the value is
/// the continuous extension from the interior.
pub fn omega(cfg: &SheetConfig, f: &Frequency, side: Side) -> OmegaBranch {
    omega_from(&CBar::new(cfg), f, side)
}

/// Same as `omega` with the constants precomputed.
pub fn omega_from(cb: &CBar, f: &Frequency, side: Side) -> OmegaBranch {
    let value = if f.gamma > 0.0 {
        let shifted = f.tau() + cim(side.sign() * cb.c2 * f.eta);
        let arg = shifted * shifted * (cb.c1 * cb.c1) + cre(f.eta * f.eta);
        let s = arg.sqrt();
        if s.re > 0.0 {
            -s * cb.c0
        } else {
            s * cb.c0
        }
    } else {
        let d = f.delta + side.sign() * cb.c2 * f.eta;
        let disc = f.eta * f.eta - cb.c1 * cb.c1 * d * d;
        if disc >= 0.0 {
            cre(-cb.c0 * disc.sqrt())
        } else {
            cim(-d.signum() * cb.c0 * (-disc).sqrt())
        }
    };
    OmegaBranch {
        value,
        glancing: value.norm() <= tol::GLANCING_RTOL * f.k(),
    }
}

fn stable_pair(cfg: &SheetConfig, f: &Frequency, side: Side) -> [C64; 2] {
    let e2 = cfg.epsilon() * cfg.epsilon();
    let a = a_pm(cfg, f, side);
    let w = cim(f.eta) + f.tau() * (side.sign() * e2 * cfg.v_bar);
    // a*m in product form, finite across the pole a = 0.
    let am = w * w * (0.5 * cfg.c_bar * cfg.gamma_bar);
    let om = omega(cfg, f, side).value;
    let second = a * a * (cfg.gamma_bar / cfg.c_bar) - am - a * om;
    [am, second]
}

/// Spanning vectors (E+, E-) of the decaying solution space, scaled so both
/// stay finite and nonzero across the poles of the interior symbol.
pub fn stable_vectors(cfg: &SheetConfig, f: &Frequency) -> ([C64; 4], [C64; 4]) {
    let p = stable_pair(cfg, f, Side::Plus);
    let m = stable_pair(cfg, f, Side::Minus);
    let z = czero();
    ([p[0], p[1], z, z], [z, z, m[1], m[0]])
}

/// Everything the boundary determinant needs at one frequency.
#[derive(Clone, Debug)]
pub struct SymbolBundle {
    pub interior: InteriorSymbol,
    pub omega_plus: OmegaBranch,
    pub omega_minus: OmegaBranch,
    pub e_plus: [C64; 4],
    pub e_minus: [C64; 4],
    pub beta: CMat<2, 4>,
    pub cbar: CBar,
}

pub fn symbol_bundle(cfg: &SheetConfig, f: &Frequency) -> Result<SymbolBundle> {
    let interior = interior_symbol(cfg, f)?;
    let (e_plus, e_minus) = stable_vectors(cfg, f);
    Ok(SymbolBundle {
        interior,
        omega_plus: omega(cfg, f, Side::Plus),
        omega_minus: omega(cfg, f, Side::Minus),
        e_plus,
        e_minus,
        beta: boundary_symbols(cfg, f).beta,
        cbar: CBar::new(cfg),
    })
}

/// Triangularizing basis with E+ and E- as columns 1 and 3 and unit
/// completion vectors, together with the off-diagonal couplings.
#[derive(Clone, Debug)]
pub struct Triangularization {
    pub t: CMat4,
    pub t_inv: CMat4,
    pub z_plus: C64,
    pub z_minus: C64,
    pub residual: f64,
}

pub fn triangularize(cfg: &SheetConfig, f: &Frequency) -> Result<Triangularization> {
    let sym = interior_symbol(cfg, f)?;
    let (ep, em) = stable_vectors(cfg, f);
    let wp = omega(cfg, f, Side::Plus).value;
    let wm = omega(cfg, f, Side::Minus).value;
    // Completion hits the weaker component of E so the block stays invertible.
    let ip = if ep[0].norm() >= ep[1].norm() { 1 } else { 0 };
    let im = if em[3].norm() >= em[2].norm() { 2 } else { 3 };
    let mut t = CMat4::zeros();
    for r in 0..4 {
        t.m[r][0] = ep[r];
        t.m[r][2] = em[r];
    }
    t.m[ip][1] = cone();
    t.m[im][3] = cone();
    let t_inv = cinverse(&t).ok_or_else(|| VsError::Verification {
        name: "triangularize".into(),
        detail: "basis matrix is singular".into(),
    })?;
    let g = t_inv.mul(&sym.a).mul(&t);
    let z_plus = g.m[0][1];
    let z_minus = g.m[2][3];
    let mut expect = CMat4::zeros();
    expect.m[0][0] = wp;
    expect.m[0][1] = z_plus;
    expect.m[1][1] = -wp;
    expect.m[2][2] = wm;
    expect.m[2][3] = z_minus;
    expect.m[3][3] = -wm;
    let residual = g.sub(&expect).max_abs();
    let bound = tol::EIGEN_RTOL * f.k();
    if residual > bound {
        return Err(VsError::Verification {
            name: "triangularize".into(),
            detail: format!("triangular residual {residual:.3e} exceeds {bound:.3e}"),
        });
    }
    Ok(Triangularization {
        t,
        t_inv,
        z_plus,
        z_minus,
        residual,
    })
}
