//! The boundary determinant of the normal-mode problem: closed product form,
//! determinant form over the stable vectors, explicit root structure on the
//! frequency hemisphere, ordering chain, simplicity certificates, and scans.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::eos::{Regime, SheetConfig};
use crate::error::{Result, VsError};
use crate::linalg::{cim, cnorm, cre};
use crate::symbols::{a_pm, boundary_symbols, omega, stable_vectors, CBar, Frequency, Side};
use crate::tol;

/// Even quartic E1 z^4 + E2 z^2 + E3 whose positive roots locate the
/// boundary zeros tau = +- i z1 eta, together with its discriminant data.
#[derive(Clone, Copy, Debug)]
pub struct RootPoly {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub d: f64,
    pub z1sq: f64,
    pub z2sq: f64,
    /// None when z1sq < 0 (subcritical regime).
    pub z1: Option<f64>,
    pub z2: f64,
}

impl RootPoly {
    /// Ascending coefficients [E3, 0, E2, 0, E1].
    pub fn coeffs(&self) -> [f64; 5] {
        [self.e3, 0.0, self.e2, 0.0, self.e1]
    }

    pub fn p0(&self, z: f64) -> f64 {
        (self.e1 * z * z + self.e2) * z * z + self.e3
    }

    pub fn p0_deriv(&self, z: f64) -> f64 {
        (4.0 * self.e1 * z * z + 2.0 * self.e2) * z
    }
}

pub fn root_polynomial(cfg: &SheetConfig) -> RootPoly {
    let ep = cfg.epsilon();
    let ep2 = ep * ep;
    let v2 = cfg.v_bar * cfg.v_bar;
    let c2 = cfg.c_bar * cfg.c_bar;
    let e1 = 2.0 * ep2 * ep2 * c2 * v2 - ep2 * c2 - 1.0;
    let e2 = 2.0 * ep2 * ep2 * c2 * v2 * v2 - 6.0 * ep2 * c2 * v2 + 2.0 * v2 + 2.0 * c2;
    let e3 = 2.0 * c2 * v2 - ep2 * c2 * v2 * v2 - v2 * v2;
    let d = e2 * e2 - 4.0 * e1 * e3;
    let evm = ep * cfg.v_bar - 1.0;
    let evp = ep * cfg.v_bar + 1.0;
    let d_factored = 4.0
        * c2
        * evm
        * evm
        * evp
        * evp
        * (ep2 * ep2 * c2 * v2 * v2 - 2.0 * ep2 * c2 * v2 + c2 + 4.0 * v2);
    // Scale by the pre-cancellation magnitude: near the light-speed edge the
    // expanded route loses digits while the factored route stays exact.
    let d_scale = e2 * e2 + 4.0 * (e1 * e3).abs();
    assert!(
        (d - d_factored).abs() <= 1e-12 * d_scale,
        "discriminant routes disagree: {d} vs {d_factored}"
    );
    let sqrt_d = d.sqrt();
    let z1sq = (e2 - sqrt_d) / (-2.0 * e1);
    let z2sq = (e2 + sqrt_d) / (-2.0 * e1);
    RootPoly {
        e1,
        e2,
        e3,
        d,
        z1sq,
        z2sq,
        z1: if z1sq >= 0.0 { Some(z1sq.sqrt()) } else { None },
        z2: z2sq.sqrt(),
    }
}

/// The three factors of the determinant, in product order. The first two are
/// nonvanishing on the closed hemisphere in the supercritical regime; the
/// third carries all the roots.
pub fn delta_factors(cfg: &SheetConfig, f: &Frequency) -> (C64, C64, C64) {
    let wp = omega(cfg, f, Side::Plus).value;
    let wm = omega(cfg, f, Side::Minus).value;
    let ap = a_pm(cfg, f, Side::Plus);
    let am = a_pm(cfg, f, Side::Minus);
    let r = cfg.c_bar / cfg.gamma_bar;
    (ap - wp * r, am - wm * r, wm * ap * ap + wp * am * am)
}

/// Boundary determinant in closed product form; homogeneous of degree five.
pub fn delta(cfg: &SheetConfig, f: &Frequency) -> C64 {
    let (f1, f2, f3) = delta_factors(cfg, f);
    f1 * f2 * f3 / (cfg.c_bar * cfg.c_bar * cfg.h_bar)
}

/// Determinant of the boundary symbol applied to the stable vectors, scaled
/// back to the degree of the closed product. Agrees with `delta` pointwise.
pub fn delta_det(cfg: &SheetConfig, f: &Frequency) -> C64 {
    let beta = boundary_symbols(cfg, f).beta;
    let (ep, em) = stable_vectors(cfg, f);
    let bp = beta.matvec(ep);
    let bm = beta.matvec(em);
    (bp[0] * bm[1] - bp[1] * bm[0]) * f.k()
}

/// One inequality of the ordering chain with its reported slack.
#[derive(Clone, Debug)]
pub struct OrderingLink {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Clone, Debug)]
pub struct OrderingReport {
    pub links: Vec<OrderingLink>,
    pub min_slack: f64,
}

fn link(name: &'static str, lhs: f64, rhs: f64) -> OrderingLink {
    OrderingLink {
        name,
        lhs,
        rhs,
        slack: rhs - lhs,
    }
}

/// Checks the full ordering chain of the supercritical root structure.
/// Degenerate equalities (exactly Newtonian backgrounds) pass with zero slack.
pub fn verify_orderings(cfg: &SheetConfig) -> Result<OrderingReport> {
    if cfg.regime() != Regime::WeaklyStable {
        return Err(VsError::Verification {
            name: "ordering".into(),
            detail: "chain requires the supercritical regime".into(),
        });
    }
    let rp = root_polynomial(cfg);
    let z1 = rp.z1.expect("supercritical regime has a real z1");
    let cb = CBar::new(cfg);
    let inv_c1 = 1.0 / cb.c1;
    let links = vec![
        link("0 < z1", 0.0, z1),
        link("z1 < C2 - 1/C1", z1, cb.c2 - inv_c1),
        link("C2 - 1/C1 < C2", cb.c2 - inv_c1, cb.c2),
        link("C2 < v", cb.c2, cfg.v_bar),
        link("v < C2 + 1/C1", cfg.v_bar, cb.c2 + inv_c1),
        link("C2 + 1/C1 < z2", cb.c2 + inv_c1, rp.z2),
        link("1/C1 < z1 + C2", inv_c1, z1 + cb.c2),
        link("z1 - C2 < -1/C1", z1 - cb.c2, -inv_c1),
    ];
    let mut min_slack = f64::INFINITY;
    for l in &links {
        let floor = -tol::ORDERING_SLACK_RTOL * (1.0 + l.lhs.abs() + l.rhs.abs());
        if l.slack < floor {
            return Err(VsError::Verification {
                name: "ordering".into(),
                detail: format!("link '{}' violated: {:.6e} vs {:.6e}", l.name, l.lhs, l.rhs),
            });
        }
        min_slack = min_slack.min(l.slack);
    }
    Ok(OrderingReport { links, min_slack })
}

/// Certificate that tau = 0 is a third-order zero at the critical Mach
/// number: the first two rescaled limits vanish and the third stabilizes.
#[derive(Clone, Debug)]
pub struct TripleRootCert {
    pub linear_ratio: f64,
    pub quadratic_ratio: f64,
    pub cubic_limit: C64,
    pub cubic_drift: f64,
}

pub fn triple_root_certificate(cfg: &SheetConfig) -> Result<TripleRootCert> {
    let eta = 1.0;
    let ts = [1e-2, 1e-3, 1e-4];
    let vals: Vec<C64> = ts
        .iter()
        .map(|&t| delta(cfg, &Frequency::new(t, 0.0, eta).expect("nonzero frequency")))
        .collect();
    let r3: Vec<C64> = vals.iter().zip(&ts).map(|(v, &t)| v / (t * t * t)).collect();
    let cubic = r3[2];
    if cubic.norm() < 1e-8 {
        return Err(VsError::Verification {
            name: "triple_root".into(),
            detail: format!("cubic limit {:.3e} is not bounded away from zero", cubic.norm()),
        });
    }
    let cubic_drift = (r3[2] - r3[1]).norm() / cubic.norm();
    if cubic_drift > 0.05 {
        return Err(VsError::NoConvergence {
            what: "triple root cubic limit",
            iterations: ts.len(),
        });
    }
    let linear_ratio = vals[2].norm() / ts[2] / cubic.norm();
    let quadratic_ratio = vals[2].norm() / (ts[2] * ts[2]) / cubic.norm();
    if linear_ratio > 1e-6 || quadratic_ratio > 1e-2 {
        return Err(VsError::Verification {
            name: "triple_root".into(),
            detail: format!(
                "lower-order limits do not vanish: {linear_ratio:.3e}, {quadratic_ratio:.3e}"
            ),
        });
    }
    Ok(TripleRootCert {
        linear_ratio,
        quadratic_ratio,
        cubic_limit: cubic,
        cubic_drift,
    })
}

/// Determinant evaluated as an analytic function of complex tau, used by the
/// interior root finder. Matches `delta` wherever Re tau > 0.
fn delta_analytic(cfg: &SheetConfig, tau: C64, eta: f64) -> C64 {
    let cb = CBar::new(cfg);
    let om = |sign: f64| {
        let shifted = tau + cim(sign * cb.c2 * eta);
        let s = (shifted * shifted * (cb.c1 * cb.c1) + cre(eta * eta)).sqrt();
        if s.re > 0.0 {
            -s * cb.c0
        } else {
            s * cb.c0
        }
    };
    let wp = om(1.0);
    let wm = om(-1.0);
    let ap = tau + cim(cfg.v_bar * eta);
    let am = tau - cim(cfg.v_bar * eta);
    let r = cfg.c_bar / cfg.gamma_bar;
    (ap - wp * r) * (am - wm * r) * (wm * ap * ap + wp * am * am)
        / (cfg.c_bar * cfg.c_bar * cfg.h_bar)
}

/// Locates a zero with Re tau > 0 at eta = 1 in the subcritical regime by
/// Newton iteration seeded from the analytic continuation of z1.
pub fn interior_root(cfg: &SheetConfig) -> Result<C64> {
    if cfg.regime() != Regime::ViolentlyUnstable {
        return Err(VsError::Verification {
            name: "interior_root".into(),
            detail: "search applies to the subcritical regime only".into(),
        });
    }
    let rp = root_polynomial(cfg);
    let base = (-rp.z1sq).max(1e-6).sqrt();
    let eta = 1.0;
    let seeds = [
        cre(base),
        cre(0.5 * base),
        cre(2.0 * base),
        C64::new(base, 0.3 * base),
        C64::new(base, -0.3 * base),
    ];
    for seed in seeds {
        if let Some(root) = newton_root(cfg, seed, eta) {
            if root.re > 0.0 {
                return Ok(root);
            }
        }
    }
    Err(VsError::NoConvergence {
        what: "interior root search",
        iterations: seeds.len(),
    })
}

fn newton_root(cfg: &SheetConfig, seed: C64, eta: f64) -> Option<C64> {
    let mut tau = seed;
    let mut val = delta_analytic(cfg, tau, eta);
    for _ in 0..60 {
        if val.norm() < 1e-14 {
            break;
        }
        let h = 1e-7 * (1.0 + tau.norm());
        let dp = delta_analytic(cfg, tau + cre(h), eta);
        let dm = delta_analytic(cfg, tau - cre(h), eta);
        let deriv = (dp - dm) / (2.0 * h);
        if deriv.norm() == 0.0 {
            return None;
        }
        let mut step = -val / deriv;
        let mut trial = tau + step;
        let mut trial_val = delta_analytic(cfg, trial, eta);
        let mut tries = 0;
        while trial_val.norm() > val.norm() && tries < 8 {
            step = step * 0.5;
            trial = tau + step;
            trial_val = delta_analytic(cfg, trial, eta);
            tries += 1;
        }
        tau = trial;
        val = trial_val;
    }
    (val.norm() < tol::INTERIOR_ROOT_TOL).then_some(tau)
}

/// Summary of where the determinant vanishes for a configuration.
#[derive(Clone, Debug)]
pub struct LopReport {
    pub regime: Regime,
    /// Boundary root rays tau = i q eta.
    pub boundary_roots: Vec<f64>,
    /// Interior zeros (tau at eta = 1) in the subcritical regime.
    pub interior_roots: Vec<C64>,
    pub triple_root: Option<TripleRootCert>,
    pub ordering: Option<OrderingReport>,
}

pub fn classify_roots(cfg: &SheetConfig) -> Result<LopReport> {
    let regime = cfg.regime();
    match regime {
        Regime::WeaklyStable => {
            let rp = root_polynomial(cfg);
            let z1 = rp.z1.expect("supercritical regime has a real z1");
            Ok(LopReport {
                regime,
                boundary_roots: vec![0.0, z1, -z1],
                interior_roots: vec![],
                triple_root: None,
                ordering: Some(verify_orderings(cfg)?),
            })
        }
        Regime::Transition => Ok(LopReport {
            regime,
            boundary_roots: vec![0.0],
            interior_roots: vec![],
            triple_root: Some(triple_root_certificate(cfg)?),
            ordering: None,
        }),
        Regime::ViolentlyUnstable => Ok(LopReport {
            regime,
            boundary_roots: vec![],
            interior_roots: vec![interior_root(cfg)?],
            triple_root: None,
            ordering: None,
        }),
    }
}

/// Q1, Q2 at a real boundary ratio z, defined where both eigenvalue branches
/// are oscillatory; None inside either elliptic band.
pub fn q_pair(cfg: &SheetConfig, z: f64) -> Option<(f64, f64)> {
    let cb = CBar::new(cfg);
    let dp = z + cb.c2;
    let dm = z - cb.c2;
    let hp = cb.c1 * cb.c1 * dp * dp - 1.0;
    let hm = cb.c1 * cb.c1 * dm * dm - 1.0;
    if hp < 0.0 || hm < 0.0 {
        return None;
    }
    let omega_plus = -dp.signum() * cb.c0 * hp.sqrt();
    let omega_minus = -dm.signum() * cb.c0 * hm.sqrt();
    let vp = z + cfg.v_bar;
    let vm = z - cfg.v_bar;
    Some((omega_minus * vp * vp, omega_plus * vm * vm))
}

/// Closed-form derivative of Q1 + Q2 at a root q, via the even quartic.
pub fn q_sum_derivative(cfg: &SheetConfig, rp: &RootPoly, q: f64) -> Result<f64> {
    let (q1, _) = q_pair(cfg, q).ok_or_else(|| VsError::Verification {
        name: "root_simplicity".into(),
        detail: format!("ratio {q} is not in the oscillatory region"),
    })?;
    let g2 = cfg.gamma_bar * cfg.gamma_bar;
    let c2 = cfg.c_bar * cfg.c_bar;
    let v = cfg.v_bar;
    Ok(g2 / (c2 * q1) * (-2.0 * v * rp.p0(q) - 4.0 * v * q * q * (2.0 * rp.e1 * q * q + rp.e2)))
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss_res = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - intercept - slope * x;
        ss_res += r * r;
    }
    (intercept, slope, 1.0 - ss_res / syy)
}

/// Simplicity data for one boundary root ray tau = i q eta.
#[derive(Clone, Debug)]
pub struct SimplicityReport {
    pub q: f64,
    /// Limit of Delta / (tau - i q eta), real and nonzero at a simple root.
    pub h_q: C64,
    pub h_q_drift: f64,
    pub dq_closed: f64,
    pub dq_fd: f64,
    /// Max |Re Delta| / |Delta| on the nearby oscillatory boundary segment.
    pub re_purity: f64,
    pub slope: f64,
    pub r2: f64,
}

pub fn root_simplicity(cfg: &SheetConfig, q: f64) -> Result<SimplicityReport> {
    if cfg.regime() != Regime::WeaklyStable {
        return Err(VsError::Verification {
            name: "root_simplicity".into(),
            detail: "simplicity applies to the supercritical regime only".into(),
        });
    }
    let eta = 1.0;
    let k = (q * q + 1.0).sqrt();
    // Richardson extrapolation of Delta/(tau - i q) along the decay axis.
    let f = |h: f64| delta(cfg, &Frequency::new(h, q, eta).expect("nonzero")) / h;
    let h0 = 1e-3 * k;
    let (f1, f2, f3) = (f(h0), f(0.5 * h0), f(0.25 * h0));
    let p1 = f2 * 2.0 - f1;
    let p2 = f3 * 2.0 - f2;
    let h_q = (p2 * 4.0 - p1) / 3.0;
    let h_q_drift = (p2 - p1).norm() / h_q.norm().max(1e-300);
    if h_q_drift > 0.1 {
        return Err(VsError::NoConvergence {
            what: "root factor extrapolation",
            iterations: 3,
        });
    }
    let scale = 1.0 + f1.norm();
    if h_q.norm() < tol::SIMPLE_ROOT_TOL * scale {
        return Err(VsError::Verification {
            name: "root_simplicity".into(),
            detail: format!("factor at ratio {q} is numerically zero: {:.3e}", h_q.norm()),
        });
    }
    if h_q.im.abs() > 1e-6 * h_q.norm() {
        return Err(VsError::Verification {
            name: "root_simplicity".into(),
            detail: format!("factor at ratio {q} is not real: {h_q}"),
        });
    }
    // Slope of Q1 + Q2 across the root: closed form against differences.
    let rp = root_polynomial(cfg);
    let dq_closed = q_sum_derivative(cfg, &rp, q)?;
    let hfd = 1e-5;
    let sum = |z: f64| {
        let (q1, q2) = q_pair(cfg, z).expect("oscillatory near a root");
        q1 + q2
    };
    let dq_fd = (sum(q + hfd) - sum(q - hfd)) / (2.0 * hfd);
    if (dq_closed - dq_fd).abs() > 1e-6 * dq_closed.abs() {
        return Err(VsError::Verification {
            name: "root_simplicity".into(),
            detail: format!("slope routes disagree: {dq_closed} vs {dq_fd}"),
        });
    }
    // Purity: Delta is imaginary on the oscillatory boundary segment.
    let cb = CBar::new(cfg);
    let mut re_purity = 0.0f64;
    for i in 0..41 {
        let delta_ratio = q + 0.05 * (i as f64 - 20.0) / 20.0;
        let dp = delta_ratio + cb.c2;
        let dm = delta_ratio - cb.c2;
        if cb.c1 * dp.abs() <= 1.0 || cb.c1 * dm.abs() <= 1.0 {
            continue;
        }
        let val = delta(cfg, &Frequency::new(0.0, delta_ratio, eta).expect("nonzero"));
        if val.norm() < 1e-11 {
            continue;
        }
        re_purity = re_purity.max(val.re.abs() / val.norm());
    }
    if re_purity > 1e-12 {
        return Err(VsError::Verification {
            name: "root_simplicity".into(),
            detail: format!("boundary values are not imaginary: purity {re_purity:.3e}"),
        });
    }
    // Linear growth of |Delta| off the boundary at the root.
    let mut gammas = Vec::new();
    let mut mags = Vec::new();
    for i in 0..20 {
        let g = 1e-6 * (1e3f64).powf(i as f64 / 19.0);
        gammas.push(g);
        mags.push(delta(cfg, &Frequency::new(g, q, eta).expect("nonzero")).norm());
    }
    let (_, slope, r2) = linear_fit(&gammas, &mags);
    if slope <= 0.0 || r2 <= 0.999 {
        return Err(VsError::Verification {
            name: "root_simplicity".into(),
            detail: format!("growth fit failed: slope {slope:.3e}, r2 {r2}"),
        });
    }
    Ok(SimplicityReport {
        q,
        h_q,
        h_q_drift,
        dq_closed,
        dq_fd,
        re_purity,
        slope,
        r2,
    })
}

/// One grid node of a hemisphere scan.
#[derive(Clone, Copy, Debug)]
pub struct ScanRow {
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

/// Evaluates the determinant over the (delta, eta) square [-1,1]^2 at a fixed
/// decay offset, row-major with delta as the outer index. The origin (only
/// present for odd resolutions at zero offset) is reported as NaN.
pub fn scan(cfg: &SheetConfig, resolution: usize, gamma: f64) -> Vec<ScanRow> {
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / (resolution - 1) as f64;
    (0..resolution)
        .into_par_iter()
        .map(|i| {
            let delta = coord(i);
            (0..resolution)
                .map(|j| {
                    let eta = coord(j);
                    match Frequency::new(gamma, delta, eta) {
                        Ok(f) => {
                            let val = crate::lopatinskii::delta(cfg, &f);
                            ScanRow {
                                gamma,
                                delta,
                                eta,
                                re: val.re,
                                im: val.im,
                                abs: val.norm(),
                            }
                        }
                        Err(_) => ScanRow {
                            gamma,
                            delta,
                            eta,
                            re: f64::NAN,
                            im: f64::NAN,
                            abs: f64::NAN,
                        },
                    }
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}
