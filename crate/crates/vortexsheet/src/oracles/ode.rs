//! Fixed-step integration of the interior-symbol ODE dW/dx2 = A W, used to
//! confirm decay and growth rates predicted by the eigenvalues.

use crate::error::{Result, VsError};
use crate::linalg::{cnorm, CMat4};
use crate::tol;
use num_complex::Complex64 as C64;

/// Integration direction along x2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// From 0 towards x2_max.
    Forward,
    /// From x2_max towards 0.
    Backward,
}

/// Least-squares fit of log-magnitude against x2.
#[derive(Clone, Debug)]
pub struct DecayFit {
    /// Fitted d(log ||W||)/d x2 along increasing x2.
    pub slope: f64,
    /// Coefficient of determination of the linear fit.
    pub r2: f64,
    pub steps: usize,
    pub step_size: f64,
}

fn rk4_step(a: &CMat4, w: &[C64; 4], h: f64, sign: f64) -> [C64; 4] {
    let f = |v: &[C64; 4]| -> [C64; 4] {
        let mut r = a.matvec(*v);
        for x in r.iter_mut() {
            *x *= sign;
        }
        r
    };
    let k1 = f(w);
    let mut tmp = *w;
    for i in 0..4 {
        tmp[i] = w[i] + k1[i] * (h / 2.0);
    }
    let k2 = f(&tmp);
    for i in 0..4 {
        tmp[i] = w[i] + k2[i] * (h / 2.0);
    }
    let k3 = f(&tmp);
    for i in 0..4 {
        tmp[i] = w[i] + k3[i] * h;
    }
    let k4 = f(&tmp);
    let mut out = *w;
    for i in 0..4 {
        out[i] = w[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
    }
    out
}

/// Integrates dW/dx2 = A W with RK4 at a step keeping ||A|| h below
/// `ODE_STEP_FRACTION`, then fits the log-magnitude slope.
///
/// `Backward` integrates in decreasing x2 (so a mode growing in x2 stays
/// bounded); the reported slope is always per unit of increasing x2.
pub fn ode_decay_fit(
    a: &CMat4,
    w0: [C64; 4],
    x2_max: f64,
    direction: Direction,
) -> Result<DecayFit> {
    if !(x2_max > 0.0) || !x2_max.is_finite() {
        return Err(VsError::invalid("x2_max", "must be finite and positive"));
    }
    let norm_a = a.frob().max(1e-300);
    let h = tol::ODE_STEP_FRACTION / norm_a;
    let steps = ((x2_max / h).ceil() as usize).max(8);
    let h = x2_max / steps as f64;
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let mut w = w0;
    let n0 = cnorm(&w0);
    if n0 == 0.0 {
        return Err(VsError::invalid("w0", "initial vector vanishes"));
    }
    let mut xs: Vec<f64> = Vec::with_capacity(steps + 1);
    let mut ys: Vec<f64> = Vec::with_capacity(steps + 1);
    xs.push(0.0);
    ys.push(n0.ln());
    for s in 0..steps {
        w = rk4_step(a, &w, h, sign);
        let n = cnorm(&w);
        let x = (s + 1) as f64 * h;
        if !n.is_finite() || n > tol::ODE_OVERFLOW {
            return Err(VsError::Overflow { x2: x });
        }
        if n == 0.0 {
            break;
        }
        xs.push(x);
        ys.push(n.ln());
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    let slope_tau = sxy / sxx;
    let r2 = if syy > 0.0 {
        (sxy * sxy) / (sxx * syy)
    } else {
        1.0
    };
    // slope_tau is per unit of integration time; convert to per unit x2.
    let slope = sign * slope_tau;
    Ok(DecayFit {
        slope,
        r2,
        steps,
        step_size: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::czero;

    #[test]
    fn pure_mode_decay_rate_matches_eigenvalue() {
        let a = CMat4::diag([
            C64::new(-0.8, 2.0),
            C64::new(-1.7, 0.0),
            C64::new(0.9, -1.0),
            C64::new(1.3, 0.0),
        ]);
        let mut w0 = [czero(); 4];
        w0[0] = C64::new(1.0, 0.0);
        let fit = ode_decay_fit(&a, w0, 5.0, Direction::Forward).unwrap();
        assert!((fit.slope - (-0.8)).abs() < 0.8 * 0.02, "slope {}", fit.slope);
        assert!(fit.r2 > 0.9999);
    }

    #[test]
    fn unstable_mode_measured_backward() {
        let a = CMat4::diag([
            C64::new(-0.5, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(2.4, 1.0),
            C64::new(1.1, 0.0),
        ]);
        let mut w0 = [czero(); 4];
        w0[2] = C64::new(1.0, 0.0);
        let fit = ode_decay_fit(&a, w0, 5.0, Direction::Backward).unwrap();
        assert!((fit.slope - 2.4).abs() < 2.4 * 0.02, "slope {}", fit.slope);
    }

    #[test]
    fn overflow_reports_suggestion() {
        let a = CMat4::diag([
            C64::new(50.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(-2.0, 0.0),
            C64::new(-3.0, 0.0),
        ]);
        let mut w0 = [czero(); 4];
        w0[0] = C64::new(1.0, 0.0);
        let err = ode_decay_fit(&a, w0, 50.0, Direction::Forward).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("smaller x2_max"), "message: {msg}");
    }
}
