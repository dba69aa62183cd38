//! Polynomial root finding through companion matrices.
//!
//! Coefficients are ascending: `coeffs[j]` multiplies `z^j`. Degrees 1 and 2
//! use closed forms; higher degrees go through the shared Hessenberg QR core
//! and two Newton polishing steps.

use super::qr::{hessenberg_eigenvalues, DMat};
use crate::error::{Result, VsError};
use crate::tol;
use num_complex::Complex64 as C64;

/// Horner evaluation of `sum coeffs[j] z^j`.
pub fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Coefficients of the derivative polynomial.
pub fn poly_deriv(coeffs: &[C64]) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, &c)| c * (j as f64))
        .collect()
}

/// Real-coefficient convenience wrapper.
pub fn poly_eval_real(coeffs: &[f64], z: C64) -> C64 {
    let cs: Vec<C64> = coeffs.iter().map(|&c| C64::new(c, 0.0)).collect();
    poly_eval(&cs, z)
}

/// Roots with their evaluation residuals, ordered by (Re, Im).
#[derive(Clone, Debug)]
pub struct PolyRoots {
    pub roots: Vec<C64>,
    /// |p(root)| for each root, same order.
    pub residuals: Vec<f64>,
    /// Largest residual relative to the coefficient scale.
    pub max_rel_residual: f64,
}

fn quadratic_roots(c0: C64, c1: C64, c2: C64) -> Vec<C64> {
    // Numerically stable form: the large root first, the other via the product.
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    let s = if (c1 + disc).norm() >= (c1 - disc).norm() {
        c1 + disc
    } else {
        c1 - disc
    };
    if s.norm() == 0.0 {
        return vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    }
    let r1 = -s / (2.0 * c2);
    let r2 = -2.0 * c0 / s;
    vec![r1, r2]
}

/// All complex roots of the polynomial with the given ascending coefficients.
///
/// Leading coefficients below `POLY_TRIM_RTOL` times the largest magnitude are
/// trimmed before the degree is decided. Exact roots at zero are factored out
/// first so the companion matrix stays well scaled.
pub fn poly_roots(coeffs: &[C64]) -> Result<PolyRoots> {
    let maxc = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if maxc == 0.0 {
        return Err(VsError::invalid("coeffs", "all coefficients vanish"));
    }
    let mut cs: Vec<C64> = coeffs.to_vec();
    while let Some(last) = cs.last() {
        if cs.len() > 1 && last.norm() <= tol::POLY_TRIM_RTOL * maxc {
            cs.pop();
        } else {
            break;
        }
    }
    let mut roots: Vec<C64> = Vec::new();
    // Factor out exact zero roots.
    let mut zero_roots = 0usize;
    while cs.len() > 1 && cs[0].norm() <= tol::POLY_TRIM_RTOL * maxc {
        cs.remove(0);
        zero_roots += 1;
    }
    roots.extend(std::iter::repeat(C64::new(0.0, 0.0)).take(zero_roots));
    let deg = cs.len() - 1;
    match deg {
        0 => {}
        1 => roots.push(-cs[0] / cs[1]),
        2 => roots.extend(quadratic_roots(cs[0], cs[1], cs[2])),
        _ => {
            let lead = cs[deg];
            let mut h = DMat::zeros(deg);
            for i in 0..deg {
                h.set(i, deg - 1, -cs[i] / lead);
                if i > 0 {
                    h.set(i, i - 1, C64::new(1.0, 0.0));
                }
            }
            let raw = hessenberg_eigenvalues(&mut h)?;
            let dcs = poly_deriv(&cs);
            for mut r in raw {
                for _ in 0..2 {
                    let p = poly_eval(&cs, r);
                    let dp = poly_eval(&dcs, r);
                    if dp.norm() > 1e-300 {
                        let step = p / dp;
                        if step.norm() < 0.5 * (1.0 + r.norm()) {
                            r -= step;
                        }
                    }
                }
                roots.push(r);
            }
        }
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut residuals = Vec::with_capacity(roots.len());
    let mut max_rel = 0.0f64;
    for &r in &roots {
        let res = poly_eval(coeffs, r).norm();
        let scale = maxc * (1.0 + r.norm()).powi(coeffs.len() as i32 - 1);
        residuals.push(res);
        max_rel = max_rel.max(res / scale);
    }
    Ok(PolyRoots {
        roots,
        residuals,
        max_rel_residual: max_rel,
    })
}

/// Roots of a real-coefficient polynomial.
pub fn poly_roots_real(coeffs: &[f64]) -> Result<PolyRoots> {
    let cs: Vec<C64> = coeffs.iter().map(|&c| C64::new(c, 0.0)).collect();
    poly_roots(&cs)
}

/// The real roots of a real polynomial, deduplicated by imaginary-part cutoff.
pub fn real_roots(coeffs: &[f64], im_tol: f64) -> Result<Vec<f64>> {
    let all = poly_roots_real(coeffs)?;
    let scale = all
        .roots
        .iter()
        .fold(1.0f64, |m, r| m.max(r.norm()));
    Ok(all
        .roots
        .iter()
        .filter(|r| r.im.abs() <= im_tol * scale)
        .map(|r| r.re)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quadratic_closed_form_is_stable() {
        // (z - 1e6)(z - 1e-6): naive formula loses the small root.
        let coeffs = [c(1.0, 0.0), c(-(1e6 + 1e-6), 0.0), c(1.0, 0.0)];
        let r = poly_roots(&coeffs).unwrap();
        assert!((r.roots[0] - c(1e-6, 0.0)).norm() < 1e-18);
        assert!((r.roots[1] - c(1e6, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn planted_degree_six_roots_recovered() {
        // p(z) = prod (z - r_k) for six spread-out complex roots.
        let planted = [
            c(-3.0, 0.0),
            c(-0.9364554464,
              0.0),
            c(0.0, 2.0),
            c(0.9364554464, 0.0),
            c(3.0204541018, -1.0),
            c(5.0, 0.5),
        ];
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in planted {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (j, &cj) in coeffs.iter().enumerate() {
                next[j + 1] += cj;
                next[j] -= cj * r;
            }
            coeffs = next;
        }
        let got = poly_roots(&coeffs).unwrap();
        assert!(got.max_rel_residual < 1e-9, "residual {}", got.max_rel_residual);
        let mut expect = planted.to_vec();
        expect.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        for (g, e) in got.roots.iter().zip(expect.iter()) {
            assert!((g - e).norm() < 1e-9, "root {g} vs {e}");
        }
    }

    #[test]
    fn zero_roots_are_factored_exactly() {
        // z^2 (z - 2)
        let coeffs = [c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)];
        let r = poly_roots(&coeffs).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert_eq!(r.roots[0], c(0.0, 0.0));
        assert_eq!(r.roots[1], c(0.0, 0.0));
        assert!((r.roots[2] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn tiny_leading_coefficient_is_trimmed() {
        let coeffs = [c(-1.0, 0.0), c(1.0, 0.0), c(1e-18, 0.0)];
        let r = poly_roots(&coeffs).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - c(1.0, 0.0)).norm() < 1e-14);
    }
}
