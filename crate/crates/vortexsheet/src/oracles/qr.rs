//! Complex Hessenberg eigenvalue core: explicit shifted QR with Givens rotations.
//!
//! Shared by the companion-matrix polynomial solver and the dense 4x4
//! eigensolver, so the two verification routes agree on one iteration.

use crate::error::{Result, VsError};
use num_complex::Complex64 as C64;

/// Small dense complex matrix with runtime dimension, row major.
#[derive(Clone, Debug)]
pub struct DMat {
    pub n: usize,
    a: Vec<C64>,
}

impl DMat {
    pub fn zeros(n: usize) -> DMat {
        DMat {
            n,
            a: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.a[i * self.n + j] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, x| m.max(x.norm()))
    }
}

/// Givens rotation G = [[c, s], [-conj(s), c]] with real c mapping (f, g) to (r, 0).
fn givens(f: C64, g: C64) -> (f64, C64) {
    let gf = f.norm();
    let gg = g.norm();
    if gg == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if gf == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let r = gf.hypot(gg);
    let c = gf / r;
    let s = (f / gf) * g.conj() / r;
    (c, s)
}

fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let sq = (half_diff * half_diff + b * c).sqrt();
    (half_tr + sq, half_tr - sq)
}

/// Eigenvalues of an upper Hessenberg matrix by Wilkinson-shifted explicit QR.
///
/// The matrix is destroyed. Eigenvalues come back unordered; callers sort.
pub fn hessenberg_eigenvalues(h: &mut DMat) -> Result<Vec<C64>> {
    let n = h.n;
    let mut eigs = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigs);
    }
    let scale = h.max_abs().max(1e-300);
    let ulp = f64::EPSILON;
    let mut m = n;
    let mut iter = 0usize;
    let mut total = 0usize;
    while m > 0 {
        if total > 200 * n {
            return Err(VsError::NoConvergence {
                what: "Hessenberg QR iteration",
                iterations: total,
            });
        }
        // Deflation: find the highest l with a negligible subdiagonal.
        let mut l = 0;
        for i in (1..m).rev() {
            let sub = h.at(i, i - 1).norm();
            let local = h.at(i - 1, i - 1).norm() + h.at(i, i).norm();
            if sub <= ulp * local.max(scale * 1e-3) {
                h.set(i, i - 1, C64::new(0.0, 0.0));
                l = i;
                break;
            }
        }
        if l == m - 1 {
            eigs.push(h.at(m - 1, m - 1));
            m -= 1;
            iter = 0;
            continue;
        }
        if m >= 2 && l == m - 2 {
            let (e1, e2) = eig2(
                h.at(m - 2, m - 2),
                h.at(m - 2, m - 1),
                h.at(m - 1, m - 2),
                h.at(m - 1, m - 1),
            );
            eigs.push(e1);
            eigs.push(e2);
            m -= 2;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        // Wilkinson shift from the trailing 2x2, with an exceptional kick
        // every tenth sweep to break symmetry stalls.
        let shift = if iter % 10 == 0 {
            h.at(m - 1, m - 1) + C64::new(0.75 * h.at(m - 1, m - 2).norm(), 0.0)
        } else {
            let (e1, e2) = eig2(
                h.at(m - 2, m - 2),
                h.at(m - 2, m - 1),
                h.at(m - 1, m - 2),
                h.at(m - 1, m - 1),
            );
            let d = h.at(m - 1, m - 1);
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };
        for i in l..m {
            let v = h.at(i, i) - shift;
            h.set(i, i, v);
        }
        // QR by Givens on the subdiagonal, then RQ, restoring Hessenberg form.
        let mut rots = Vec::with_capacity(m - l - 1);
        for i in l..m - 1 {
            let (c, s) = givens(h.at(i, i), h.at(i + 1, i));
            rots.push((c, s));
            for j in i..m {
                let hi = h.at(i, j);
                let hk = h.at(i + 1, j);
                h.set(i, j, hi * c + hk * s);
                h.set(i + 1, j, -hi * s.conj() + hk * c);
            }
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let i = l + idx;
            let hi = (i + 2).min(m);
            for r in l..hi {
                let a = h.at(r, i);
                let b = h.at(r, i + 1);
                h.set(r, i, a * c + b * s.conj());
                h.set(r, i + 1, -a * s + b * c);
            }
        }
        for i in l..m {
            let v = h.at(i, i) + shift;
            h.set(i, i, v);
        }
    }
    Ok(eigs)
}

/// Reduces a dense complex matrix to upper Hessenberg form by Householder
/// reflections, returning the reduced matrix (similar to the input).
pub fn to_hessenberg(a: &DMat) -> DMat {
    let n = a.n;
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let mut xnorm = 0.0f64;
        for i in k + 1..n {
            xnorm = xnorm.hypot(h.at(i, k).norm());
        }
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h.at(k + 1, k);
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = (0..n)
            .map(|i| if i > k { h.at(i, k) } else { C64::new(0.0, 0.0) })
            .collect();
        v[k + 1] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // H <- (I - beta v v^H) H
        for j in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in k + 1..n {
                dot += v[i].conj() * h.at(i, j);
            }
            let f = dot * beta;
            for i in k + 1..n {
                let val = h.at(i, j) - v[i] * f;
                h.set(i, j, val);
            }
        }
        // H <- H (I - beta v v^H)
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for j in k + 1..n {
                dot += h.at(i, j) * v[j];
            }
            let f = dot * beta;
            for j in k + 1..n {
                let val = h.at(i, j) - f * v[j].conj();
                h.set(i, j, val);
            }
        }
        for i in k + 2..n {
            h.set(i, k, C64::new(0.0, 0.0));
        }
        h.set(k + 1, k, alpha);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sort_key(z: &C64) -> (f64, f64) {
        (z.re, z.im)
    }

    #[test]
    fn qr_finds_diagonal_spectrum() {
        let mut h = DMat::zeros(4);
        let diag = [
            C64::new(1.0, 0.5),
            C64::new(-2.0, 0.0),
            C64::new(0.25, -1.0),
            C64::new(3.0, 2.0),
        ];
        for (i, d) in diag.iter().enumerate() {
            h.set(i, i, *d);
            if i > 0 {
                h.set(i, i - 1, C64::new(1e-2, 1e-3));
            }
            for j in i + 1..4 {
                h.set(i, j, C64::new(0.1 * (i as f64 - j as f64), 0.05));
            }
        }
        // Perturbed triangular matrix: eigenvalues stay near the diagonal but
        // the iteration must actually converge, not read them off.
        let mut eigs = hessenberg_eigenvalues(&mut h).unwrap();
        eigs.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
        let mut expect = diag.to_vec();
        expect.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
        for (e, x) in eigs.iter().zip(expect.iter()) {
            assert!((e - x).norm() < 0.05, "eig {e} vs {x}");
        }
    }

    #[test]
    fn hessenberg_reduction_preserves_trace() {
        let mut a = DMat::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                a.set(
                    i,
                    j,
                    C64::new((i * 4 + j) as f64 * 0.3 - 1.0, (i as f64 - j as f64) * 0.7),
                );
            }
        }
        let h = to_hessenberg(&a);
        let tr_a: C64 = (0..4).map(|i| a.at(i, i)).sum();
        let tr_h: C64 = (0..4).map(|i| h.at(i, i)).sum();
        assert!((tr_a - tr_h).norm() < 1e-12);
        for i in 2..4 {
            for j in 0..i - 1 {
                assert_eq!(h.at(i, j).norm(), 0.0);
            }
        }
    }
}
