//! Dense 4x4 complex eigensolver used as the independent route against the
//! closed-form symbol eigenvalues.
//!
//! Block-diagonal inputs (two decoupled 2x2 blocks, the shape the interior
//! symbol takes) get closed forms; everything else goes through Householder
//! reduction and the shared Hessenberg QR core, with eigenvectors recovered
//! from the numerical null spaces.

use super::qr::{hessenberg_eigenvalues, to_hessenberg, DMat};
use crate::error::Result;
use crate::linalg::{cinverse, cnorm, cscale, czero, null_vector, CMat4};
use crate::tol;
use num_complex::Complex64 as C64;

/// Eigen-decomposition report for a 4x4 complex matrix.
#[derive(Clone, Debug)]
pub struct Eig4 {
    /// Eigenvalues ordered by (Re, Im).
    pub values: [C64; 4],
    /// Unit eigenvectors, same order.
    pub vectors: [[C64; 4]; 4],
    /// max_i ||A v_i - lambda_i v_i|| / ||A||.
    pub max_rel_residual: f64,
    /// Condition estimate of the eigenvector matrix.
    pub vector_cond: f64,
    /// Set when the eigenvector matrix is ill conditioned (near-defective) or
    /// two eigenvalues nearly coincide (glancing collision).
    pub warning: Option<String>,
}

fn eig2x2(a: C64, b: C64, c: C64, d: C64) -> [C64; 2] {
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let sq = (half_diff * half_diff + b * c).sqrt();
    [half_tr + sq, half_tr - sq]
}

/// Eigenvector of [[a, b], [c, d]] for eigenvalue `lam` via the larger
/// adjugate row of (M - lam I).
fn vec2x2(a: C64, b: C64, c: C64, d: C64, lam: C64) -> [C64; 2] {
    let r1 = [b, lam - a];
    let r2 = [lam - d, c];
    let pick = if (r1[0].norm() + r1[1].norm()) >= (r2[0].norm() + r2[1].norm()) {
        r1
    } else {
        r2
    };
    let n = (pick[0].norm_sqr() + pick[1].norm_sqr()).sqrt();
    if n == 0.0 {
        [C64::new(1.0, 0.0), czero()]
    } else {
        [pick[0] / n, pick[1] / n]
    }
}

fn is_two_block(a: &CMat4) -> bool {
    let scale = a.max_abs().max(1e-300);
    let mut off = 0.0f64;
    for i in 0..2 {
        for j in 2..4 {
            off = off.max(a.m[i][j].norm()).max(a.m[j][i].norm());
        }
    }
    off <= 1e-14 * scale
}

/// Full eigen-decomposition; never fails on defective input, but attaches a
/// warning instead.
pub fn eig4(a: &CMat4) -> Result<Eig4> {
    let norm_a = a.frob().max(1e-300);
    let mut pairs: Vec<(C64, [C64; 4])> = Vec::with_capacity(4);

    if is_two_block(a) {
        for blk in 0..2 {
            let o = blk * 2;
            let (ba, bb, bc, bd) = (a.m[o][o], a.m[o][o + 1], a.m[o + 1][o], a.m[o + 1][o + 1]);
            for lam in eig2x2(ba, bb, bc, bd) {
                let v2 = vec2x2(ba, bb, bc, bd, lam);
                let mut v = [czero(); 4];
                v[o] = v2[0];
                v[o + 1] = v2[1];
                pairs.push((lam, v));
            }
        }
    } else {
        let mut d = DMat::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                d.set(i, j, a.m[i][j]);
            }
        }
        let mut h = to_hessenberg(&d);
        let values = hessenberg_eigenvalues(&mut h)?;
        for lam in values {
            let mut shifted = *a;
            for i in 0..4 {
                shifted.m[i][i] -= lam;
            }
            let v = null_vector(&shifted);
            pairs.push((lam, v));
        }
    }

    pairs.sort_by(|x, y| {
        (x.0.re, x.0.im)
            .partial_cmp(&(y.0.re, y.0.im))
            .unwrap()
    });

    let mut values = [czero(); 4];
    let mut vectors = [[czero(); 4]; 4];
    let mut max_rel_residual = 0.0f64;
    for (i, (lam, v)) in pairs.iter().enumerate() {
        values[i] = *lam;
        vectors[i] = *v;
        let av = a.matvec(*v);
        let mut res = 0.0f64;
        for k in 0..4 {
            res += (av[k] - *lam * v[k]).norm_sqr();
        }
        max_rel_residual = max_rel_residual.max(res.sqrt() / (norm_a * cnorm(v).max(1e-300)));
    }

    let mut vmat = CMat4::zeros();
    for (j, v) in vectors.iter().enumerate() {
        let n = cnorm(v).max(1e-300);
        let vn = cscale(v, C64::new(1.0 / n, 0.0));
        for i in 0..4 {
            vmat.m[i][j] = vn[i];
        }
    }
    let vector_cond = match cinverse(&vmat) {
        Some(inv) => vmat.frob() * inv.frob(),
        None => f64::INFINITY,
    };

    let mut warning = None;
    if vector_cond > tol::DEFECTIVE_COND {
        warning = Some(format!(
            "eigenvector matrix condition {vector_cond:.3e}; matrix is near-defective"
        ));
    } else {
        'outer: for i in 0..4 {
            for j in i + 1..4 {
                if (values[i] - values[j]).norm() <= tol::GLANCING_RTOL * norm_a {
                    warning = Some(format!(
                        "eigenvalues {i} and {j} collide within {:.1e} of the norm",
                        tol::GLANCING_RTOL
                    ));
                    break 'outer;
                }
            }
        }
    }

    Ok(Eig4 {
        values,
        vectors,
        max_rel_residual,
        vector_cond,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cone, cre};

    #[test]
    fn block_fast_path_matches_construction() {
        let a = CMat4::from_rows([
            [C64::new(1.0, 2.0), C64::new(0.5, 0.0), czero(), czero()],
            [C64::new(0.0, -1.0), C64::new(-1.0, 2.0), czero(), czero()],
            [czero(), czero(), C64::new(3.0, 0.0), C64::new(1.0, 1.0)],
            [czero(), czero(), C64::new(0.0, 0.5), C64::new(-3.0, 0.0)],
        ]);
        let e = eig4(&a).unwrap();
        assert!(e.max_rel_residual < 1e-12, "residual {}", e.max_rel_residual);
        let tr: C64 = e.values.iter().sum();
        assert!((tr - a.trace()).norm() < 1e-12);
    }

    #[test]
    fn generic_path_recovers_similar_diagonal() {
        // V D V^{-1} with a fixed well-conditioned V.
        let d = CMat4::diag([
            C64::new(-2.0, 0.3),
            C64::new(-0.5, -1.0),
            C64::new(0.7, 0.0),
            C64::new(2.5, 1.5),
        ]);
        let mut v = CMat4::identity();
        v.m[0][1] = cre(0.4);
        v.m[1][2] = C64::new(0.2, 0.7);
        v.m[2][3] = cre(-0.6);
        v.m[3][0] = C64::new(0.1, -0.3);
        let vinv = cinverse(&v).unwrap();
        let a = v.mul(&d).mul(&vinv);
        let e = eig4(&a).unwrap();
        assert!(e.max_rel_residual < 1e-9, "residual {}", e.max_rel_residual);
        let mut expect = [d.m[0][0], d.m[1][1], d.m[2][2], d.m[3][3]];
        expect.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        for (g, x) in e.values.iter().zip(expect.iter()) {
            assert!((g - x).norm() < 1e-9, "eig {g} vs {x}");
        }
        assert!(e.warning.is_none());
    }

    #[test]
    fn defective_matrix_warns_instead_of_failing() {
        // Jordan block: eigenvalue 1 with a single chain.
        let mut a = CMat4::identity();
        a.m[0][1] = cone();
        a.m[1][2] = cone();
        let e = eig4(&a).unwrap();
        assert!(e.warning.is_some());
    }
}
