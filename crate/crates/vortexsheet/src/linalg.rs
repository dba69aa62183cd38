//! Small fixed-size real and complex linear algebra.
//!
//! Everything in the stability analysis is 2x2 to 6x6, so the solvers here are
//! direct eliminations with pivoting rather than bindings to a general library.

use num_complex::Complex64 as C64;

/// Real 3x3 matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const ZERO: Mat3 = Mat3 { m: [[0.0; 3]; 3] };

    pub fn identity() -> Mat3 {
        Mat3::diag(1.0, 1.0, 1.0)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Mat3 {
        Mat3 {
            m: [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]],
        }
    }

    pub fn from_rows(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> Mat3 {
        Mat3 { m: [r0, r1, r2] }
    }

    pub fn from_cols(c0: [f64; 3], c1: [f64; 3], c2: [f64; 3]) -> Mat3 {
        Mat3 {
            m: [
                [c0[0], c1[0], c2[0]],
                [c0[1], c1[1], c2[1]],
                [c0[2], c1[2], c2[2]],
            ],
        }
    }

    pub fn col(&self, j: usize) -> [f64; 3] {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.m;
        Mat3::from_rows(
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        )
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        let mut r = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += self.m[i][k] * o.m[k][j];
                }
                r.m[i][j] = s;
            }
        }
        r
    }

    pub fn matvec(&self, v: [f64; 3]) -> [f64; 3] {
        let mut r = [0.0; 3];
        for i in 0..3 {
            r[i] = self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2];
        }
        r
    }

    pub fn add(&self, o: &Mat3) -> Mat3 {
        let mut r = *self;
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] += o.m[i][j];
            }
        }
        r
    }

    pub fn sub(&self, o: &Mat3) -> Mat3 {
        let mut r = *self;
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] -= o.m[i][j];
            }
        }
        r
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        let mut r = *self;
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] *= s;
            }
        }
        r
    }

    pub fn frob(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    /// Frobenius norm of A - A^T.
    pub fn asymmetry(&self) -> f64 {
        self.sub(&self.transpose()).frob()
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse by adjugate; `None` when the determinant underflows the scale.
    pub fn inverse(&self) -> Option<Mat3> {
        let d = self.det();
        let scale = self.max_abs();
        if d.abs() <= 1e-300 || d.abs() < 1e-14 * scale * scale * scale {
            return None;
        }
        let m = &self.m;
        let adj = Mat3::from_rows(
            [
                m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][2] * m[2][1] - m[0][1] * m[2][2],
                m[0][1] * m[1][2] - m[0][2] * m[1][1],
            ],
            [
                m[1][2] * m[2][0] - m[1][0] * m[2][2],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][2] * m[1][0] - m[0][0] * m[1][2],
            ],
            [
                m[1][0] * m[2][1] - m[1][1] * m[2][0],
                m[0][1] * m[2][0] - m[0][0] * m[2][1],
                m[0][0] * m[1][1] - m[0][1] * m[1][0],
            ],
        );
        Some(adj.scale(1.0 / d))
    }

    pub fn to_complex(&self) -> CMat<3, 3> {
        let mut r = CMat::zeros();
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] = C64::new(self.m[i][j], 0.0);
            }
        }
        r
    }
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// Eigen-decomposition of a symmetric 3x3 by cyclic Jacobi sweeps.
///
/// Returns eigenvalues ascending and the matching unit eigenvectors as the
/// columns of the second result. Deterministic: fixed sweep order, fixed
/// rotation convention, at most 64 sweeps.
pub fn jacobi_eigen3(a: &Mat3) -> ([f64; 3], Mat3) {
    let mut w = *a;
    let mut v = Mat3::identity();
    let scale = w.max_abs().max(1e-300);
    for _ in 0..64 {
        let off = (w.m[0][1] * w.m[0][1] + w.m[0][2] * w.m[0][2] + w.m[1][2] * w.m[1][2]).sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = w.m[p][q];
            if apq.abs() <= 1e-300 {
                continue;
            }
            let theta = (w.m[q][q] - w.m[p][p]) / (2.0 * apq);
            // Stable tangent of the rotation angle.
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let wkp = w.m[k][p];
                let wkq = w.m[k][q];
                w.m[k][p] = c * wkp - s * wkq;
                w.m[k][q] = s * wkp + c * wkq;
            }
            for k in 0..3 {
                let wpk = w.m[p][k];
                let wqk = w.m[q][k];
                w.m[p][k] = c * wpk - s * wqk;
                w.m[q][k] = s * wpk + c * wqk;
            }
            for k in 0..3 {
                let vkp = v.m[k][p];
                let vkq = v.m[k][q];
                v.m[k][p] = c * vkp - s * vkq;
                v.m[k][q] = s * vkp + c * vkq;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    let vals = [w.m[0][0], w.m[1][1], w.m[2][2]];
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let sorted = [vals[order[0]], vals[order[1]], vals[order[2]]];
    let vectors = Mat3::from_cols(v.col(order[0]), v.col(order[1]), v.col(order[2]));
    (sorted, vectors)
}

/// Complex RxC matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<const R: usize, const C: usize> {
    pub m: [[C64; C]; R],
}

pub type CMat2 = CMat<2, 2>;
pub type CMat3 = CMat<3, 3>;
pub type CMat4 = CMat<4, 4>;

impl<const R: usize, const C: usize> CMat<R, C> {
    pub fn zeros() -> Self {
        CMat {
            m: [[C64::new(0.0, 0.0); C]; R],
        }
    }

    pub fn from_rows(rows: [[C64; C]; R]) -> Self {
        CMat { m: rows }
    }

    pub fn from_real(rows: [[f64; C]; R]) -> Self {
        let mut r = Self::zeros();
        for i in 0..R {
            for j in 0..C {
                r.m[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        r
    }

    pub fn mul<const K: usize>(&self, o: &CMat<C, K>) -> CMat<R, K> {
        let mut r = CMat::zeros();
        for i in 0..R {
            for j in 0..K {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..C {
                    s += self.m[i][k] * o.m[k][j];
                }
                r.m[i][j] = s;
            }
        }
        r
    }

    pub fn matvec(&self, v: [C64; C]) -> [C64; R] {
        let mut r = [C64::new(0.0, 0.0); R];
        for i in 0..R {
            for k in 0..C {
                r[i] += self.m[i][k] * v[k];
            }
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = *self;
        for i in 0..R {
            for j in 0..C {
                r.m[i][j] += o.m[i][j];
            }
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = *self;
        for i in 0..R {
            for j in 0..C {
                r.m[i][j] -= o.m[i][j];
            }
        }
        r
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut r = *self;
        for i in 0..R {
            for j in 0..C {
                r.m[i][j] *= s;
            }
        }
        r
    }

    pub fn adjoint(&self) -> CMat<C, R> {
        let mut r = CMat::zeros();
        for i in 0..R {
            for j in 0..C {
                r.m[j][i] = self.m[i][j].conj();
            }
        }
        r
    }

    pub fn frob(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|x| x.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0f64, |a, x| a.max(x.norm()))
    }

    pub fn col(&self, j: usize) -> [C64; R] {
        let mut r = [C64::new(0.0, 0.0); R];
        for i in 0..R {
            r[i] = self.m[i][j];
        }
        r
    }
}

impl<const N: usize> CMat<N, N> {
    pub fn identity() -> Self {
        let mut r = Self::zeros();
        for i in 0..N {
            r.m[i][i] = C64::new(1.0, 0.0);
        }
        r
    }

    pub fn diag(d: [C64; N]) -> Self {
        let mut r = Self::zeros();
        for i in 0..N {
            r.m[i][i] = d[i];
        }
        r
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.m[i][i]).sum()
    }
}

pub fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn cone() -> C64 {
    C64::new(1.0, 0.0)
}

pub fn cre(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn cim(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// Hermitian inner product `<a, b> = sum conj(a_i) b_i`.
pub fn cdot<const N: usize>(a: &[C64; N], b: &[C64; N]) -> C64 {
    let mut s = czero();
    for i in 0..N {
        s += a[i].conj() * b[i];
    }
    s
}

pub fn cnorm<const N: usize>(a: &[C64; N]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn cscale<const N: usize>(a: &[C64; N], s: C64) -> [C64; N] {
    let mut r = *a;
    for x in r.iter_mut() {
        *x *= s;
    }
    r
}

pub fn csub<const N: usize>(a: &[C64; N], b: &[C64; N]) -> [C64; N] {
    let mut r = *a;
    for i in 0..N {
        r[i] -= b[i];
    }
    r
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn csolve<const N: usize>(a: &CMat<N, N>, b: [C64; N]) -> Option<[C64; N]> {
    let mut w = *a;
    let mut x = b;
    for col in 0..N {
        let mut piv = col;
        let mut best = w.m[col][col].norm();
        for row in col + 1..N {
            let v = w.m[row][col].norm();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best <= 1e-300 {
            return None;
        }
        if piv != col {
            w.m.swap(piv, col);
            x.swap(piv, col);
        }
        let d = w.m[col][col];
        for row in col + 1..N {
            let f = w.m[row][col] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for k in col..N {
                let t = w.m[col][k];
                w.m[row][k] -= f * t;
            }
            let t = x[col];
            x[row] -= f * t;
        }
    }
    for col in (0..N).rev() {
        let mut s = x[col];
        for k in col + 1..N {
            s -= w.m[col][k] * x[k];
        }
        x[col] = s / w.m[col][col];
    }
    Some(x)
}

/// Inverse by column-wise solves; `None` if singular to working precision.
pub fn cinverse<const N: usize>(a: &CMat<N, N>) -> Option<CMat<N, N>> {
    let mut inv = CMat::<N, N>::zeros();
    for j in 0..N {
        let mut e = [czero(); N];
        e[j] = cone();
        let col = csolve(a, e)?;
        for i in 0..N {
            inv.m[i][j] = col[i];
        }
    }
    Some(inv)
}

/// Unit vector spanning the (numerical) null space of `a`.
///
/// Gaussian elimination with full pivoting; the weakest pivot column becomes
/// the free variable. Intended for matrices with a one-dimensional kernel.
pub fn null_vector<const N: usize>(a: &CMat<N, N>) -> [C64; N] {
    let mut w = *a;
    let mut colperm: [usize; N] = [0; N];
    for (i, c) in colperm.iter_mut().enumerate() {
        *c = i;
    }
    let scale = w.max_abs().max(1e-300);
    let mut rank = 0;
    for step in 0..N {
        let mut best = 0.0;
        let (mut pr, mut pc) = (step, step);
        for r in step..N {
            for c in step..N {
                let v = w.m[r][c].norm();
                if v > best {
                    best = v;
                    pr = r;
                    pc = c;
                }
            }
        }
        if best <= 1e-13 * scale {
            break;
        }
        rank = step + 1;
        if pr != step {
            w.m.swap(pr, step);
        }
        if pc != step {
            for r in 0..N {
                w.m[r].swap(pc, step);
            }
            colperm.swap(pc, step);
        }
        let d = w.m[step][step];
        for r in step + 1..N {
            let f = w.m[r][step] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for c in step..N {
                let t = w.m[step][c];
                w.m[r][c] -= f * t;
            }
        }
    }
    let mut y = [czero(); N];
    if rank == N {
        // Numerically full rank: fall back to the last pivot as free variable.
        rank = N - 1;
    }
    for y_i in y.iter_mut().take(N).skip(rank) {
        *y_i = cone();
    }
    for r in (0..rank).rev() {
        let mut s = czero();
        for c in r + 1..N {
            s -= w.m[r][c] * y[c];
        }
        y[r] = s / w.m[r][r];
    }
    let mut x = [czero(); N];
    for i in 0..N {
        x[colperm[i]] = y[i];
    }
    let n = cnorm(&x);
    if n > 0.0 {
        x = cscale(&x, cre(1.0 / n));
    }
    x
}

/// Modified Gram-Schmidt with a second pass; drops numerically dependent inputs.
pub fn orthonormalize<const N: usize>(vs: &[[C64; N]]) -> Vec<[C64; N]> {
    let mut basis: Vec<[C64; N]> = Vec::new();
    for v in vs {
        let mut u = *v;
        for _ in 0..2 {
            for b in &basis {
                let proj = cdot(b, &u);
                u = csub(&u, &cscale(b, proj));
            }
        }
        let n = cnorm(&u);
        if n > 1e-12 * cnorm(v).max(1.0) {
            basis.push(cscale(&u, cre(1.0 / n)));
        }
    }
    basis
}

/// Principal angles (radians, ascending) between the spans of two vector sets.
pub fn principal_angles<const N: usize>(a: &[[C64; N]], b: &[[C64; N]]) -> Vec<f64> {
    let qa = orthonormalize(a);
    let qb = orthonormalize(b);
    if qa.is_empty() || qb.is_empty() {
        return Vec::new();
    }
    // Singular values of the (small) matrix M = Qa^H Qb via eigenvalues of M^H M.
    let ka = qa.len();
    let kb = qb.len();
    let mut mm = vec![vec![czero(); kb]; ka];
    for (i, qa_i) in qa.iter().enumerate() {
        for (j, qb_j) in qb.iter().enumerate() {
            mm[i][j] = cdot(qa_i, qb_j);
        }
    }
    let k = ka.min(kb);
    let mut gram = vec![vec![czero(); kb]; kb];
    for p in 0..kb {
        for q in 0..kb {
            let mut s = czero();
            for row in mm.iter() {
                s += row[p].conj() * row[q];
            }
            gram[p][q] = s;
        }
    }
    let mut sigmas: Vec<f64> = match kb {
        1 => vec![gram[0][0].re.max(0.0).sqrt()],
        2 => {
            // Hermitian 2x2 eigenvalues in closed form.
            let a11 = gram[0][0].re;
            let a22 = gram[1][1].re;
            let a12 = gram[0][1];
            let tr = a11 + a22;
            let disc = ((a11 - a22) * 0.5).powi(2) + a12.norm_sqr();
            let root = disc.max(0.0).sqrt();
            vec![
                (tr * 0.5 + root).max(0.0).sqrt(),
                (tr * 0.5 - root).max(0.0).sqrt(),
            ]
        }
        _ => unreachable!("principal_angles supports spans of dimension <= 2"),
    };
    sigmas.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sigmas
        .into_iter()
        .take(k)
        .map(|s| s.clamp(-1.0, 1.0).acos())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mat3_inverse_roundtrip() {
        let a = Mat3::from_rows([2.0, 1.0, 0.5], [0.1, 3.0, -1.0], [0.0, 0.25, 1.5]);
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv);
        let err = prod.sub(&Mat3::identity()).max_abs();
        assert!(err < 1e-13, "round trip error {err}");
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let q = {
            // Rotation by a fixed angle in the (0,1) plane composed with (1,2).
            let (s1, c1) = 0.3f64.sin_cos();
            let (s2, c2) = 1.1f64.sin_cos();
            let r1 = Mat3::from_rows([c1, -s1, 0.0], [s1, c1, 0.0], [0.0, 0.0, 1.0]);
            let r2 = Mat3::from_rows([1.0, 0.0, 0.0], [0.0, c2, -s2], [0.0, s2, c2]);
            r1.mul(&r2)
        };
        let d = Mat3::diag(-2.0, 0.5, 3.0);
        let a = q.mul(&d).mul(&q.transpose());
        let (vals, vecs) = jacobi_eigen3(&a);
        assert_relative_eq!(vals[0], -2.0, max_relative = 1e-12);
        assert_relative_eq!(vals[1], 0.5, max_relative = 1e-12);
        assert_relative_eq!(vals[2], 3.0, max_relative = 1e-12);
        for j in 0..3 {
            let v = vecs.col(j);
            let av = a.matvec(v);
            let mut res = [0.0; 3];
            for i in 0..3 {
                res[i] = av[i] - vals[j] * v[i];
            }
            assert!(norm3(res) < 1e-12 * a.frob());
        }
    }

    #[test]
    fn csolve_matches_direct_substitution() {
        let a = CMat::<3, 3>::from_rows([
            [cre(2.0), cim(1.0), czero()],
            [cre(0.5), cre(-1.0), cim(-2.0)],
            [cim(0.3), czero(), cre(4.0)],
        ]);
        let x_true = [C64::new(1.0, -1.0), C64::new(0.5, 2.0), C64::new(-3.0, 0.25)];
        let b = a.matvec(x_true);
        let x = csolve(&a, b).unwrap();
        for i in 0..3 {
            assert!((x[i] - x_true[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn null_vector_of_rank_deficient_matrix() {
        // Rank-2 matrix with kernel along (1, -2, 1).
        let a = CMat::<3, 3>::from_real([[1.0, 1.0, 1.0], [1.0, 2.0, 3.0], [2.0, 3.0, 4.0]]);
        let x = null_vector(&a);
        let ax = a.matvec(x);
        assert!(cnorm(&ax) < 1e-12);
        assert_relative_eq!(cnorm(&x), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn principal_angles_detects_shared_plane() {
        let e1 = [cone(), czero(), czero(), czero()];
        let e2 = [czero(), cone(), czero(), czero()];
        let r1 = [
            C64::new(0.6, 0.0),
            C64::new(0.8, 0.0),
            czero(),
            czero(),
        ];
        let r2 = [
            C64::new(-0.8, 0.0),
            C64::new(0.6, 0.0),
            czero(),
            czero(),
        ];
        let angles = principal_angles(&[e1, e2], &[r1, r2]);
        for a in angles {
            assert!(a < 1e-12, "angle {a}");
        }
        let f2 = [czero(), czero(), cone(), czero()];
        let angles = principal_angles(&[e1], &[f2]);
        assert_relative_eq!(angles[0], std::f64::consts::FRAC_PI_2, max_relative = 1e-12);
    }
}
