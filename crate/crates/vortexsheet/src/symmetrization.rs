//! Coefficient matrices of the first-order system in the unknowns
//! U = (p, h w1, h w2), their Friedrichs symmetrizer, and the background
//! change of variables that diagonalizes the normal coefficient.

use crate::eos::{Eos, FluidParams, PrimState, SheetConfig};
use crate::error::{Result, VsError};
use crate::linalg::{jacobi_eigen3, Mat3};
use crate::tol;

/// Local thermodynamic coefficients entering every matrix entry.
#[derive(Clone, Copy, Debug)]
struct Coefs {
    n: f64,
    c2: f64,
    gamma: f64,
    v1: f64,
    v2: f64,
    vsq: f64,
    e2: f64,
}

fn coefs(state: &PrimState, eos: &Eos, params: &FluidParams) -> Coefs {
    Coefs {
        n: eos.particle_density(state.rho, params),
        c2: eos.dpressure(state.rho),
        gamma: state.lorentz(params),
        v1: state.v1,
        v2: state.v2,
        vsq: state.v1 * state.v1 + state.v2 * state.v2,
        e2: params.epsilon * params.epsilon,
    }
}

/// Coefficient matrices A0, A1, A2 of the evolution system for U.
#[derive(Clone, Copy, Debug)]
pub struct EulerMatrices {
    pub a0: Mat3,
    pub a1: Mat3,
    pub a2: Mat3,
}

/// Builds A0, A1, A2 at a state from the closed-form entries.
pub fn a_matrices(state: &PrimState, eos: &Eos, params: &FluidParams) -> EulerMatrices {
    let Coefs {
        n,
        c2,
        gamma,
        v1,
        v2,
        vsq,
        e2,
    } = coefs(state, eos, params);
    let e4c2 = e2 * e2 * c2;
    let nc2 = n * c2;
    let ninv = 1.0 / n;
    let a0 = Mat3::from_rows(
        [gamma * (1.0 - e4c2 * vsq), 2.0 * e2 * nc2 * v1, 2.0 * e2 * nc2 * v2],
        [0.0, gamma * (1.0 - e2 * v1 * v1), -e2 * gamma * v1 * v2],
        [0.0, -e2 * gamma * v1 * v2, gamma * (1.0 - e2 * v2 * v2)],
    );
    let a1 = Mat3::from_rows(
        [
            gamma * v1 * (1.0 - e4c2 * vsq),
            nc2 * (1.0 + e2 * v1 * v1),
            e2 * v1 * v2 * nc2,
        ],
        [
            ninv * (1.0 - e2 * v1 * v1),
            gamma * v1 * (1.0 - e2 * v1 * v1),
            -e2 * gamma * v1 * v1 * v2,
        ],
        [
            -e2 * v1 * v2 * ninv,
            -e2 * gamma * v1 * v1 * v2,
            gamma * v1 * (1.0 - e2 * v2 * v2),
        ],
    );
    let a2 = Mat3::from_rows(
        [
            gamma * v2 * (1.0 - e4c2 * vsq),
            e2 * v1 * v2 * nc2,
            nc2 * (1.0 + e2 * v2 * v2),
        ],
        [
            -e2 * v1 * v2 * ninv,
            gamma * v2 * (1.0 - e2 * v1 * v1),
            -e2 * gamma * v1 * v2 * v2,
        ],
        [
            ninv * (1.0 - e2 * v2 * v2),
            -e2 * gamma * v1 * v2 * v2,
            gamma * v2 * (1.0 - e2 * v2 * v2),
        ],
    );
    EulerMatrices { a0, a1, a2 }
}

/// The pre-symmetrized coefficients B0, B1, B2 and the two factor matrices
/// S1 (with S1 Bj = Aj) and S2 (the Friedrichs symmetrizer of the B system).
#[derive(Clone, Copy, Debug)]
pub struct FactorMatrices {
    pub b0: Mat3,
    pub b1: Mat3,
    pub b2: Mat3,
    pub s1: Mat3,
    pub s2: Mat3,
}

/// Builds B0, B1, B2, S1, S2 at a state.
pub fn b_matrices(state: &PrimState, eos: &Eos, params: &FluidParams) -> FactorMatrices {
    let Coefs {
        n,
        c2,
        gamma,
        v1,
        v2,
        vsq,
        e2,
    } = coefs(state, eos, params);
    let e4c2 = e2 * e2 * c2;
    let nc2 = n * c2;
    let ninv = 1.0 / n;
    let b0 = Mat3::from_rows(
        [gamma * (1.0 - e4c2 * vsq), e2 * nc2 * v1, e2 * nc2 * v2],
        [0.0, gamma, 0.0],
        [0.0, 0.0, gamma],
    );
    let bj = |vj: f64, d1j: f64, d2j: f64| {
        Mat3::from_rows(
            [gamma * vj * (1.0 - e2 * c2), nc2 * d1j, nc2 * d2j],
            [ninv * d1j, gamma * vj, 0.0],
            [ninv * d2j, 0.0, gamma * vj],
        )
    };
    let b1 = bj(v1, 1.0, 0.0);
    let b2 = bj(v2, 0.0, 1.0);
    let s1 = Mat3::from_rows(
        [1.0, e2 * nc2 * v1 / gamma, e2 * nc2 * v2 / gamma],
        [0.0, 1.0 - e2 * v1 * v1, -e2 * v1 * v2],
        [0.0, -e2 * v1 * v2, 1.0 - e2 * v2 * v2],
    );
    let s2 = Mat3::from_rows(
        [1.0, -2.0 * e2 * nc2 * gamma * v1, -2.0 * e2 * nc2 * gamma * v2],
        [0.0, n * n * c2, 0.0],
        [0.0, 0.0, n * n * c2],
    );
    FactorMatrices { b0, b1, b2, s1, s2 }
}

/// Closed-form eigenvalues of S2 A0, ascending.
pub fn symmetrizer_eigenvalues(state: &PrimState, eos: &Eos, params: &FluidParams) -> [f64; 3] {
    let Coefs {
        n,
        c2,
        gamma,
        vsq,
        e2,
        ..
    } = coefs(state, eos, params);
    let mut eigs = [
        gamma * (1.0 - e2 * e2 * c2 * vsq),
        gamma * n * n * c2,
        gamma * n * n * c2 * (1.0 - e2 * vsq),
    ];
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

/// Outcome of the symmetrizability check at one state.
#[derive(Clone, Debug)]
pub struct SymmetrizerReport {
    /// Worst relative asymmetry of S2 Aj over j = 0, 1, 2.
    pub max_asymmetry: f64,
    /// Relative deviation max_j ||S1 Bj - Aj|| / (1 + ||Aj||).
    pub s1_mismatch: f64,
    /// Eigenvalues of S2 A0 from the Jacobi sweep, ascending.
    pub jacobi_eigenvalues: [f64; 3],
    /// The closed-form eigenvalues, ascending.
    pub closed_eigenvalues: [f64; 3],
    /// Worst relative eigenvalue disagreement between the two routes.
    pub max_eigenvalue_mismatch: f64,
}

/// Symmetry and positivity check for explicitly supplied matrices.
///
/// Deviations are measured against `||S2|| ||Aj||`, the roundoff floor of the
/// computed product, so strongly relativistic states (huge Lorentz factors)
/// pass while transcription errors still trip the check. Errors name the first
/// offending product and entry so corrupted inputs are attributable.
pub fn symmetrizer_report(
    a: &EulerMatrices,
    s2: &Mat3,
    closed_eigenvalues: [f64; 3],
) -> Result<SymmetrizerReport> {
    let products = [
        ("S2*A0", &a.a0, s2.mul(&a.a0)),
        ("S2*A1", &a.a1, s2.mul(&a.a1)),
        ("S2*A2", &a.a2, s2.mul(&a.a2)),
    ];
    let mut max_asymmetry = 0.0f64;
    for (name, aj, p) in &products {
        let scale = 1.0 + s2.frob() * aj.frob();
        for i in 0..3 {
            for j in i + 1..3 {
                let dev = (p.m[i][j] - p.m[j][i]).abs() / scale;
                if dev > tol::IDENTITY_RTOL {
                    return Err(VsError::Verification {
                        name: "symmetrizer".into(),
                        detail: format!(
                            "{name} entry ({i},{j}) = {:.16e} vs ({j},{i}) = {:.16e}",
                            p.m[i][j], p.m[j][i]
                        ),
                    });
                }
                max_asymmetry = max_asymmetry.max(dev);
            }
        }
    }
    if closed_eigenvalues[0] <= 0.0 {
        return Err(VsError::Verification {
            name: "symmetrizer".into(),
            detail: format!(
                "S2*A0 is not positive definite: smallest eigenvalue {}",
                closed_eigenvalues[0]
            ),
        });
    }
    let s2a0 = &products[0].2;
    let sym = s2a0.add(&s2a0.transpose()).scale(0.5);
    let (jacobi_eigenvalues, _) = jacobi_eigen3(&sym);
    let eig_scale = 1.0 + s2.frob() * a.a0.frob();
    let mut max_eigenvalue_mismatch = 0.0f64;
    for (l, r) in jacobi_eigenvalues.iter().zip(closed_eigenvalues.iter()) {
        let dev = (l - r).abs() / eig_scale;
        max_eigenvalue_mismatch = max_eigenvalue_mismatch.max(dev);
    }
    if max_eigenvalue_mismatch > 1e-10 {
        return Err(VsError::Verification {
            name: "symmetrizer".into(),
            detail: format!(
                "S2*A0 eigenvalues {jacobi_eigenvalues:?} disagree with closed forms {closed_eigenvalues:?}"
            ),
        });
    }
    Ok(SymmetrizerReport {
        max_asymmetry,
        s1_mismatch: 0.0,
        jacobi_eigenvalues,
        closed_eigenvalues,
        max_eigenvalue_mismatch,
    })
}

/// Full symmetrizability check at a state: S1 consistency, S2 symmetry, and
/// the positivity of S2 A0 with its spectrum verified against closed forms.
pub fn check_symmetrizable(
    state: &PrimState,
    eos: &Eos,
    params: &FluidParams,
) -> Result<SymmetrizerReport> {
    let a = a_matrices(state, eos, params);
    let f = b_matrices(state, eos, params);
    let mut s1_mismatch = 0.0f64;
    for (b, target) in [(&f.b0, &a.a0), (&f.b1, &a.a1), (&f.b2, &a.a2)] {
        let dev = f.s1.mul(b).sub(target).frob() / (1.0 + target.frob());
        s1_mismatch = s1_mismatch.max(dev);
    }
    if s1_mismatch > tol::IDENTITY_RTOL {
        return Err(VsError::Verification {
            name: "symmetrizer".into(),
            detail: format!("S1*Bj deviates from Aj by {s1_mismatch:e}"),
        });
    }
    let mut report = symmetrizer_report(&a, &f.s2, symmetrizer_eigenvalues(state, eos, params))?;
    report.s1_mismatch = s1_mismatch;
    Ok(report)
}

/// Contact eigenvalue lambda2 = v1 xi - v2 of the pencil
/// (xi A1 - A2) r = lambda A0 r, with its closed-form eigenvector.
pub fn contact_eigen(
    state: &PrimState,
    params: &FluidParams,
    xi: f64,
) -> (f64, [f64; 3]) {
    let e2 = params.epsilon * params.epsilon;
    let (v1, v2) = (state.v1, state.v2);
    let lambda = v1 * xi - v2;
    let r = [
        0.0,
        1.0 - e2 * v2 * v2 + e2 * v1 * v2 * xi,
        (1.0 - e2 * v1 * v1) * xi + e2 * v1 * v2,
    ];
    (lambda, r)
}

/// Background change of variables: the eigenvector matrix of the normal
/// coefficient at the sheet states, the diagonal weight, and the transformed
/// coefficients on both sides.
#[derive(Clone, Debug)]
pub struct BackgroundFrame {
    /// Columns are the eigenvectors (0, 1, 0), (1, 0, -1/c), (1, 0, 1/c).
    pub r: Mat3,
    pub r_inv: Mat3,
    /// Diagonal weight diag(1, 2/c^2, 2/c^2).
    pub s: Mat3,
    /// Transformed coefficients, index 0 = plus side, 1 = minus side.
    pub cal_a0: [Mat3; 2],
    pub cal_a1: [Mat3; 2],
    /// The normal coefficient comes out as +-diag(0, -2/c, 2/c).
    pub cal_a2: [Mat3; 2],
}

/// Computes the transformed background coefficients on both sides.
///
/// The minus side is reflected to the same half-space, which flips the sign
/// of its normal coefficient.
pub fn background_frame(cfg: &SheetConfig) -> BackgroundFrame {
    let c = cfg.c_bar;
    let r = Mat3::from_cols([0.0, 1.0, 0.0], [1.0, 0.0, -1.0 / c], [1.0, 0.0, 1.0 / c]);
    let r_inv = r.inverse().expect("background eigenvector matrix is invertible");
    let s = Mat3::diag(1.0, 2.0 / (c * c), 2.0 / (c * c));
    let (prim_plus, prim_minus) = cfg.background_prim();
    let mut cal_a0 = [Mat3::ZERO; 2];
    let mut cal_a1 = [Mat3::ZERO; 2];
    let mut cal_a2 = [Mat3::ZERO; 2];
    for (idx, (prim, sign)) in [(prim_plus, 1.0), (prim_minus, -1.0)].iter().enumerate() {
        let m = a_matrices(prim, &cfg.eos, &cfg.params);
        let t = |a: &Mat3| s.mul(&r_inv).mul(a).mul(&r);
        cal_a0[idx] = t(&m.a0);
        cal_a1[idx] = t(&m.a1);
        cal_a2[idx] = t(&m.a2).scale(*sign);
    }
    BackgroundFrame {
        r,
        r_inv,
        s,
        cal_a0,
        cal_a1,
        cal_a2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::Eos;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(eps: f64) -> (Eos, FluidParams) {
        (
            Eos::linear(0.36, 1e-3, 1e3, 1.0).unwrap(),
            FluidParams::new(eps).unwrap(),
        )
    }

    fn random_state(rng: &mut ChaCha8Rng, eos: &Eos, params: &FluidParams) -> PrimState {
        loop {
            let rho = rng.gen_range(0.05..20.0);
            let cap = if params.epsilon > 0.0 {
                0.98 / params.epsilon
            } else {
                5.0
            };
            let v1 = rng.gen_range(-cap..cap);
            let v2 = rng.gen_range(-cap..cap);
            if let Ok(s) = PrimState::new(rho, v1, v2, eos, params) {
                return s;
            }
        }
    }

    #[test]
    fn rest_state_a0_is_lorentz_diagonal() {
        let (eos, params) = setup(1.0);
        let state = PrimState::new(1.0, 0.0, 0.0, &eos, &params).unwrap();
        let m = a_matrices(&state, &eos, &params);
        let expect = Mat3::diag(1.0, 1.0, 1.0);
        assert!(m.a0.sub(&expect).max_abs() < 1e-15);
    }

    #[test]
    fn sheet_state_normal_coefficient() {
        let (eos, params) = setup(1.0);
        let cfg = SheetConfig::new(eos.clone(), params, 1.0, 0.5).unwrap();
        let (plus, minus) = cfg.background_prim();
        for state in [plus, minus] {
            let m = a_matrices(&state, &eos, &params);
            let c2 = cfg.c_bar * cfg.c_bar;
            let expect = Mat3::from_rows([0.0, 0.0, c2], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
            assert!(
                m.a2.sub(&expect).max_abs() < 1e-14,
                "A2 at sheet state: {:?}",
                m.a2
            );
        }
    }

    #[test]
    fn s1_times_b_recovers_a() {
        let (eos, params) = setup(0.85);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let state = random_state(&mut rng, &eos, &params);
            let a = a_matrices(&state, &eos, &params);
            let f = b_matrices(&state, &eos, &params);
            for (b, target) in [(&f.b0, &a.a0), (&f.b1, &a.a1), (&f.b2, &a.a2)] {
                let dev = f.s1.mul(b).sub(target).frob() / (1.0 + target.frob());
                assert!(dev < 1e-12, "S1 B mismatch {dev}");
            }
        }
    }

    #[test]
    fn symmetrizer_accepts_near_light_speed() {
        let (eos, params) = setup(1.0);
        let v = 1.0 - 1e-12;
        let state = PrimState::new(1.0, v / 2.0f64.sqrt(), v / 2.0f64.sqrt(), &eos, &params)
            .unwrap();
        let report = check_symmetrizable(&state, &eos, &params).unwrap();
        assert!(report.max_asymmetry < 1e-12);
        assert!(report.max_eigenvalue_mismatch < 1e-10);
    }

    #[test]
    fn corrupted_entry_is_named() {
        let (eos, params) = setup(0.9);
        let state = PrimState::new(1.3, 0.4, -0.2, &eos, &params).unwrap();
        let mut a = a_matrices(&state, &eos, &params);
        a.a1.m[0][2] += 1e-6;
        let f = b_matrices(&state, &eos, &params);
        let err = symmetrizer_report(&a, &f.s2, symmetrizer_eigenvalues(&state, &eos, &params))
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("S2*A1"), "message: {msg}");
        assert!(msg.contains("(0,2)") || msg.contains("(1,2)"), "message: {msg}");
    }

    #[test]
    fn jacobi_matches_closed_spectrum_randomly() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for eps in [0.0, 0.5, 1.0] {
            let (eos, params) = setup(eps);
            for _ in 0..100 {
                let state = random_state(&mut rng, &eos, &params);
                let report = check_symmetrizable(&state, &eos, &params).unwrap();
                assert!(
                    report.max_eigenvalue_mismatch < 1e-10,
                    "eigen mismatch {} at {:?}",
                    report.max_eigenvalue_mismatch,
                    state
                );
            }
        }
    }

    #[test]
    fn contact_field_is_linearly_degenerate() {
        // The gradient of lambda2 in the U variables is orthogonal to the
        // eigenvector: finite differences along r2 leave lambda2 unchanged.
        let (eos, params) = setup(0.8);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let state = random_state(&mut rng, &eos, &params);
            let xi = rng.gen_range(-2.0..2.0);
            let (_, r2) = contact_eigen(&state, &params, xi);
            let u = crate::eos::prim_to_u(&state, &eos, &params);
            let scale = (u.p * u.p + u.hw1 * u.hw1 + u.hw2 * u.hw2).sqrt().max(1.0);
            let h = 1e-6 * scale;
            let lambda_at = |t: f64| -> Option<f64> {
                let shifted = crate::eos::UState {
                    p: u.p + t * r2[0],
                    hw1: u.hw1 + t * r2[1],
                    hw2: u.hw2 + t * r2[2],
                };
                let prim = crate::eos::u_to_prim(&shifted, &eos, &params).ok()?;
                Some(prim.v1 * xi - prim.v2)
            };
            let (Some(hi), Some(lo)) = (lambda_at(h), lambda_at(-h)) else {
                continue;
            };
            let deriv = (hi - lo) / (2.0 * h);
            assert!(deriv.abs() < 1e-6, "directional derivative {deriv}");
        }
    }

    #[test]
    fn contact_eigenvector_solves_the_pencil() {
        let (eos, params) = setup(0.75);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let state = random_state(&mut rng, &eos, &params);
            let xi = rng.gen_range(-2.0..2.0);
            let (lambda, r2) = contact_eigen(&state, &params, xi);
            let m = a_matrices(&state, &eos, &params);
            let lhs = m.a1.scale(xi).sub(&m.a2).matvec(r2);
            let rhs = m.a0.matvec(r2);
            let mut res = [0.0; 3];
            for i in 0..3 {
                res[i] = lhs[i] - lambda * rhs[i];
            }
            let scale = m.a1.frob().max(m.a2.frob()) * (1.0 + crate::linalg::norm3(r2));
            assert!(
                crate::linalg::norm3(res) < 1e-12 * scale,
                "pencil residual {:?}",
                res
            );
        }
    }

    #[test]
    fn background_frame_normal_form() {
        let (eos, params) = setup(1.0);
        let cfg = SheetConfig::new(eos, params, 1.0, 0.5).unwrap();
        let frame = background_frame(&cfg);
        let c = cfg.c_bar;
        for (idx, sign) in [(0usize, 1.0f64), (1, -1.0)] {
            let expect = Mat3::diag(0.0, -2.0 / c, 2.0 / c).scale(sign);
            let dev = frame.cal_a2[idx].sub(&expect).max_abs();
            assert!(dev < 1e-12, "side {idx} deviation {dev}");
        }
    }

    #[test]
    fn newtonian_background_frame_normal_form() {
        let cfg = SheetConfig::new(
            Eos::linear(1.0, 1e-3, 1e3, 1.0).unwrap(),
            FluidParams::newtonian(),
            1.0,
            2.0,
        )
        .unwrap();
        let frame = background_frame(&cfg);
        let expect = Mat3::diag(0.0, -2.0, 2.0);
        assert!(frame.cal_a2[0].sub(&expect).max_abs() < 1e-12);
    }
}
