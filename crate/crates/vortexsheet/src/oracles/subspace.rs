//! Stable-subspace extraction from the 4x4 interior symbol, the independent
//! route cross-checked against the closed-form eigenvectors.

use super::eig4::eig4;
use crate::error::{Result, VsError};
use crate::linalg::{orthonormalize, principal_angles, CMat4};
use crate::tol;
use num_complex::Complex64 as C64;

/// Orthonormal basis of the span of eigenvectors with negative real part.
#[derive(Clone, Debug)]
pub struct StableSubspace {
    pub dim: usize,
    pub basis: Vec<[C64; 4]>,
    /// Smallest |Re lambda| over all eigenvalues, relative to ||A||.
    pub margin: f64,
    pub warning: Option<String>,
}

/// Splits the spectrum at the imaginary axis.
///
/// Errors with `BoundaryCase` when any eigenvalue sits within
/// `SPECTRAL_SPLIT_RTOL * ||A||` of the axis, where the split is meaningless.
pub fn stable_subspace(a: &CMat4) -> Result<StableSubspace> {
    let norm_a = a.frob().max(1e-300);
    let e = eig4(a)?;
    let split = tol::SPECTRAL_SPLIT_RTOL * norm_a;
    let mut margin = f64::INFINITY;
    for lam in &e.values {
        margin = margin.min(lam.re.abs());
        if lam.re.abs() <= split {
            return Err(VsError::BoundaryCase {
                value: lam.re,
                tol: split,
            });
        }
    }
    let raw: Vec<[C64; 4]> = e
        .values
        .iter()
        .zip(e.vectors.iter())
        .filter(|(lam, _)| lam.re < 0.0)
        .map(|(_, v)| *v)
        .collect();
    let basis = orthonormalize(&raw);
    Ok(StableSubspace {
        dim: basis.len(),
        basis,
        margin: margin / norm_a,
        warning: e.warning,
    })
}

/// Largest principal angle between the computed stable subspace and a claimed
/// spanning set.
pub fn subspace_angle(a: &CMat4, claimed: &[[C64; 4]]) -> Result<f64> {
    let s = stable_subspace(a)?;
    if s.dim != claimed.len() {
        return Err(VsError::Verification {
            name: "stable-subspace dimension".into(),
            detail: format!("computed {}, claimed {}", s.dim, claimed.len()),
        });
    }
    let angles = principal_angles(&s.basis, claimed);
    Ok(angles.into_iter().fold(0.0f64, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{czero, CMat4};

    #[test]
    fn splits_a_block_diagonal_spectrum() {
        let a = CMat4::diag([
            C64::new(-2.0, 1.0),
            C64::new(-0.5, 0.0),
            C64::new(0.5, -3.0),
            C64::new(1.5, 0.0),
        ]);
        let s = stable_subspace(&a).unwrap();
        assert_eq!(s.dim, 2);
        let mut e1 = [czero(); 4];
        e1[0] = C64::new(1.0, 0.0);
        let mut e2 = [czero(); 4];
        e2[1] = C64::new(1.0, 0.0);
        let angle = subspace_angle(&a, &[e1, e2]).unwrap();
        assert!(angle < 1e-12, "angle {angle}");
    }

    #[test]
    fn near_axis_eigenvalue_is_a_boundary_case() {
        let a = CMat4::diag([
            C64::new(-1.0, 0.0),
            C64::new(1e-16, 2.0),
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
        ]);
        assert!(matches!(
            stable_subspace(&a),
            Err(VsError::BoundaryCase { .. })
        ));
    }
}
