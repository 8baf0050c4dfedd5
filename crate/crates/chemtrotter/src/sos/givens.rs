use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::SosError;

const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

/// Rotation by `angle` in the `(p, q)` plane: `R_pp = R_qq = cos`,
/// `R_qp = sin`, `R_pq = −sin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GivensRotation {
    pub p: usize,
    pub q: usize,
    pub angle: f64,
}

impl GivensRotation {
    pub fn matrix(&self, n: usize) -> DMatrix<f64> {
        let mut r = DMatrix::identity(n, n);
        let (s, c) = self.angle.sin_cos();
        r[(self.p, self.p)] = c;
        r[(self.q, self.q)] = c;
        r[(self.q, self.p)] = s;
        r[(self.p, self.q)] = -s;
        r
    }
}

/// `u = R_1 R_2 … R_k · diag(signs)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GivensDecomposition {
    pub rotations: Vec<GivensRotation>,
    pub signs: Vec<f64>,
}

impl GivensDecomposition {
    /// Gate-count proxy for the orbital rotation.
    pub fn rotation_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.signs.len();
        let mut u = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.signs));
        for r in self.rotations.iter().rev() {
            u = r.matrix(n) * u;
        }
        u
    }
}

/// Factors a real orthogonal matrix into at most `N(N−1)/2` plane rotations
/// by zeroing the strict lower triangle column by column.
pub fn givens_decompose(u: &DMatrix<f64>) -> Result<GivensDecomposition, SosError> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(SosError::DimensionMismatch {
            left: n,
            right: u.ncols(),
        });
    }
    let defect = (u.transpose() * u - DMatrix::identity(n, n)).norm();
    if defect > ORTHOGONALITY_TOLERANCE {
        return Err(SosError::NotOrthogonal { defect });
    }
    let mut a = u.clone();
    let mut rotations = Vec::new();
    for j in 0..n {
        for i in (j + 1..n).rev() {
            if a[(i, j)].abs() < 1e-15 {
                a[(i, j)] = 0.0;
                continue;
            }
            let angle = a[(i, j)].atan2(a[(j, j)]);
            let (s, c) = angle.sin_cos();
            for k in 0..n {
                let (x, y) = (a[(j, k)], a[(i, k)]);
                a[(j, k)] = c * x + s * y;
                a[(i, k)] = -s * x + c * y;
            }
            a[(i, j)] = 0.0;
            rotations.push(GivensRotation { p: j, q: i, angle });
        }
    }
    let signs = (0..n)
        .map(|k| if a[(k, k)] < 0.0 { -1.0 } else { 1.0 })
        .collect();
    Ok(GivensDecomposition { rotations, signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_orthogonal(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        m.qr().q()
    }

    #[test]
    fn identity_needs_no_rotation() {
        let d = givens_decompose(&DMatrix::identity(5, 5)).unwrap();
        assert!(d.rotations.is_empty());
        assert_eq!(d.signs, vec![1.0; 5]);
    }

    #[test]
    fn plane_rotation_is_recovered() {
        let t: f64 = 0.7;
        let u = dmatrix![t.cos(), -t.sin(); t.sin(), t.cos()];
        let d = givens_decompose(&u).unwrap();
        assert_eq!(d.rotation_count(), 1);
        assert_eq!((d.rotations[0].p, d.rotations[0].q), (0, 1));
        assert!((d.rotations[0].angle - t).abs() < 1e-15);
    }

    #[test]
    fn random_orthogonal_reconstructs() {
        for (n, seed) in [(6, 1), (9, 2), (1, 3)] {
            let u = random_orthogonal(n, seed);
            let d = givens_decompose(&u).unwrap();
            assert!(d.rotation_count() <= n * (n - 1) / 2);
            assert!((d.reconstruct() - &u).amax() < 1e-10);
        }
    }

    #[test]
    fn non_orthogonal_rejected() {
        let err = givens_decompose(&dmatrix![1.0, 0.1; 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, SosError::NotOrthogonal { .. }));
    }
}
