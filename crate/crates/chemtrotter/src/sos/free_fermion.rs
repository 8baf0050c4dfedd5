use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::SosError;

const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Quadratic operator `Σ_pq g_pq c†_p c_q` with a Hermitian coefficient matrix.
///
/// Generators from antisymmetric eigenvectors are purely imaginary, so the
/// coefficients are stored as complex numbers even though the input
/// Hamiltonian is real.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeFermionOp {
    g: DMatrix<Complex64>,
}

/// Orbital rotation `w` and single-particle energies with `w g w† = diag(ε)`.
#[derive(Debug, Clone)]
pub struct FreeFermionSpectrum {
    pub basis_change: DMatrix<Complex64>,
    pub energies: DVector<f64>,
}

impl FreeFermionSpectrum {
    /// `w` as a real orthogonal matrix when the operator was real.
    pub fn real_basis_change(&self) -> Option<DMatrix<f64>> {
        self.basis_change
            .iter()
            .all(|z| z.im == 0.0)
            .then(|| self.basis_change.map(|z| z.re))
    }
}

impl FreeFermionOp {
    pub fn new(g: DMatrix<Complex64>) -> Result<Self, SosError> {
        if !g.is_square() {
            return Err(SosError::DimensionMismatch {
                left: g.nrows(),
                right: g.ncols(),
            });
        }
        let defect = (&g - g.adjoint()).camax();
        if defect > HERMITIAN_TOLERANCE * g.camax().max(1.0) {
            return Err(SosError::NotHermitian { defect });
        }
        Ok(Self {
            g: (&g + g.adjoint()).map(|z| z * 0.5),
        })
    }

    pub fn from_real(g: &DMatrix<f64>) -> Result<Self, SosError> {
        Self::new(g.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn zero(n_modes: usize) -> Self {
        Self {
            g: DMatrix::zeros(n_modes, n_modes),
        }
    }

    pub(crate) fn from_hermitian_unchecked(g: DMatrix<Complex64>) -> Self {
        Self { g }
    }

    pub fn n_modes(&self) -> usize {
        self.g.nrows()
    }

    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.g
    }

    pub fn is_real(&self) -> bool {
        self.g.iter().all(|z| z.im == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            g: self.g.map(|z| z * factor),
        }
    }

    /// Single-particle energies, ascending.
    pub fn energies(&self) -> DVector<f64> {
        let mut e = if self.is_real() {
            self.g.map(|z| z.re).symmetric_eigenvalues()
        } else {
            self.g.symmetric_eigenvalues()
        };
        e.as_mut_slice().sort_by(f64::total_cmp);
        e
    }
}

/// `i[A, B]`, the Hermitian generator whose norm is `‖[A, B]‖`.
pub fn ff_commutator(a: &FreeFermionOp, b: &FreeFermionOp) -> Result<FreeFermionOp, SosError> {
    if a.n_modes() != b.n_modes() {
        return Err(SosError::DimensionMismatch {
            left: a.n_modes(),
            right: b.n_modes(),
        });
    }
    let ab = &a.g * &b.g;
    let c = (&ab - ab.adjoint()).map(|z| z * Complex64::i());
    Ok(FreeFermionOp::from_hermitian_unchecked(c))
}

/// Operator norm on Fock space: the larger of the summed positive and summed
/// negative single-particle energies.
pub fn ff_norm(a: &FreeFermionOp) -> f64 {
    let e = a.energies();
    let pos: f64 = e.iter().filter(|&&x| x > 0.0).sum();
    let neg: f64 = e.iter().filter(|&&x| x < 0.0).sum();
    pos.max(-neg)
}

pub fn ff_diagonalize(a: &FreeFermionOp) -> FreeFermionSpectrum {
    if a.is_real() {
        let eig = SymmetricEigen::new(a.g.map(|z| z.re));
        FreeFermionSpectrum {
            basis_change: eig.eigenvectors.transpose().map(|x| Complex64::new(x, 0.0)),
            energies: eig.eigenvalues,
        }
    } else {
        let eig = SymmetricEigen::new(a.g.clone());
        FreeFermionSpectrum {
            basis_change: eig.eigenvectors.adjoint(),
            energies: eig.eigenvalues,
        }
    }
}
