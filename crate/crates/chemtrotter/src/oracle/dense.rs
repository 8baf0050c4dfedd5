use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::hamiltonian::{Monomial, SpinOrbitalHamiltonian};
use crate::terms::Term;

use super::fock::{apply_ladder, FockBasis};
use super::OracleError;

/// A matrix acting on a [`FockBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    basis: FockBasis,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(basis: FockBasis, matrix: DMatrix<Complex64>) -> Self {
        assert_eq!(
            matrix.shape(),
            (basis.dim(), basis.dim()),
            "matrix does not match basis"
        );
        Self { basis, matrix }
    }

    pub fn from_real(basis: FockBasis, matrix: &DMatrix<f64>) -> Self {
        Self::new(basis, matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `‖A − A†‖_F / max(‖A‖_F, 1)`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm() / self.matrix.norm().max(1.0)
    }

    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.matrix.map(|z| z.re)
    }
}

/// Real matrix of `Σ coefficient · ladder product` on `basis`; images that
/// leave the basis are dropped.
pub fn real_matrix(monomials: &[Monomial], basis: &FockBasis) -> DMatrix<f64> {
    let d = basis.dim();
    let mut m = DMatrix::zeros(d, d);
    for (col, &state) in basis.states().iter().enumerate() {
        for mono in monomials {
            if let Some((image, sign)) = apply_ladder(mono, state) {
                if let Some(row) = basis.index_of(image) {
                    m[(row, col)] += sign * mono.coefficient;
                }
            }
        }
    }
    m
}

fn check_modes(basis: &FockBasis, needed: usize) -> Result<(), OracleError> {
    if needed > basis.n_modes() {
        Err(OracleError::ModeMismatch {
            needed,
            available: basis.n_modes(),
        })
    } else {
        Ok(())
    }
}

fn highest_mode(monomials: &[Monomial]) -> usize {
    monomials
        .iter()
        .flat_map(|m| m.creators.iter().chain(&m.annihilators))
        .map(|&p| p + 1)
        .max()
        .unwrap_or(0)
}

pub fn jw_build_monomials(
    monomials: &[Monomial],
    basis: &FockBasis,
) -> Result<DenseOperator, OracleError> {
    check_modes(basis, highest_mode(monomials))?;
    Ok(DenseOperator::from_real(
        basis.clone(),
        &real_matrix(monomials, basis),
    ))
}

/// Jordan–Wigner image of a sum of terms.
pub fn jw_build_terms(terms: &[Term], basis: &FockBasis) -> Result<DenseOperator, OracleError> {
    let monomials: Vec<Monomial> = terms.iter().flat_map(Term::monomials).collect();
    jw_build_monomials(&monomials, basis)
}

/// Jordan–Wigner image of `Σ_pq g_pq c†_p c_q` for complex `g`.
pub fn jw_build_quadratic(
    g: &DMatrix<Complex64>,
    basis: &FockBasis,
) -> Result<DenseOperator, OracleError> {
    check_modes(basis, g.nrows())?;
    let d = basis.dim();
    let mut m = DMatrix::zeros(d, d);
    for (col, &state) in basis.states().iter().enumerate() {
        for p in 0..g.nrows() {
            for q in 0..g.ncols() {
                if g[(p, q)] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                if let Some((image, sign)) = apply_ladder(&Monomial::new(1.0, &[p], &[q]), state) {
                    if let Some(row) = basis.index_of(image) {
                        m[(row, col)] += g[(p, q)] * sign;
                    }
                }
            }
        }
    }
    Ok(DenseOperator::new(basis.clone(), m))
}

/// Jordan–Wigner image of the full Hamiltonian, core energy included.
pub fn jw_build_hamiltonian(
    h: &SpinOrbitalHamiltonian,
    basis: &FockBasis,
) -> Result<DenseOperator, OracleError> {
    check_modes(basis, h.n_orbitals())?;
    let mut m = real_matrix(&h.monomials(), basis);
    for i in 0..m.nrows() {
        m[(i, i)] += h.core_energy();
    }
    Ok(DenseOperator::from_real(basis.clone(), &m))
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// Normalized, in the basis of the operator that was solved.
    pub vector: DVector<Complex64>,
    /// Particle number of the state when it is sharp.
    pub particles: Option<usize>,
}

/// Lowest eigenpair of a real symmetric matrix.
pub(crate) fn lowest_real(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let (i, &e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    (e, eig.eigenvectors.column(i).into_owned())
}

fn lowest(m: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    if m.iter().all(|z| z.im == 0.0) {
        let (e, v) = lowest_real(&m.map(|z| z.re));
        return (e, v.map(|x| Complex64::new(x, 0.0)));
    }
    let eig = SymmetricEigen::new(m.clone());
    let (i, &e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    (e, eig.eigenvectors.column(i).into_owned())
}

fn sub_block(m: &DMatrix<Complex64>, rows: &[usize]) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| m[(rows[i], rows[j])])
}

fn conserves_number(op: &DenseOperator) -> bool {
    let states = op.basis().states();
    op.matrix().iter().enumerate().all(|(k, z)| {
        *z == Complex64::new(0.0, 0.0) || {
            let (i, j) = (k % states.len(), k / states.len());
            states[i].count_ones() == states[j].count_ones()
        }
    })
}

/// Lowest eigenvalue and eigenvector, optionally restricted to a particle
/// number sector.
///
/// On a full-space operator with no sector requested, a number-conserving
/// operator is solved sector by sector and the global minimum returned.
pub fn ground_state(
    op: &DenseOperator,
    particle_sector: Option<usize>,
) -> Result<GroundState, OracleError> {
    let defect = op.hermiticity_defect();
    if defect > 1e-10 {
        return Err(OracleError::NonHermitian { defect });
    }
    let basis = op.basis();
    let embed = |rows: &[usize], v: DVector<Complex64>| {
        let mut out = DVector::zeros(basis.dim());
        for (k, &r) in rows.iter().enumerate() {
            out[r] = v[k];
        }
        out
    };
    let sector_rows = |k: usize| -> Vec<usize> {
        (0..basis.dim())
            .filter(|&i| basis.state(i).count_ones() as usize == k)
            .collect()
    };
    match (basis.particles(), particle_sector) {
        (Some(p), Some(k)) if p != k => Err(OracleError::InvalidSector {
            particles: k,
            n_modes: basis.n_modes(),
        }),
        (Some(p), _) => {
            let (energy, vector) = lowest(op.matrix());
            Ok(GroundState {
                energy,
                vector,
                particles: Some(p),
            })
        }
        (None, Some(k)) => {
            if k > basis.n_modes() {
                return Err(OracleError::InvalidSector {
                    particles: k,
                    n_modes: basis.n_modes(),
                });
            }
            let rows = sector_rows(k);
            let (energy, v) = lowest(&sub_block(op.matrix(), &rows));
            Ok(GroundState {
                energy,
                vector: embed(&rows, v),
                particles: Some(k),
            })
        }
        (None, None) if conserves_number(op) => {
            let mut best: Option<GroundState> = None;
            for k in 0..=basis.n_modes() {
                let rows = sector_rows(k);
                let (energy, v) = lowest(&sub_block(op.matrix(), &rows));
                if best.as_ref().map_or(true, |b| energy < b.energy) {
                    best = Some(GroundState {
                        energy,
                        vector: embed(&rows, v),
                        particles: Some(k),
                    });
                }
            }
            Ok(best.expect("at least the vacuum sector"))
        }
        (None, None) => {
            let (energy, vector) = lowest(op.matrix());
            Ok(GroundState {
                energy,
                vector,
                particles: None,
            })
        }
    }
}
