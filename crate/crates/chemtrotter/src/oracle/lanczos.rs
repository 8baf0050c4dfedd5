use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hamiltonian::Monomial;
use crate::terms::Term;

use super::fock::{apply_ladder, FockBasis};
use super::OracleError;

/// Iteration cap for [`spectral_norm`].
pub const MAX_LANCZOS_ITERATIONS: usize = 500;
/// Relative Ritz residual accepted as converged.
pub const LANCZOS_TOLERANCE: f64 = 1e-9;

/// Real matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_start: Vec<usize>,
    columns: Vec<usize>,
    values: Vec<f64>,
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let span = self.row_start[r]..self.row_start[r + 1];
            *out = self.columns[span.clone()]
                .iter()
                .zip(&self.values[span])
                .map(|(&c, v)| v * x[c])
                .sum();
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for k in self.row_start[r]..self.row_start[r + 1] {
                m[(r, self.columns[k])] += self.values[k];
            }
        }
        m
    }
}

/// Jordan–Wigner image of a monomial sum as a sparse matrix.
pub fn jw_build_sparse(monomials: &[Monomial], basis: &FockBasis) -> SparseOperator {
    let d = basis.dim();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); d];
    for (col, &state) in basis.states().iter().enumerate() {
        for m in monomials {
            if let Some((image, sign)) = apply_ladder(m, state) {
                if let Some(row) = basis.index_of(image) {
                    rows[row].push((col, m.coefficient * sign));
                }
            }
        }
    }
    let mut row_start = vec![0];
    let (mut columns, mut values) = (Vec::new(), Vec::new());
    for mut row in rows {
        row.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        for (c, v) in merged.into_iter().filter(|e| e.1 != 0.0) {
            columns.push(c);
            values.push(v);
        }
        row_start.push(columns.len());
    }
    SparseOperator {
        dim: d,
        row_start,
        columns,
        values,
    }
}

/// Largest `|λ|` of a real symmetric operator given by its action, by
/// Lanczos iteration with full reorthogonalization.
pub fn spectral_norm_with(
    dim: usize,
    apply: impl Fn(&[f64], &mut [f64]),
) -> Result<f64, OracleError> {
    if dim == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c);
    let mut q = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
    q /= q.norm();
    let mut basis: Vec<DVector<f64>> = vec![q];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut w = DVector::zeros(dim);
    let cap = MAX_LANCZOS_ITERATIONS.min(dim);
    for k in 0..cap {
        apply(basis[k].as_slice(), w.as_mut_slice());
        let a = basis[k].dot(&w);
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = v.dot(&w);
                w.axpy(-c, v, 1.0);
            }
        }
        let b = w.norm();
        let n = alpha.len();
        let t = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j || j + 1 == i {
                beta[i.min(j)]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let (j, theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (j, &e)| {
                if e.abs() > best.1.abs() {
                    (j, e)
                } else {
                    best
                }
            });
        let residual = b * eig.eigenvectors[(n - 1, j)].abs();
        let exhausted = b <= 1e-13 * theta.abs().max(1e-300) || k + 1 == dim;
        if exhausted || (n >= 2 && residual <= LANCZOS_TOLERANCE * theta.abs()) {
            return Ok(theta.abs());
        }
        beta.push(b);
        basis.push(&w / b);
    }
    Err(OracleError::NonConvergence { iterations: cap })
}

pub fn spectral_norm(op: &SparseOperator) -> Result<f64, OracleError> {
    spectral_norm_with(op.dim(), |x, y| op.matvec(x, y))
}

/// `‖Σ_{β > α} H_β‖` over the full Fock space, terms taken in list order.
pub fn tail_norm(terms: &[Term], alpha: usize, n_modes: usize) -> Result<f64, OracleError> {
    let basis = FockBasis::full(n_modes)?;
    let monomials: Vec<Monomial> = terms
        .iter()
        .skip(alpha + 1)
        .flat_map(Term::monomials)
        .collect();
    spectral_norm(&jw_build_sparse(&monomials, &basis))
}
