use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::hamiltonian::SpinOrbitalHamiltonian;

use super::free_fermion::FreeFermionOp;

/// Relative eigenvalue cut below which a generator is dropped.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// One `−η G²` summand.
#[derive(Debug, Clone, PartialEq)]
pub struct Square {
    pub sign: f64,
    pub generator: FreeFermionOp,
}

/// `H = free_part − Σ_γ η_γ G_γ² + scalar_offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct SosDecomposition {
    pub free_part: FreeFermionOp,
    pub squares: Vec<Square>,
    pub scalar_offset: f64,
}

impl SosDecomposition {
    pub fn n_modes(&self) -> usize {
        self.free_part.n_modes()
    }

    /// The summands in bound order: `H₀` first, then the squares' generators.
    pub fn summands(&self) -> impl Iterator<Item = &FreeFermionOp> {
        std::iter::once(&self.free_part).chain(self.squares.iter().map(|s| &s.generator))
    }
}

/// Pair basis vector in the symmetric (`+`) or antisymmetric (`−`) sector
/// of the swap `(p, r) → (r, p)`; returned as `(flat index, weight)` entries.
fn pair_basis(n: usize, symmetric: bool) -> Vec<Vec<(usize, f64)>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for p in 0..n {
        if symmetric {
            out.push(vec![(p * n + p, 1.0)]);
        }
        for r in p + 1..n {
            let sign = if symmetric { 1.0 } else { -1.0 };
            out.push(vec![(p * n + r, h), (r * n + p, sign * h)]);
        }
    }
    out
}

/// Completes the square on the two-body part.
///
/// Writing `c†_p c†_q c_r c_s = δ_qr E_ps − E_pr E_qs` with `E_pr = c†_p c_r`
/// gives `V = H₁ − Σ M_{(pr),(qs)} E_pr E_qs`, `M_{(pr),(qs)} = h_pqrs`,
/// `(H₁)_ps = Σ_q h_pqqs`. `M` commutes with the pair swap, so its
/// eigenvectors are symmetric or antisymmetric `N × N` matrices `U`. A
/// symmetric `U` gives a Hermitian `K = Σ U_pr E_pr` and the summand
/// `−d K²`; an antisymmetric one gives `K = iG` with `G = −iU` and the summand
/// `+d G²`. Generators carry `√|d|`.
pub fn build_sos(h: &SpinOrbitalHamiltonian) -> SosDecomposition {
    let n = h.n_orbitals();
    let mut m = DMatrix::<f64>::zeros(n * n, n * n);
    let mut h1 = h.one_body().clone();
    for (&[p, q, r, s], &v) in h.two_body() {
        m[(p * n + r, q * n + s)] = v;
        if q == r {
            h1[(p, s)] += v;
        }
    }
    let largest = m.amax();
    let mut squares = Vec::new();
    for symmetric in [true, false] {
        let basis = pair_basis(n, symmetric);
        if basis.is_empty() {
            continue;
        }
        let block = DMatrix::from_fn(basis.len(), basis.len(), |a, b| {
            let mut acc = 0.0;
            for &(x, wx) in &basis[a] {
                for &(y, wy) in &basis[b] {
                    acc += wx * wy * m[(x, y)];
                }
            }
            acc
        });
        let eig = SymmetricEigen::new(block);
        for (k, &d) in eig.eigenvalues.iter().enumerate() {
            if d.abs() <= DEGENERACY_THRESHOLD * largest || d == 0.0 {
                continue;
            }
            let mut u = DMatrix::<f64>::zeros(n, n);
            for (a, entries) in basis.iter().enumerate() {
                let c = eig.eigenvectors[(a, k)];
                for &(x, w) in entries {
                    u[(x / n, x % n)] += c * w;
                }
            }
            let scale = d.abs().sqrt();
            let (g, sign) = if symmetric {
                (u.map(|x| Complex64::new(x * scale, 0.0)), d.signum())
            } else {
                (u.map(|x| Complex64::new(0.0, -x * scale)), -d.signum())
            };
            squares.push(Square {
                sign,
                generator: FreeFermionOp::from_hermitian_unchecked(g),
            });
        }
    }
    let free_part = FreeFermionOp::from_real(&((&h1 + h1.transpose()) * 0.5))
        .expect("symmetric by construction");
    SosDecomposition {
        free_part,
        squares,
        scalar_offset: h.core_energy(),
    }
}
