#![allow(dead_code)]

use chemtrotter::ingest::{generate_ensemble, EnsembleSpec};
use chemtrotter::SpinOrbitalHamiltonian;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ensemble two-body part plus random symmetric one-body part and core energy.
pub fn random_hamiltonian(n: usize, fraction: f64, seed: u64) -> SpinOrbitalHamiltonian {
    let base = generate_ensemble(&EnsembleSpec::new(n, fraction, seed).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
    let mut one = DMatrix::zeros(n, n);
    for p in 0..n {
        for q in p..n {
            let v = rng.random_range(-0.5..0.5);
            one[(p, q)] = v;
            one[(q, p)] = v;
        }
    }
    SpinOrbitalHamiltonian::new(n, one, base.two_body().clone(), rng.random_range(-1.0..1.0))
        .unwrap()
}

pub fn spectral_norm_dense(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.amax()
}

pub fn rel_frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}
