//! Shared fixtures for unit tests.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hamiltonian::SpinOrbitalHamiltonian;
use crate::ingest::ensemble::{generate_ensemble, EnsembleSpec};

/// Ensemble Hamiltonian plus a random symmetric one-body part and core energy.
pub fn random_hamiltonian(n: usize, fraction: f64, seed: u64) -> SpinOrbitalHamiltonian {
    let base = generate_ensemble(&EnsembleSpec::new(n, fraction, seed).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
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
