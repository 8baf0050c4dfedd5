//! Random artificial molecules.
//!
//! Candidates are the canonical slots of each class: number-number pairs
//! `p<q`, three-index slots `(p<q, r)` and the three pairings of every quartet
//! `a<b<c<d`. Each slot is kept with probability `fraction`; a kept slot gets a
//! magnitude from its class distribution and a uniform random sign. The drawn
//! value becomes the coefficient of the slot's [`Term`](crate::Term) and is
//! spread as `v/2` over the four tensor entries related by exchange and
//! Hermitian conjugation.
//!
//! Randomness: `ChaCha8Rng` seeded with `seed`, stream 0 for number-number
//! slots, 1 for three-index slots and 2 for four-index slots, each class
//! visiting its slots in ascending lexicographic order. Per kept slot the draws
//! are acceptance, magnitude, sign; a rejected slot consumes only the
//! acceptance draw.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Uniform};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::{SpinOrbitalHamiltonian, TwoBody};
use crate::terms::PAIRINGS;

pub const NUMBER_NUMBER_MAX: f64 = 0.5;
pub const THREE_INDEX_MEAN: f64 = 0.2;
pub const FOUR_INDEX_MEAN: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnsembleError {
    #[error("fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),
    #[error("an ensemble needs at least one spin orbital")]
    NoOrbitals,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    n_orbitals: usize,
    fraction: f64,
    seed: u64,
}

impl EnsembleSpec {
    pub fn new(n_orbitals: usize, fraction: f64, seed: u64) -> Result<Self, EnsembleError> {
        if n_orbitals == 0 {
            return Err(EnsembleError::NoOrbitals);
        }
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(EnsembleError::InvalidFraction(fraction));
        }
        Ok(Self {
            n_orbitals,
            fraction,
            seed,
        })
    }

    /// Fully dense ensemble (`fraction = 1`).
    pub fn full(n_orbitals: usize, seed: u64) -> Result<Self, EnsembleError> {
        Self::new(n_orbitals, 1.0, seed)
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Number of candidate slots per class: (number-number, three-index, four-index).
pub fn candidate_counts(n: usize) -> (usize, usize, usize) {
    let pairs = n * n.saturating_sub(1) / 2;
    let quartets = if n < 4 {
        0
    } else {
        n * (n - 1) * (n - 2) * (n - 3) / 24
    };
    (pairs, pairs * n.saturating_sub(2), 3 * quartets)
}

fn class_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw<D: Distribution<f64>>(rng: &mut ChaCha8Rng, fraction: f64, magnitude: &D) -> Option<f64> {
    if rng.random::<f64>() >= fraction {
        return None;
    }
    let m = magnitude.sample(rng);
    Some(if rng.random::<bool>() { m } else { -m })
}

fn put_orbit(two: &mut TwoBody, [p, q, r, s]: [usize; 4], v: f64) {
    for key in [[p, q, r, s], [q, p, s, r], [s, r, q, p], [r, s, p, q]] {
        two.insert(key, v / 2.0);
    }
}

pub fn generate_ensemble(spec: &EnsembleSpec) -> SpinOrbitalHamiltonian {
    let n = spec.n_orbitals;
    let f = spec.fraction;
    let mut two = TwoBody::new();

    let uniform = Uniform::new(0.0, NUMBER_NUMBER_MAX).expect("valid range");
    let mut rng = class_rng(spec.seed, 0);
    for p in 0..n {
        for q in p + 1..n {
            if let Some(v) = draw(&mut rng, f, &uniform) {
                // c†_p c†_q c_q c_p = n_p n_q
                put_orbit(&mut two, [p, q, q, p], v);
            }
        }
    }

    let exp3 = Exp::new(1.0 / THREE_INDEX_MEAN).expect("positive rate");
    let mut rng = class_rng(spec.seed, 1);
    for p in 0..n {
        for q in p + 1..n {
            for r in (0..n).filter(|&r| r != p && r != q) {
                if let Some(v) = draw(&mut rng, f, &exp3) {
                    // c†_p c†_r c_r c_q = c†_p c_q n_r
                    put_orbit(&mut two, [p, r, r, q], v);
                }
            }
        }
    }

    let exp4 = Exp::new(1.0 / FOUR_INDEX_MEAN).expect("positive rate");
    let mut rng = class_rng(spec.seed, 2);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let modes = [a, b, c, d];
                    for (cre, ann) in PAIRINGS {
                        if let Some(v) = draw(&mut rng, f, &exp4) {
                            let (x, y, z, w) =
                                (modes[cre[0]], modes[cre[1]], modes[ann[0]], modes[ann[1]]);
                            put_orbit(&mut two, [x, y, w, z], v);
                        }
                    }
                }
            }
        }
    }

    SpinOrbitalHamiltonian::new(n, DMatrix::zeros(n, n), two, 0.0)
        .expect("ensemble entries are symmetric by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{enumerate_terms, TermClass};

    #[test]
    fn same_seed_same_hamiltonian() {
        let spec = EnsembleSpec::new(8, 0.3, 42).unwrap();
        assert_eq!(generate_ensemble(&spec), generate_ensemble(&spec));
        let other = EnsembleSpec::new(8, 0.3, 43).unwrap();
        assert_ne!(generate_ensemble(&spec), generate_ensemble(&other));
    }

    #[test]
    fn invalid_fraction_rejected() {
        assert_eq!(
            EnsembleSpec::new(4, 0.0, 1),
            Err(EnsembleError::InvalidFraction(0.0))
        );
        assert_eq!(
            EnsembleSpec::new(4, 1.5, 1),
            Err(EnsembleError::InvalidFraction(1.5))
        );
        assert_eq!(EnsembleSpec::new(0, 0.5, 1), Err(EnsembleError::NoOrbitals));
    }

    #[test]
    fn full_ensemble_fills_every_slot_once() {
        let h = generate_ensemble(&EnsembleSpec::full(7, 3).unwrap());
        let terms = enumerate_terms(&h);
        let (nn, three, four) = candidate_counts(7);
        let count = |c| terms.iter().filter(|t| t.class() == c).count();
        assert_eq!(count(TermClass::NumberNumber), nn);
        assert_eq!(count(TermClass::ThreeIndex), three);
        let channels: usize = terms
            .iter()
            .filter(|t| t.class() == TermClass::FourIndex)
            .map(|t| t.coefficients().iter().filter(|v| **v != 0.0).count())
            .sum();
        assert_eq!(channels, four);
        assert_eq!(
            count(TermClass::OneBodyDiag) + count(TermClass::OneBodyOffDiag),
            0
        );
    }

    #[test]
    fn magnitude_statistics() {
        let h = generate_ensemble(&EnsembleSpec::full(20, 9).unwrap());
        let terms = enumerate_terms(&h);
        let four: Vec<f64> = terms
            .iter()
            .filter(|t| t.class() == TermClass::FourIndex)
            .flat_map(|t| t.coefficients().iter().map(|v| v.abs()))
            .collect();
        assert!(four.len() >= 10_000);
        let mean = four.iter().sum::<f64>() / four.len() as f64;
        assert!((mean / FOUR_INDEX_MEAN - 1.0).abs() < 0.05, "mean {mean}");
        assert!(terms
            .iter()
            .filter(|t| t.class() == TermClass::NumberNumber)
            .all(|t| t.coefficient().abs() <= NUMBER_NUMBER_MAX));
    }

    #[test]
    fn sparse_fill_within_binomial_band() {
        let f = 0.05;
        let h = generate_ensemble(&EnsembleSpec::new(16, f, 2).unwrap());
        let terms = enumerate_terms(&h);
        let kept: usize = terms
            .iter()
            .map(|t| t.coefficients().iter().filter(|v| **v != 0.0).count())
            .sum();
        let (a, b, c) = candidate_counts(16);
        let total = (a + b + c) as f64;
        let sigma = (total * f * (1.0 - f)).sqrt();
        assert!(
            (kept as f64 - total * f).abs() <= 3.0 * sigma,
            "kept {kept} of {total}"
        );
    }
}
