//! Second-quantized molecular Hamiltonians over spin orbitals.
//!
//! `H = Σ h_pq c†_p c_q + Σ h_pqrs c†_p c†_q c_r c_s + core`, with 0-based
//! spin-orbital indices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use thiserror::Error;

/// Index quartet `(p, q, r, s)` of the monomial `c†_p c†_q c_r c_s`.
pub type Quartet = [usize; 4];

/// Sparse two-body coefficient map.
pub type TwoBody = BTreeMap<Quartet, f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("a Hamiltonian needs at least one spin orbital")]
    NoOrbitals,
    #[error("one-body matrix is {rows}x{cols}, expected {n}x{n}")]
    OneBodyShape { rows: usize, cols: usize, n: usize },
    #[error("one-body matrix is not symmetric at ({p}, {q})")]
    OneBodyNotSymmetric { p: usize, q: usize },
    #[error("index {index} out of range for {n} spin orbitals in {quartet:?}")]
    IndexOutOfRange {
        quartet: Quartet,
        index: usize,
        n: usize,
    },
    #[error("quartet {0:?} repeats a creation or annihilation index and is identically zero")]
    VanishingMonomial(Quartet),
    #[error("non-finite coefficient at {0:?}")]
    NonFinite(Quartet),
    #[error("h{0:?} differs from its exchange partner h_qpsr")]
    NotExchangeSymmetric(Quartet),
    #[error("h{0:?} differs from its Hermitian partner h_srqp")]
    NotHermitian(Quartet),
    #[error("{electrons} electrons do not fit in {n} spin orbitals")]
    TooManyElectrons { electrons: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbitalHamiltonian {
    n_orbitals: usize,
    one_body: DMatrix<f64>,
    two_body: TwoBody,
    core_energy: f64,
    n_electrons: Option<usize>,
}

impl SpinOrbitalHamiltonian {
    /// Validates and builds a Hamiltonian.
    ///
    /// Exact zeros in `two_body` are dropped. Stored quartets must satisfy
    /// `h_pqrs = h_qpsr` and `h_pqrs = h_srqp` exactly; run
    /// [`symmetrize_two_body`] first on raw input.
    pub fn new(
        n_orbitals: usize,
        one_body: DMatrix<f64>,
        two_body: TwoBody,
        core_energy: f64,
    ) -> Result<Self, HamiltonianError> {
        if n_orbitals == 0 {
            return Err(HamiltonianError::NoOrbitals);
        }
        if one_body.nrows() != n_orbitals || one_body.ncols() != n_orbitals {
            return Err(HamiltonianError::OneBodyShape {
                rows: one_body.nrows(),
                cols: one_body.ncols(),
                n: n_orbitals,
            });
        }
        for p in 0..n_orbitals {
            for q in 0..p {
                if one_body[(p, q)] != one_body[(q, p)] {
                    return Err(HamiltonianError::OneBodyNotSymmetric { p: q, q: p });
                }
            }
        }
        let two_body: TwoBody = two_body.into_iter().filter(|&(_, v)| v != 0.0).collect();
        for (&k, &v) in &two_body {
            let [p, q, r, s] = k;
            if let Some(&index) = k.iter().find(|&&i| i >= n_orbitals) {
                return Err(HamiltonianError::IndexOutOfRange {
                    quartet: k,
                    index,
                    n: n_orbitals,
                });
            }
            if p == q || r == s {
                return Err(HamiltonianError::VanishingMonomial(k));
            }
            if !v.is_finite() {
                return Err(HamiltonianError::NonFinite(k));
            }
            if two_body.get(&[q, p, s, r]) != Some(&v) {
                return Err(HamiltonianError::NotExchangeSymmetric(k));
            }
            if two_body.get(&[s, r, q, p]) != Some(&v) {
                return Err(HamiltonianError::NotHermitian(k));
            }
        }
        Ok(Self {
            n_orbitals,
            one_body,
            two_body,
            core_energy,
            n_electrons: None,
        })
    }

    /// Hamiltonian with no terms at all.
    pub fn zero(n_orbitals: usize) -> Result<Self, HamiltonianError> {
        Self::new(
            n_orbitals,
            DMatrix::zeros(n_orbitals, n_orbitals),
            TwoBody::new(),
            0.0,
        )
    }

    pub fn with_n_electrons(mut self, n_electrons: usize) -> Result<Self, HamiltonianError> {
        if n_electrons > self.n_orbitals {
            return Err(HamiltonianError::TooManyElectrons {
                electrons: n_electrons,
                n: self.n_orbitals,
            });
        }
        self.n_electrons = Some(n_electrons);
        Ok(self)
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn one_body(&self) -> &DMatrix<f64> {
        &self.one_body
    }

    pub fn two_body(&self) -> &TwoBody {
        &self.two_body
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    /// Electron count recorded by the source (e.g. FCIDUMP `NELEC`).
    pub fn n_electrons(&self) -> Option<usize> {
        self.n_electrons
    }

    /// Fraction of ordered quartets with distinct creation and annihilation
    /// pairs that carry a nonzero coefficient.
    pub fn two_body_fill(&self) -> f64 {
        let n = self.n_orbitals as f64;
        let slots = (n * (n - 1.0)).powi(2);
        if slots == 0.0 {
            0.0
        } else {
            self.two_body.len() as f64 / slots
        }
    }
}

/// A product of ladder operators `c†_{c0} c†_{c1} … c_{a0} c_{a1} …` with a
/// real coefficient, read left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coefficient: f64,
    pub creators: Vec<usize>,
    pub annihilators: Vec<usize>,
}

impl Monomial {
    pub fn new(coefficient: f64, creators: &[usize], annihilators: &[usize]) -> Self {
        Self {
            coefficient,
            creators: creators.to_vec(),
            annihilators: annihilators.to_vec(),
        }
    }
}

impl SpinOrbitalHamiltonian {
    /// Every stored coefficient as a monomial, excluding the core energy.
    pub fn monomials(&self) -> Vec<Monomial> {
        let n = self.n_orbitals;
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                let v = self.one_body[(p, q)];
                if v != 0.0 {
                    out.push(Monomial::new(v, &[p], &[q]));
                }
            }
        }
        for (&[p, q, r, s], &v) in &self.two_body {
            out.push(Monomial::new(v, &[p, q], &[r, s]));
        }
        out
    }
}

/// Replaces every `h_pqrs` by `(h_pqrs + h_qpsr) / 2`, dropping exact zeros.
pub fn symmetrize_two_body(raw: &TwoBody) -> TwoBody {
    let mut out = TwoBody::new();
    for &[p, q, r, s] in raw.keys() {
        for key in [[p, q, r, s], [q, p, s, r]] {
            if out.contains_key(&key) {
                continue;
            }
            let [a, b, c, d] = key;
            let v = raw.get(&key).copied().unwrap_or(0.0);
            let w = raw.get(&[b, a, d, c]).copied().unwrap_or(0.0);
            let sym = (v + w) / 2.0;
            if sym != 0.0 {
                out.insert(key, sym);
            }
        }
    }
    out
}

/// `Σ |h_pqrs|` over stored quartets.
pub fn sum_abs_coefficients(h: &SpinOrbitalHamiltonian) -> f64 {
    h.two_body.values().map(|v| v.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn map(entries: &[(Quartet, f64)]) -> TwoBody {
        entries.iter().copied().collect()
    }

    #[test]
    fn symmetrize_averages_exchange_partners() {
        let out = symmetrize_two_body(&map(&[([0, 1, 2, 3], 0.4), ([1, 0, 3, 2], 0.2)]));
        assert_eq!(out.len(), 2);
        assert!((out[&[0, 1, 2, 3]] - 0.3).abs() < 1e-15);
        assert_eq!(out[&[0, 1, 2, 3]], out[&[1, 0, 3, 2]]);
    }

    #[test]
    fn symmetrize_drops_cancellations() {
        let out = symmetrize_two_body(&map(&[([0, 1, 2, 3], 0.4), ([1, 0, 3, 2], -0.4)]));
        assert!(out.is_empty());
    }

    #[test]
    fn symmetrize_fills_missing_partner() {
        let out = symmetrize_two_body(&map(&[([0, 1, 2, 3], 0.4)]));
        assert_eq!(out, map(&[([0, 1, 2, 3], 0.2), ([1, 0, 3, 2], 0.2)]));
    }

    #[test]
    fn sum_abs_matches_hand_value() {
        let two = map(&[
            ([0, 1, 2, 3], 0.3),
            ([1, 0, 3, 2], 0.3),
            ([3, 2, 1, 0], 0.3),
            ([2, 3, 0, 1], 0.3),
        ]);
        let h = SpinOrbitalHamiltonian::new(4, DMatrix::zeros(4, 4), two, 0.0).unwrap();
        assert!((sum_abs_coefficients(&h) - 1.2).abs() < 1e-15);
        assert_eq!(
            sum_abs_coefficients(&SpinOrbitalHamiltonian::zero(3).unwrap()),
            0.0
        );
    }

    #[test]
    fn validation_rejects_broken_symmetry() {
        let two = map(&[([0, 1, 2, 3], 0.3), ([1, 0, 3, 2], 0.2)]);
        let err = SpinOrbitalHamiltonian::new(4, DMatrix::zeros(4, 4), two, 0.0).unwrap_err();
        assert!(matches!(err, HamiltonianError::NotExchangeSymmetric(_)));

        let two = map(&[([0, 1, 2, 3], 0.3), ([1, 0, 3, 2], 0.3)]);
        let err = SpinOrbitalHamiltonian::new(4, DMatrix::zeros(4, 4), two, 0.0).unwrap_err();
        assert!(matches!(err, HamiltonianError::NotHermitian(_)));

        let two = map(&[([0, 0, 2, 3], 0.3)]);
        let err = SpinOrbitalHamiltonian::new(4, DMatrix::zeros(4, 4), two, 0.0).unwrap_err();
        assert_eq!(err, HamiltonianError::VanishingMonomial([0, 0, 2, 3]));

        let mut one = DMatrix::zeros(2, 2);
        one[(0, 1)] = 1.0;
        let err = SpinOrbitalHamiltonian::new(2, one, TwoBody::new(), 0.0).unwrap_err();
        assert!(matches!(err, HamiltonianError::OneBodyNotSymmetric { .. }));
    }

    proptest! {
        #[test]
        fn symmetrize_is_idempotent_and_symmetric(
            entries in prop::collection::vec(
                ((0usize..5, 0usize..5, 0usize..5, 0usize..5), -1.0f64..1.0),
                0..30,
            )
        ) {
            let raw: TwoBody = entries.into_iter().map(|((p, q, r, s), v)| ([p, q, r, s], v)).collect();
            let once = symmetrize_two_body(&raw);
            for (&[p, q, r, s], &v) in &once {
                prop_assert_eq!(once.get(&[q, p, s, r]), Some(&v));
            }
            prop_assert_eq!(symmetrize_two_body(&once), once);
        }
    }
}
