use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hamiltonian::{Monomial, SpinOrbitalHamiltonian};
use crate::oracle::dense::real_matrix;
use crate::oracle::FockBasis;
use crate::terms::{Term, TermClass, PAIRINGS};

/// Denominators at or below this fraction of the orbital-energy scale count as zero.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-12;

/// `|h|² / Δ`, with a vanishing denominator ranked above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Importance {
    Finite(f64),
    Maximal,
}

impl Importance {
    pub fn log10(self) -> Option<f64> {
        match self {
            Self::Finite(x) if x > 0.0 => Some(x.log10()),
            _ => None,
        }
    }
}

impl PartialOrd for Importance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Self::Maximal, Self::Maximal) => Some(Ordering::Equal),
            (Self::Maximal, _) => Some(Ordering::Greater),
            (_, Self::Maximal) => Some(Ordering::Less),
            (Self::Finite(a), Self::Finite(b)) => a.partial_cmp(b),
        }
    }
}

/// Coefficient of `n_p n_q` collected from the four quartets that reduce to it.
fn number_number(h: &SpinOrbitalHamiltonian, p: usize, q: usize) -> f64 {
    let get = |k: [usize; 4]| h.two_body().get(&k).copied().unwrap_or(0.0);
    get([p, q, q, p]) + get([q, p, p, q]) - get([p, q, p, q]) - get([q, p, q, p])
}

/// `ω_p = t_pp + Σ_{q ∈ occ, q ≠ p} V_pq`, with `V_pq` the coefficient of `n_p n_q`.
pub fn orbital_energies(h: &SpinOrbitalHamiltonian, occupied: &BTreeSet<usize>) -> Vec<f64> {
    let n = h.n_orbitals();
    (0..n)
        .map(|p| {
            let t = h.one_body()[(p, p)];
            let v: f64 = occupied
                .iter()
                .filter(|&&q| q != p && q < n)
                .map(|&q| number_number(h, p, q))
                .sum();
            t + v
        })
        .collect()
}

/// Hartree–Fock-like filling: the `n_electrons` lowest orbital energies,
/// iterated to self-consistency (ties toward lower index).
pub fn default_occupied(h: &SpinOrbitalHamiltonian) -> BTreeSet<usize> {
    let n = h.n_orbitals();
    let k = h.n_electrons().unwrap_or(n / 2).min(n);
    let lowest = |omega: &[f64]| -> BTreeSet<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| omega[a].total_cmp(&omega[b]).then(a.cmp(&b)));
        idx.into_iter().take(k).collect()
    };
    let mut occ = lowest(&orbital_energies(h, &BTreeSet::new()));
    for _ in 0..100 {
        let next = lowest(&orbital_energies(h, &occ));
        if next == occ {
            break;
        }
        occ = next;
    }
    occ
}

/// Smallest `|ω_a + ω_b − ω_c − ω_d|` over the three ways to split the
/// indices into a creation pair and an annihilation pair.
pub fn delta_denominator(omega: &[f64], indices: [usize; 4]) -> f64 {
    let w = indices.map(|i| omega[i]);
    PAIRINGS
        .iter()
        .map(|(cre, ann)| (w[cre[0]] + w[cre[1]] - w[ann[0]] - w[ann[1]]).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Pauli strings on the four modes of a term, grouped into the four
/// strengths `xxxx+yyyy`, `xxyy+yyxx`, `yxyx+xyxy`, `yxxy+xyyx`
/// (character `j` acts on the `j`-th lowest mode).
pub const STRENGTH_DIRECTIONS: [[&str; 2]; 4] = [
    ["xxxx", "yyyy"],
    ["xxyy", "yyxx"],
    ["yxyx", "xyxy"],
    ["yxxy", "xyyx"],
];

/// `Tr(P h) / 16` for a 4-qubit X/Y string acting on a local 16×16 matrix.
fn pauli_coefficient(h: &nalgebra::DMatrix<f64>, string: &str) -> f64 {
    let ops: Vec<u8> = string.bytes().collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 0..16usize {
        let t = s ^ 0b1111;
        // P|t⟩ = phase |s⟩
        let mut phase = Complex64::new(1.0, 0.0);
        for (j, &op) in ops.iter().enumerate() {
            if op == b'y' {
                phase *= if t >> j & 1 == 0 {
                    Complex64::i()
                } else {
                    -Complex64::i()
                };
            }
        }
        acc += phase * h[(t, s)];
    }
    acc.re / 16.0
}

/// The four combined Pauli strengths of a four-index term.
pub fn pauli_strengths(t: &Term) -> [f64; 4] {
    let mut modes = t.indices().to_vec();
    modes.sort_unstable();
    let local = |p: &usize| modes.iter().position(|m| m == p).expect("term mode");
    let monomials: Vec<Monomial> = t
        .monomials()
        .into_iter()
        .map(|m| Monomial {
            coefficient: m.coefficient,
            creators: m.creators.iter().map(local).collect(),
            annihilators: m.annihilators.iter().map(local).collect(),
        })
        .collect();
    let h = real_matrix(&monomials, &FockBasis::full(4).expect("four modes"));
    STRENGTH_DIRECTIONS.map(|[a, b]| pauli_coefficient(&h, a) + pauli_coefficient(&h, b))
}

/// Largest of the four Pauli strengths.
pub fn representative_magnitude(t: &Term) -> f64 {
    assert_eq!(
        t.class(),
        TermClass::FourIndex,
        "representative magnitude is defined for four-index terms"
    );
    pauli_strengths(t).iter().fold(0.0, |m, s| m.max(s.abs()))
}

pub fn importance(representative: f64, delta: f64) -> Importance {
    if representative == 0.0 {
        Importance::Finite(0.0)
    } else if delta == 0.0 {
        Importance::Maximal
    } else {
        Importance::Finite(representative * representative / delta)
    }
}

/// Whether the term maps the occupation state `occupied` to zero.
pub fn hf_annihilates(t: &Term, occupied: &BTreeSet<usize>) -> bool {
    assert_eq!(
        t.class(),
        TermClass::FourIndex,
        "occupation test is defined for four-index terms"
    );
    let modes = t.indices();
    let occ = |i: usize| occupied.contains(&modes[i]);
    !PAIRINGS
        .iter()
        .zip(t.coefficients())
        .any(|((cre, ann), &v)| {
            let full = |pair: &[usize; 2]| occ(pair[0]) && occ(pair[1]);
            let empty = |pair: &[usize; 2]| !occ(pair[0]) && !occ(pair[1]);
            v != 0.0 && ((full(ann) && empty(cre)) || (full(cre) && empty(ann)))
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceEntry {
    /// Position in the term list the table was built from.
    pub term: usize,
    pub importance: Importance,
    pub denominator: f64,
    pub representative: f64,
    pub annihilates_hf: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceTable {
    pub n_terms: usize,
    pub entries: Vec<ImportanceEntry>,
    /// Mean and population standard deviation of `log₁₀ I` over finite,
    /// positive importances; `None` when there are none.
    pub log_mean: Option<f64>,
    pub log_std: Option<f64>,
    pub occupied: BTreeSet<usize>,
}

pub fn build_importance_table(
    h: &SpinOrbitalHamiltonian,
    terms: &[Term],
    occupied: Option<BTreeSet<usize>>,
) -> ImportanceTable {
    let occupied = occupied.unwrap_or_else(|| default_occupied(h));
    let omega = orbital_energies(h, &occupied);
    let scale = omega.iter().fold(1.0f64, |m, w| m.max(w.abs()));
    let entries: Vec<ImportanceEntry> = terms
        .par_iter()
        .enumerate()
        .filter(|(_, t)| t.class() == TermClass::FourIndex)
        .map(|(k, t)| {
            let idx = [
                t.indices()[0],
                t.indices()[1],
                t.indices()[2],
                t.indices()[3],
            ];
            let mut delta = delta_denominator(&omega, idx);
            if delta <= DEGENERATE_DENOMINATOR * scale {
                delta = 0.0;
            }
            let representative = representative_magnitude(t);
            ImportanceEntry {
                term: k,
                importance: importance(representative, delta),
                denominator: delta,
                representative,
                annihilates_hf: hf_annihilates(t, &occupied),
            }
        })
        .collect();
    let logs: Vec<f64> = entries
        .iter()
        .filter_map(|e| e.importance.log10())
        .collect();
    let (log_mean, log_std) = if logs.is_empty() {
        (None, None)
    } else {
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        let var = logs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / logs.len() as f64;
        (Some(mean), Some(var.sqrt()))
    };
    ImportanceTable {
        n_terms: terms.len(),
        entries,
        log_mean,
        log_std,
        occupied,
    }
}
