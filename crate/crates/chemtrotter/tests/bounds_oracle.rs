//! Commutator bounds against brute-force sums and repeated sampling.

mod common;

use chemtrotter::bounds::{
    cauchy_schwarz_bound, triangle_bound_exact, triangle_bound_mc, CommutationStructure, Sampling,
};
use chemtrotter::ingest::{generate_ensemble, EnsembleSpec};
use chemtrotter::{enumerate_terms, terms_commute, Term};
use common::random_hamiltonian;
use proptest::prelude::*;

/// `4 Σ_α ‖H_α‖ (Σ_β ‖H_β‖)²` from a pairwise loop over the commutation predicate.
fn brute_force_triangle(terms: &[Term]) -> f64 {
    let mut total = 0.0;
    for (a, ta) in terms.iter().enumerate() {
        let s: f64 = terms
            .iter()
            .enumerate()
            .filter(|&(b, tb)| a != b && !terms_commute(ta, tb))
            .map(|(_, tb)| tb.norm())
            .sum();
        total += ta.norm() * s * s;
    }
    4.0 * total
}

fn ensemble_terms(n: usize, fraction: f64, seed: u64) -> Vec<Term> {
    enumerate_terms(&generate_ensemble(
        &EnsembleSpec::new(n, fraction, seed).unwrap(),
    ))
}

#[test]
fn exact_matches_pairwise_loop() {
    for (n, f, seed) in [(6, 1.0, 1), (9, 0.3, 2), (12, 1.0, 3)] {
        let terms = enumerate_terms(&random_hamiltonian(n, f, seed));
        let s = CommutationStructure::new(&terms);
        let fast = triangle_bound_exact(&terms, &s).prefactor;
        let slow = brute_force_triangle(&terms);
        assert!((fast / slow - 1.0).abs() < 1e-12, "N={n}: {fast} vs {slow}");
    }
}

#[test]
fn sampled_mean_is_unbiased() {
    let cases = [(8, 1.0, 21), (12, 1.0, 22), (8, 0.05, 23), (12, 0.008, 24)];
    for (n, f, seed) in cases {
        let terms = ensemble_terms(n, f, seed);
        let s = CommutationStructure::new(&terms);
        let exact = triangle_bound_exact(&terms, &s).prefactor;
        if s.triple_count() == 0 {
            assert_eq!(exact, 0.0);
            continue;
        }
        let draws: Vec<f64> = (0..200)
            .map(|k| {
                triangle_bound_mc(
                    &terms,
                    &s,
                    Sampling::Random {
                        samples: 500,
                        seed: k,
                    },
                )
                .unwrap()
                .prefactor
            })
            .collect();
        let mean = draws.iter().sum::<f64>() / 200.0;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 199.0;
        let se = (var / 200.0).sqrt();
        assert!(
            (mean - exact).abs() <= 3.0 * se.max(1e-12 * exact),
            "N={n} F={f}: mean {mean}, exact {exact}, se {se}"
        );
    }
}

#[test]
fn full_n16_reaches_one_percent() {
    let terms = ensemble_terms(16, 1.0, 5);
    let s = CommutationStructure::new(&terms);
    let r = triangle_bound_mc(
        &terms,
        &s,
        Sampling::Random {
            samples: 100_000,
            seed: 7,
        },
    )
    .unwrap();
    assert!(
        r.statistical_error.unwrap() <= 0.01,
        "{:?}",
        r.statistical_error
    );
    let exact = triangle_bound_exact(&terms, &s).prefactor;
    assert!((r.prefactor / exact - 1.0).abs() < 0.05);
}

#[test]
fn cauchy_schwarz_is_finite_and_positive() {
    let terms = ensemble_terms(10, 1.0, 8);
    let s = CommutationStructure::new(&terms);
    let cs = cauchy_schwarz_bound(&terms, &s).unwrap();
    assert!(cs.prefactor.is_finite() && cs.prefactor > 0.0);
    assert_eq!(cs.energy_prefactor, cs.prefactor);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn adding_a_term_never_lowers_the_bound(n in 5usize..9, seed in any::<u64>(), drop in any::<prop::sample::Index>()) {
        let terms = enumerate_terms(&random_hamiltonian(n, 0.3, seed));
        prop_assume!(terms.len() > 1);
        let k = drop.index(terms.len());
        let mut fewer = terms.clone();
        fewer.remove(k);
        let full = triangle_bound_exact(&terms, &CommutationStructure::new(&terms)).prefactor;
        let less = triangle_bound_exact(&fewer, &CommutationStructure::new(&fewer)).prefactor;
        prop_assert!(less <= full * (1.0 + 1e-12));
    }
}
