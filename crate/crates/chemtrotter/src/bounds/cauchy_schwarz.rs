use rayon::prelude::*;

use crate::terms::Term;

use super::{BoundError, BoundMethod, BoundReport, CommutationStructure};

/// Largest term count for which the `m²`-bit neighbor matrix is built (128 MiB).
pub const MAX_BITSET_TERMS: usize = 32_768;

/// Number of ordered triples `(α, β, β')` whose double commutator
/// `[[H_β, H_α], H_β']` is not ruled out by the commutation predicate:
/// `β ∈ neighbors(α)` and `β' ∈ neighbors(α) ∪ neighbors(β)`.
pub fn nonzero_triple_count(structure: &CommutationStructure) -> Result<u64, BoundError> {
    let m = structure.len();
    if m > MAX_BITSET_TERMS {
        return Err(BoundError::TooManyTerms {
            terms: m,
            max: MAX_BITSET_TERMS,
        });
    }
    let words = m.div_ceil(64);
    let rows: Vec<Vec<u64>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![0u64; words];
            for b in structure.neighbors(a) {
                row[b / 64] |= 1 << (b % 64);
            }
            row
        })
        .collect();
    let per_root: Vec<u64> = (0..m)
        .into_par_iter()
        .map(|a| {
            let ra = &rows[a];
            structure
                .neighbors(a)
                .into_iter()
                .map(|b| {
                    ra.iter()
                        .zip(&rows[b])
                        .map(|(x, y)| u64::from((x | y).count_ones()))
                        .sum::<u64>()
                })
                .sum()
        })
        .collect();
    Ok(per_root.iter().sum())
}

fn prefactor(terms: &[Term], n_w: u64) -> f64 {
    let sq: f64 = terms.iter().map(|t| t.norm() * t.norm()).sum();
    4.0 * sq.powf(1.5) * (n_w as f64).sqrt()
}

/// `4 (Σ_α ‖H_α‖²)^{3/2} √N_W` with `N_W` from [`nonzero_triple_count`].
pub fn cauchy_schwarz_bound(
    terms: &[Term],
    structure: &CommutationStructure,
) -> Result<BoundReport, BoundError> {
    assert_eq!(
        terms.len(),
        structure.len(),
        "structure was built from a different term list"
    );
    let n_w = nonzero_triple_count(structure)?;
    Ok(BoundReport::deterministic(
        BoundMethod::CauchySchwarz,
        prefactor(terms, n_w),
    ))
}

/// Same bound with `N_W` further restricted by a caller predicate on
/// `(α, β, β')`, for example one encoding symmetries of the target state.
///
/// Triples are enumerated one by one, so this is practical for small term
/// lists only. Returns the report together with the restricted `N_W`.
pub fn cauchy_schwarz_bound_with<F>(
    terms: &[Term],
    structure: &CommutationStructure,
    keep: F,
) -> (BoundReport, u64)
where
    F: Fn(usize, usize, usize) -> bool + Sync,
{
    assert_eq!(
        terms.len(),
        structure.len(),
        "structure was built from a different term list"
    );
    let per_root: Vec<u64> = (0..structure.len())
        .into_par_iter()
        .map(|a| {
            let na = structure.neighbors(a);
            let mut count = 0;
            for &b in &na {
                let mut reach = na.clone();
                reach.extend(structure.neighbors(b));
                reach.sort_unstable();
                reach.dedup();
                count += reach.into_iter().filter(|&b2| keep(a, b, b2)).count() as u64;
            }
            count
        })
        .collect();
    let n_w = per_root.iter().sum();
    (
        BoundReport::deterministic(BoundMethod::CauchySchwarz, prefactor(terms, n_w)),
        n_w,
    )
}
