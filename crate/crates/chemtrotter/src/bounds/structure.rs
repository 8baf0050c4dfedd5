use std::collections::HashMap;

use crate::terms::{terms_commute, Term};

/// Which terms fail the commutation test against which.
///
/// Neighbor lists are not stored; [`neighbors`](Self::neighbors) rebuilds
/// them from an orbital-to-term index. Counts are computed once by
/// inclusion–exclusion over orbital subsets, which assumes the terms occupy
/// distinct slots as produced by [`enumerate_terms`](crate::enumerate_terms).
#[derive(Debug, Clone)]
pub struct CommutationStructure {
    indices: Vec<Vec<usize>>,
    diagonal: Vec<bool>,
    by_orbital: Vec<Vec<usize>>,
    neighbor_counts: Vec<u64>,
    k_max: u64,
    triple_count: u64,
}

/// Sorted orbital subset packed into a key, 16 bits per entry.
pub(crate) fn subset_key(subset: &[usize]) -> u64 {
    subset.iter().fold(0u64, |k, &i| (k << 16) | (i as u64 + 1))
}

/// Nonempty subsets of a sorted index list, with inclusion–exclusion signs.
pub(crate) fn signed_subsets(indices: &[usize]) -> impl Iterator<Item = (u64, f64)> + '_ {
    let k = indices.len();
    (1u32..1 << k).map(move |mask| {
        let subset: Vec<usize> = (0..k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| indices[b])
            .collect();
        let sign = if mask.count_ones() % 2 == 1 {
            1.0
        } else {
            -1.0
        };
        (subset_key(&subset), sign)
    })
}

/// Per-subset weight sums over all terms and over occupation-diagonal terms.
pub(crate) struct SubsetTable {
    all: HashMap<u64, f64>,
    diagonal: HashMap<u64, f64>,
}

impl SubsetTable {
    pub(crate) fn new(indices: &[Vec<usize>], diagonal: &[bool], weights: &[f64]) -> Self {
        let mut all = HashMap::new();
        let mut diag = HashMap::new();
        for ((idx, &d), &w) in indices.iter().zip(diagonal).zip(weights) {
            for (key, _) in signed_subsets(idx) {
                *all.entry(key).or_insert(0.0) += w;
                if d {
                    *diag.entry(key).or_insert(0.0) += w;
                }
            }
        }
        Self {
            all,
            diagonal: diag,
        }
    }

    /// Total weight of the terms overlapping `indices`: `(all, diagonal only)`.
    pub(crate) fn overlapping(&self, indices: &[usize]) -> (f64, f64) {
        let mut all = 0.0;
        let mut diag = 0.0;
        for (key, sign) in signed_subsets(indices) {
            all += sign * self.all.get(&key).copied().unwrap_or(0.0);
            diag += sign * self.diagonal.get(&key).copied().unwrap_or(0.0);
        }
        (all, diag)
    }

    /// Weight of the non-commuting neighbors of a term with the given slot.
    pub(crate) fn neighbor_weight(&self, indices: &[usize], diagonal: bool, own: f64) -> f64 {
        let (all, diag) = self.overlapping(indices);
        if diagonal {
            all - diag
        } else {
            all - own
        }
    }
}

pub(crate) fn sorted_indices(t: &Term) -> Vec<usize> {
    let mut idx = t.indices().to_vec();
    idx.sort_unstable();
    idx
}

impl CommutationStructure {
    pub fn new(terms: &[Term]) -> Self {
        let indices: Vec<Vec<usize>> = terms.iter().map(sorted_indices).collect();
        let diagonal: Vec<bool> = terms.iter().map(|t| t.class().is_diagonal()).collect();
        let n_orb = indices.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
        let mut by_orbital = vec![Vec::new(); n_orb];
        for (pos, idx) in indices.iter().enumerate() {
            for &i in idx {
                by_orbital[i].push(pos);
            }
        }
        let ones = vec![1.0; terms.len()];
        let table = SubsetTable::new(&indices, &diagonal, &ones);
        let neighbor_counts: Vec<u64> = indices
            .iter()
            .zip(&diagonal)
            .map(|(idx, &d)| table.neighbor_weight(idx, d, 1.0).round() as u64)
            .collect();
        let k_max = neighbor_counts.iter().copied().max().unwrap_or(0);
        let triple_count = neighbor_counts.iter().map(|k| k * k).sum();
        Self {
            indices,
            diagonal,
            by_orbital,
            neighbor_counts,
            k_max,
            triple_count,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `|neighbors(α)|` for every term.
    pub fn neighbor_counts(&self) -> &[u64] {
        &self.neighbor_counts
    }

    /// Largest neighbor count, `K`.
    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    /// Number of triples `(α, β, β')` with `β, β'` neighbors of `α`: `L = Σ K_α²`.
    pub fn triple_count(&self) -> u64 {
        self.triple_count
    }

    pub(crate) fn indices(&self, alpha: usize) -> &[usize] {
        &self.indices[alpha]
    }

    pub(crate) fn is_diagonal(&self, alpha: usize) -> bool {
        self.diagonal[alpha]
    }

    pub(crate) fn terms_on(&self, orbital: usize) -> &[usize] {
        &self.by_orbital[orbital]
    }

    /// Sorted positions of the terms that may fail to commute with `alpha`.
    pub fn neighbors(&self, alpha: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.indices[alpha]
            .iter()
            .flat_map(|&i| self.by_orbital[i].iter().copied())
            .filter(|&b| b != alpha && !(self.diagonal[alpha] && self.diagonal[b]))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Neighbor counts by direct pairwise use of [`terms_commute`]; `O(m²)`.
pub fn brute_force_neighbor_counts(terms: &[Term]) -> Vec<u64> {
    terms
        .iter()
        .enumerate()
        .map(|(a, ta)| {
            terms
                .iter()
                .enumerate()
                .filter(|&(b, tb)| a != b && !terms_commute(ta, tb))
                .count() as u64
        })
        .collect()
}
