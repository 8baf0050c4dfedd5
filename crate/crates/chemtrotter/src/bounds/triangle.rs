use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::terms::Term;

use super::structure::SubsetTable;
use super::{BoundError, BoundMethod, BoundReport, CommutationStructure};

/// Samples drawn per random stream; chunk `c` uses stream `c` of the seed.
pub const CHUNK_SIZE: usize = 4096;

/// How [`triangle_bound_mc`] visits the triple space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Random {
        samples: u64,
        seed: u64,
    },
    /// Every triple once, through explicit neighbor lists.
    Exhaustive,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Unbiased sample variance; NaN below two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            f64::NAN
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// `σ / (mean √M)`.
    pub fn relative_error(&self) -> f64 {
        if self.count >= 2 && self.m2 == 0.0 {
            return 0.0;
        }
        self.variance().sqrt() / (self.mean * (self.count as f64).sqrt())
    }
}

pub fn merge_moments(a: Moments, b: Moments) -> Moments {
    if a.count == 0 {
        return b;
    }
    if b.count == 0 {
        return a;
    }
    let n = a.count + b.count;
    let delta = b.mean - a.mean;
    let mean = a.mean + delta * b.count as f64 / n as f64;
    let m2 = a.m2 + b.m2 + delta * delta * a.count as f64 * b.count as f64 / n as f64;
    Moments { count: n, mean, m2 }
}

fn check(terms: &[Term], structure: &CommutationStructure) {
    assert_eq!(
        terms.len(),
        structure.len(),
        "structure was built from a different term list"
    );
}

/// `4 Σ_α ‖H_α‖ (Σ_{β ∈ neighbors(α)} ‖H_β‖)²`, exact.
///
/// Neighbor weights come from inclusion–exclusion over orbital subsets, so the
/// cost is linear in the number of terms.
pub fn triangle_bound_exact(terms: &[Term], structure: &CommutationStructure) -> BoundReport {
    check(terms, structure);
    let norms: Vec<f64> = terms.iter().map(Term::norm).collect();
    let diagonal: Vec<bool> = (0..terms.len()).map(|a| structure.is_diagonal(a)).collect();
    let indices: Vec<Vec<usize>> = (0..terms.len())
        .map(|a| structure.indices(a).to_vec())
        .collect();
    let table = SubsetTable::new(&indices, &diagonal, &norms);
    let contributions: Vec<f64> = (0..terms.len())
        .into_par_iter()
        .map(|a| {
            if structure.neighbor_counts()[a] == 0 {
                return 0.0;
            }
            let s = table
                .neighbor_weight(&indices[a], diagonal[a], norms[a])
                .max(0.0);
            norms[a] * s * s
        })
        .collect();
    BoundReport::deterministic(
        BoundMethod::ExhaustiveTriangle,
        4.0 * contributions.iter().sum::<f64>(),
    )
}

/// Monte-Carlo estimate of the same sum over uniformly drawn triples
/// `(α, β, β')`, `β, β' ∈ neighbors(α)`, scaled by the triple count.
///
/// An empty triple space yields a zero bound without sampling.
pub fn triangle_bound_mc(
    terms: &[Term],
    structure: &CommutationStructure,
    sampling: Sampling,
) -> Result<BoundReport, BoundError> {
    check(terms, structure);
    let l = structure.triple_count();
    if l == 0 {
        return Ok(BoundReport::sampled(BoundMethod::MonteCarlo, 0.0, 0.0, 0));
    }
    let norms: Vec<f64> = terms.iter().map(Term::norm).collect();
    match sampling {
        Sampling::Exhaustive => Ok(enumerate(&norms, structure)),
        Sampling::Random { samples, seed } => {
            if samples == 0 {
                return Err(BoundError::NoSamples);
            }
            Ok(sample(&norms, structure, samples, seed))
        }
    }
}

fn enumerate(norms: &[f64], structure: &CommutationStructure) -> BoundReport {
    // Triples rooted at α sum to ‖H_α‖ (Σ_β ‖H_β‖)² over its explicit list.
    let per_root: Vec<f64> = (0..norms.len())
        .into_par_iter()
        .map(|a| {
            let s: f64 = structure.neighbors(a).iter().map(|&b| norms[b]).sum();
            norms[a] * s * s
        })
        .collect();
    let total: f64 = per_root.iter().sum();
    BoundReport::sampled(
        BoundMethod::MonteCarlo,
        4.0 * total,
        0.0,
        structure.triple_count(),
    )
}

struct TripleSampler<'a> {
    structure: &'a CommutationStructure,
    /// Prefix sums of `K_α²`.
    cumulative: Vec<u64>,
}

impl<'a> TripleSampler<'a> {
    fn new(structure: &'a CommutationStructure) -> Self {
        let mut acc = 0u64;
        let cumulative = structure
            .neighbor_counts()
            .iter()
            .map(|k| {
                acc += k * k;
                acc
            })
            .collect();
        Self {
            structure,
            cumulative,
        }
    }

    fn root(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("nonempty");
        let u = rng.random_range(0..total);
        self.cumulative.partition_point(|&c| c <= u)
    }

    /// Uniform neighbor of `alpha`: draw from the concatenated per-orbital
    /// lists, reject non-neighbors, and thin by the number of shared orbitals.
    fn neighbor(&self, alpha: usize, rng: &mut ChaCha8Rng) -> usize {
        let s = self.structure;
        let own = s.indices(alpha);
        let total: usize = own.iter().map(|&i| s.terms_on(i).len()).sum();
        loop {
            let mut u = rng.random_range(0..total);
            let mut candidate = usize::MAX;
            for &i in own {
                let list = s.terms_on(i);
                if u < list.len() {
                    candidate = list[u];
                    break;
                }
                u -= list.len();
            }
            if candidate == alpha || (s.is_diagonal(alpha) && s.is_diagonal(candidate)) {
                continue;
            }
            let shared = s
                .indices(candidate)
                .iter()
                .filter(|i| own.contains(i))
                .count();
            if shared == 1 || rng.random_range(0..shared) == 0 {
                return candidate;
            }
        }
    }
}

fn sample(norms: &[f64], structure: &CommutationStructure, samples: u64, seed: u64) -> BoundReport {
    let sampler = TripleSampler::new(structure);
    let chunk = CHUNK_SIZE as u64;
    let n_chunks = samples.div_ceil(chunk);
    let parts: Vec<Moments> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut m = Moments::default();
            for _ in 0..chunk.min(samples - c * chunk) {
                let a = sampler.root(&mut rng);
                let b = sampler.neighbor(a, &mut rng);
                let b2 = sampler.neighbor(a, &mut rng);
                m.push(norms[a] * norms[b] * norms[b2]);
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), merge_moments);
    let l = structure.triple_count() as f64;
    BoundReport::sampled(
        BoundMethod::MonteCarlo,
        4.0 * l * total.mean,
        total.relative_error(),
        samples,
    )
}
