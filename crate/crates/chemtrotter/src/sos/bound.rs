use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{merge_moments, BoundMethod, BoundReport, Moments, Sampling, CHUNK_SIZE};

use super::decompose::SosDecomposition;
use super::free_fermion::{ff_commutator, ff_norm, FreeFermionOp};
use super::SosError;

struct Summands<'a> {
    ops: Vec<&'a FreeFermionOp>,
    /// `1` for `H₀`, `2‖G‖` for a square `G²`.
    weights: Vec<f64>,
}

impl<'a> Summands<'a> {
    fn new(d: &'a SosDecomposition) -> Self {
        let ops: Vec<&FreeFermionOp> = d.summands().collect();
        let weights = ops
            .iter()
            .enumerate()
            .map(|(k, g)| if k == 0 { 1.0 } else { 2.0 * ff_norm(g) })
            .collect();
        Self { ops, weights }
    }

    fn len(&self) -> usize {
        self.ops.len()
    }

    fn value(&self, a: usize, b: usize, c: usize) -> f64 {
        let w = self.weights[a] * self.weights[b] * self.weights[c];
        if w == 0.0 {
            return 0.0;
        }
        let inner = ff_commutator(self.ops[a], self.ops[b]).expect("same mode count");
        w * ff_norm(&ff_commutator(&inner, self.ops[c]).expect("same mode count"))
    }
}

/// Triple count with `β, β' > α` among `m` summands.
fn triples(m: usize) -> u64 {
    (0..m).map(|a| ((m - 1 - a) as u64).pow(2)).sum()
}

/// Nested-commutator bound for the sum-of-squares splitting.
///
/// Summands are `H₀` (index 0) and the squares `G_γ²`. A triple
/// `(α, β, β')` with `β, β' > α` contributes
/// `c_α c_β c_β' ‖[[G_α, G_β], G_β']‖` with `c = 2‖G‖` for a square and
/// `c = 1` for `H₀`, so that pure-square triples carry the factor
/// `8 ‖G_α‖ ‖G_β‖ ‖G_β'‖`.
pub fn sos_bound_mc(d: &SosDecomposition, sampling: Sampling) -> Result<BoundReport, SosError> {
    if d.squares.is_empty() {
        return Err(SosError::EmptyDecomposition);
    }
    let s = Summands::new(d);
    let m = s.len();
    let l = triples(m);
    match sampling {
        Sampling::Exhaustive => {
            let per_root: Vec<f64> = (0..m)
                .into_par_iter()
                .map(|a| {
                    let mut acc = 0.0;
                    for b in a + 1..m {
                        for c in a + 1..m {
                            acc += s.value(a, b, c);
                        }
                    }
                    acc
                })
                .collect();
            Ok(BoundReport::sampled(
                BoundMethod::SumOfSquaresMC,
                per_root.iter().sum(),
                0.0,
                l,
            ))
        }
        Sampling::Random { samples, seed } => {
            if samples == 0 {
                return Err(SosError::NoSamples);
            }
            let mut acc = 0u64;
            let cumulative: Vec<u64> = (0..m)
                .map(|a| {
                    acc += ((m - 1 - a) as u64).pow(2);
                    acc
                })
                .collect();
            let chunk = CHUNK_SIZE as u64;
            let parts: Vec<Moments> = (0..samples.div_ceil(chunk))
                .into_par_iter()
                .map(|c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(c);
                    let mut mom = Moments::default();
                    for _ in 0..chunk.min(samples - c * chunk) {
                        let u = rng.random_range(0..l);
                        let a = cumulative.partition_point(|&x| x <= u);
                        let b = rng.random_range(a + 1..m);
                        let b2 = rng.random_range(a + 1..m);
                        mom.push(s.value(a, b, b2));
                    }
                    mom
                })
                .collect();
            let total = parts.into_iter().fold(Moments::default(), merge_moments);
            Ok(BoundReport::sampled(
                BoundMethod::SumOfSquaresMC,
                l as f64 * total.mean,
                total.relative_error(),
                samples,
            ))
        }
    }
}
