use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::terms::{TermClass, TermOrder};

use super::trotter::{ProductFormula, TrotterSimulator};
use super::OracleError;

/// Reference ratios quoted for a 14-spin-orbital water Hamiltonian at
/// `Δt = 1/8`: kurtosis, skewness and width-over-mean.
pub const WATER_REFERENCE_RATIOS: (f64, f64, f64) = (3.15, 0.32, 0.033);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMoments {
    pub count: usize,
    pub mean: f64,
    /// Central moments `⟨(x − mean)^k⟩` for `k = 2, 3, 4`.
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl SampleMoments {
    pub fn new(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let central = |k: i32| xs.iter().map(|x| (x - mean).powi(k)).sum::<f64>() / n;
        Self {
            count: xs.len(),
            mean,
            m2: central(2),
            m3: central(3),
            m4: central(4),
        }
    }

    /// `m4 / m2²`; absent when the spread vanishes.
    pub fn kurtosis_ratio(&self) -> Option<f64> {
        (self.m2 > 0.0).then(|| self.m4 / (self.m2 * self.m2))
    }

    /// `m3 / m2^{3/2}`.
    pub fn skewness_ratio(&self) -> Option<f64> {
        (self.m2 > 0.0).then(|| self.m3 / self.m2.powf(1.5))
    }

    /// `√m2 / mean`.
    pub fn width_ratio(&self) -> Option<f64> {
        (self.m2 > 0.0 && self.mean != 0.0).then(|| self.m2.sqrt() / self.mean)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderExperiment {
    pub dt: f64,
    pub seed: u64,
    /// Signed ground-energy errors, one per sample, in sample order.
    pub errors: Vec<f64>,
    pub moments: SampleMoments,
}

impl OrderExperiment {
    /// Equal-width bins spanning the observed range: `(low, high, count)`.
    pub fn histogram(&self, bins: usize) -> Vec<(f64, f64, usize)> {
        assert!(bins > 0, "need at least one bin");
        let lo = self.errors.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self
            .errors
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let width = if hi > lo {
            (hi - lo) / bins as f64
        } else {
            1.0
        };
        let mut counts = vec![0usize; bins];
        for &e in &self.errors {
            counts[(((e - lo) / width) as usize).min(bins - 1)] += 1;
        }
        counts
            .into_iter()
            .enumerate()
            .map(|(k, c)| (lo + k as f64 * width, lo + (k + 1) as f64 * width, c))
            .collect()
    }

    /// Histogram as CSV, preceded by `#` lines holding the raw moments.
    pub fn write_csv<W: Write>(&self, bins: usize, mut out: W) -> std::io::Result<()> {
        let m = &self.moments;
        writeln!(
            out,
            "# count={} mean={:e} m2={:e} m3={:e} m4={:e}",
            m.count, m.mean, m.m2, m.m3, m.m4
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["error_low", "error_high", "count"])?;
        for (lo, hi, c) in self.histogram(bins) {
            w.write_record([format!("{lo:e}"), format!("{hi:e}"), c.to_string()])?;
        }
        w.flush()
    }
}

/// Shuffles the four-index terms among their positions in `base`, leaving
/// every other term where it is.
pub fn shuffle_four_index(
    sim: &TrotterSimulator,
    base: &TermOrder,
    rng: &mut ChaCha8Rng,
) -> TermOrder {
    let mut seq = base.as_slice().to_vec();
    let slots: Vec<usize> = (0..seq.len())
        .filter(|&i| sim.terms()[seq[i]].class() == TermClass::FourIndex)
        .collect();
    let mut picked: Vec<usize> = slots.iter().map(|&i| seq[i]).collect();
    picked.shuffle(rng);
    for (&slot, term) in slots.iter().zip(picked) {
        seq[slot] = term;
    }
    TermOrder::from_sequence(seq).expect("a permutation of a permutation")
}

/// Ground-energy error of the second-order product over random
/// four-index orderings. Sample `k` draws its ordering from ChaCha8
/// stream `k` of `seed`.
pub fn randomized_order_experiment(
    sim: &TrotterSimulator,
    base: &TermOrder,
    n_samples: usize,
    dt: f64,
    seed: u64,
) -> Result<OrderExperiment, OracleError> {
    if n_samples == 0 {
        return Err(OracleError::NoSamples);
    }
    let errors = (0..n_samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let order = shuffle_four_index(sim, base, &mut rng);
            sim.measured_energy_error(&order, dt, ProductFormula::Second)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let moments = SampleMoments::new(&errors);
    Ok(OrderExperiment {
        dt,
        seed,
        errors,
        moments,
    })
}
