use serde::{Deserialize, Serialize};

use super::importance::{Importance, ImportanceEntry, ImportanceTable};

/// Upper cutoff: `log₁₀ C_U = μ + 3σ`.
pub const UPPER_SIGMAS: f64 = 3.0;
/// Lower cutoff: `log₁₀ C_L = μ + 1.2σ`.
pub const LOWER_SIGMAS: f64 = 1.2;
/// Period for front-porch terms that leave the reference state untouched.
pub const FRONT_PORCH_PERIOD: u32 = 16;
/// Periods below the lower cutoff, most important first, with the fraction
/// of sub-cutoff terms each receives (the last takes the remainder).
pub const TAIL_PERIODS: [(u32, f64); 3] = [(16, 0.25), (32, 0.375), (64, 0.375)];

/// Where a term landed relative to the cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `I ≥ C_U`, always executed.
    A,
    /// `C_L ≤ I < C_U`.
    B,
    /// Below `C_L`, period 16.
    C,
    /// Below `C_L`, period 32.
    D,
    /// Below `C_L`, period 64.
    E,
}

impl Region {
    pub fn label(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::C => 'C',
            Self::D => 'D',
            Self::E => 'E',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodAssignment {
    /// One period per term of the original list; `1` for non-four-index terms.
    pub periods: Vec<u32>,
    /// Region of each four-index term, keyed by term position, sorted by it.
    pub regions: Vec<(usize, Region)>,
    pub log_upper_cutoff: Option<f64>,
    pub log_lower_cutoff: Option<f64>,
}

impl PeriodAssignment {
    pub fn region_of(&self, term: usize) -> Option<Region> {
        self.regions
            .binary_search_by_key(&term, |&(t, _)| t)
            .ok()
            .map(|k| self.regions[k].1)
    }
}

fn at_least(log_i: f64, cutoff: f64) -> bool {
    log_i >= cutoff - 1e-12 * cutoff.abs().max(1.0)
}

/// Cutoff-based repetition periods.
///
/// Comparisons are inclusive with a relative tolerance of `1e-12`, so equal
/// importances (zero spread) all land at or above `C_U`. Below `C_L` the
/// terms are ranked by importance; the 16 and 32 buckets get `⌊25%⌋` and
/// `⌊37.5%⌋` of them and equal importances always share the smaller period.
pub fn assign_periods(table: &ImportanceTable) -> PeriodAssignment {
    let cutoffs = table
        .log_mean
        .zip(table.log_std)
        .map(|(mu, sigma)| (mu + UPPER_SIGMAS * sigma, mu + LOWER_SIGMAS * sigma));
    let mut periods = vec![1u32; table.n_terms];
    let mut regions = Vec::with_capacity(table.entries.len());
    let mut tail: Vec<&ImportanceEntry> = Vec::new();
    for e in &table.entries {
        let region = match (e.importance, e.importance.log10(), cutoffs) {
            (Importance::Maximal, _, _) => Some(Region::A),
            (_, Some(l), Some((upper, _))) if at_least(l, upper) => Some(Region::A),
            (_, Some(l), Some((_, lower))) if at_least(l, lower) => Some(Region::B),
            _ => None,
        };
        match region {
            Some(r) => {
                if r == Region::B && e.annihilates_hf {
                    periods[e.term] = FRONT_PORCH_PERIOD;
                }
                regions.push((e.term, r));
            }
            None => tail.push(e),
        }
    }
    // Stable: equal importances stay in term order.
    tail.sort_by(|a, b| {
        b.importance
            .partial_cmp(&a.importance)
            .expect("importances are not NaN")
    });
    let n = tail.len();
    let first = (n as f64 * TAIL_PERIODS[0].1).floor() as usize;
    let second = first + (n as f64 * TAIL_PERIODS[1].1).floor() as usize;
    let mut previous: Option<(Importance, usize)> = None;
    for (rank, e) in tail.iter().enumerate() {
        let mut bucket = if rank < first {
            0
        } else if rank < second {
            1
        } else {
            2
        };
        if let Some((imp, b)) = previous {
            if imp == e.importance {
                bucket = bucket.min(b);
            }
        }
        previous = Some((e.importance, bucket));
        periods[e.term] = TAIL_PERIODS[bucket].0;
        regions.push((e.term, [Region::C, Region::D, Region::E][bucket]));
    }
    regions.sort_unstable_by_key(|&(t, _)| t);
    PeriodAssignment {
        periods,
        regions,
        log_upper_cutoff: cutoffs.map(|c| c.0),
        log_lower_cutoff: cutoffs.map(|c| c.1),
    }
}
