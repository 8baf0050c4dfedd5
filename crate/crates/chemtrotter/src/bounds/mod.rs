//! Commutator-counting bounds on the second-order Trotter error.
//!
//! Every bound here yields a prefactor `Γ` with `δ ≤ Γ Δt³` for one step and
//! `ΔE ≤ Γ Δt²` for the ground-state energy. Only the nested-commutator part
//! `Σ_α Σ_{β,β'} ‖[[H_α, H_β], H_β']‖` is bounded; the smaller first-order
//! commutator term of the Baker–Campbell–Hausdorff expansion is dropped, as is
//! standard for these estimates.

mod cauchy_schwarz;
mod structure;
mod triangle;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::terms::Term;

pub use cauchy_schwarz::{
    cauchy_schwarz_bound, cauchy_schwarz_bound_with, nonzero_triple_count, MAX_BITSET_TERMS,
};
pub use structure::{brute_force_neighbor_counts, CommutationStructure};
pub use triangle::{
    merge_moments, triangle_bound_exact, triangle_bound_mc, Moments, Sampling, CHUNK_SIZE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("the term list is empty")]
    EmptyTermList,
    #[error("target error must be positive, got {0}")]
    NonpositiveTarget(f64),
    #[error("at least one sample is required")]
    NoSamples,
    #[error("{terms} terms exceed the pair-bitset capacity of {max}")]
    TooManyTerms { terms: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMethod {
    ExhaustiveTriangle,
    MonteCarlo,
    CauchySchwarz,
    SumOfSquaresMC,
}

impl BoundMethod {
    pub fn is_monte_carlo(self) -> bool {
        matches!(self, Self::MonteCarlo | Self::SumOfSquaresMC)
    }
}

/// Result of one bound evaluation.
///
/// `steps_for_unit_accuracy` is `√(prefactor / target_error)`; it is computed
/// for `target_error = 1` Hartree on construction and updated by
/// [`with_target`](Self::with_target).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub prefactor: f64,
    pub energy_prefactor: f64,
    pub target_error: f64,
    pub steps_for_unit_accuracy: f64,
    /// Relative standard error; `None` for deterministic methods. A single
    /// sample leaves it undefined (NaN).
    pub statistical_error: Option<f64>,
    /// Number of sampled triples, or the exact triple count when every triple
    /// was visited.
    pub samples: Option<u64>,
}

impl BoundReport {
    pub(crate) fn deterministic(method: BoundMethod, prefactor: f64) -> Self {
        Self {
            method,
            prefactor,
            energy_prefactor: prefactor,
            target_error: 1.0,
            steps_for_unit_accuracy: prefactor.sqrt(),
            statistical_error: None,
            samples: None,
        }
    }

    pub(crate) fn sampled(
        method: BoundMethod,
        prefactor: f64,
        relative_error: f64,
        samples: u64,
    ) -> Self {
        Self {
            statistical_error: Some(relative_error),
            samples: Some(samples),
            ..Self::deterministic(method, prefactor)
        }
    }

    pub fn with_target(mut self, target_error: f64) -> Result<Self, BoundError> {
        self.steps_for_unit_accuracy = steps_for_accuracy(self.prefactor, target_error)?;
        self.target_error = target_error;
        Ok(self)
    }

    /// Multi-line `key: value` rendering used by the command-line reports.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |x| format!("{x:e}"));
        format!(
            "method: {:?}\nprefactor: {:e}\nenergy_prefactor: {:e}\ntarget_error: {:e}\nsteps: {:e}\nstatistical_error: {}\nsamples: {}\n",
            self.method,
            self.prefactor,
            self.energy_prefactor,
            self.target_error,
            self.steps_for_unit_accuracy,
            opt(self.statistical_error),
            self.samples.map_or_else(|| "none".to_string(), |s| s.to_string()),
        )
    }
}

/// Trotter steps per unit time needed for an energy error of `target_error`.
pub fn steps_for_accuracy(prefactor: f64, target_error: f64) -> Result<f64, BoundError> {
    if target_error.is_nan() || target_error <= 0.0 {
        return Err(BoundError::NonpositiveTarget(target_error));
    }
    Ok((prefactor / target_error).sqrt())
}

/// `√(Σ‖H_α‖² / m)`.
pub fn rms_term_norm(terms: &[Term]) -> Result<f64, BoundError> {
    if terms.is_empty() {
        return Err(BoundError::EmptyTermList);
    }
    Ok((terms.iter().map(|t| t.norm() * t.norm()).sum::<f64>() / terms.len() as f64).sqrt())
}
