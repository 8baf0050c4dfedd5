//! Exact small-N simulation: Jordan–Wigner matrices, ground states, Trotter
//! products and effective Hamiltonians.

pub mod dense;
pub mod effective;
pub mod experiment;
pub mod fock;
pub mod lanczos;
pub mod trotter;

use thiserror::Error;

pub use dense::{
    ground_state, jw_build_hamiltonian, jw_build_monomials, jw_build_quadratic, jw_build_terms,
    DenseOperator, GroundState,
};
pub use effective::{bch_correction, bch_effective_hamiltonian, perturbative_energy_error};
pub use experiment::{
    randomized_order_experiment, shuffle_four_index, OrderExperiment, SampleMoments,
    WATER_REFERENCE_RATIOS,
};
pub use fock::{FockBasis, MAX_MODES};
pub use lanczos::{
    jw_build_sparse, spectral_norm, spectral_norm_with, tail_norm, SparseOperator,
    LANCZOS_TOLERANCE, MAX_LANCZOS_ITERATIONS,
};
pub use trotter::{formula_steps, schedule_steps, ProductFormula, TrotterSimulator, PHASE_LIMIT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{n_modes} modes exceed the dense-simulation cap of {max}")]
    DimensionCap { n_modes: usize, max: usize },
    #[error("no {particles}-particle sector in {n_modes} modes")]
    InvalidSector { particles: usize, n_modes: usize },
    #[error("operator touches mode {needed} but the basis has {available} modes", needed = needed - 1)]
    ModeMismatch { needed: usize, available: usize },
    #[error("operator is not Hermitian (relative defect {defect:.3e})")]
    NonHermitian { defect: f64 },
    #[error("eigenphase {phase:.3} reaches the limit {limit:.3}; reduce the time step")]
    BranchAmbiguity { phase: f64, limit: f64 },
    #[error("Lanczos iteration did not converge in {iterations} steps")]
    NonConvergence { iterations: usize },
    #[error("at least one sample is required")]
    NoSamples,
}
