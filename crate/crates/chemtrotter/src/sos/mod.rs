//! Sum-of-squares splitting `H = H₀ − Σ η_γ G_γ²` into free-fermion pieces,
//! with the algebra needed to bound its Trotter error exactly per commutator.

mod bound;
mod decompose;
mod free_fermion;
mod givens;
mod serialize;

use thiserror::Error;

pub use bound::sos_bound_mc;
pub use decompose::{build_sos, SosDecomposition, Square, DEGENERACY_THRESHOLD};
pub use free_fermion::{
    ff_commutator, ff_diagonalize, ff_norm, FreeFermionOp, FreeFermionSpectrum,
};
pub use givens::{givens_decompose, GivensDecomposition, GivensRotation};
pub use serialize::{deserialize_sos, serialize_sos, SOS_FORMAT_NAME};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SosError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("coefficient matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not orthogonal (defect {defect:e})")]
    NotOrthogonal { defect: f64 },
    #[error("the decomposition has no squares")]
    EmptyDecomposition,
    #[error("at least one sample is required")]
    NoSamples,
}
