//! Trotter-Suzuki error analysis for second-quantized molecular Hamiltonians.
//!
//! The crate covers:
//! - [`hamiltonian`] and [`terms`]: the Hamiltonian model, its canonical
//!   Hermitian terms and the interleaved term order;
//! - [`ingest`]: FCIDUMP parsing, random artificial-molecule ensembles and a
//!   versioned JSON format;
//! - [`bounds`]: commutator-counting error bounds and their Monte-Carlo
//!   estimator;
//! - [`sos`]: the sum-of-squares rewriting and free-fermion algebra;
//! - [`coalescing`]: importance-driven multi-resolution schedules;
//! - [`oracle`]: exact small-N simulation used to check everything else.

pub mod bounds;
pub mod coalescing;
pub mod hamiltonian;
pub mod terms;

pub use hamiltonian::{
    sum_abs_coefficients, symmetrize_two_body, HamiltonianError, Monomial, Quartet,
    SpinOrbitalHamiltonian, TwoBody,
};
pub use terms::{
    enumerate_terms, interleaved_order, term_norm, terms_commute, Term, TermClass, TermOrder,
};
pub mod ingest;
pub mod oracle;
pub mod scaling;
pub mod sos;

#[cfg(test)]
mod testing;
