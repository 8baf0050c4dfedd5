//! Sum-of-squares decomposition and free-fermion algebra against dense
//! Jordan–Wigner matrices.

mod common;

use chemtrotter::ingest::{generate_ensemble, EnsembleSpec};
use chemtrotter::oracle::{jw_build_hamiltonian, jw_build_quadratic, FockBasis};
use chemtrotter::sos::{
    build_sos, deserialize_sos, ff_commutator, ff_diagonalize, ff_norm, givens_decompose,
    serialize_sos, FreeFermionOp, SosDecomposition,
};
use common::random_hamiltonian;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type CMatrix = DMatrix<Complex64>;

fn dense(op: &FreeFermionOp, basis: &FockBasis) -> CMatrix {
    jw_build_quadratic(op.coefficients(), basis)
        .unwrap()
        .into_matrix()
}

fn norm(m: &CMatrix) -> f64 {
    m.clone().symmetric_eigenvalues().amax()
}

fn rebuild(d: &SosDecomposition, basis: &FockBasis) -> CMatrix {
    let dim = basis.dim();
    let mut m = dense(&d.free_part, basis)
        + CMatrix::identity(dim, dim) * Complex64::new(d.scalar_offset, 0.0);
    for s in &d.squares {
        let g = dense(&s.generator, basis);
        m -= &g * &g * Complex64::new(s.sign, 0.0);
    }
    m
}

fn random_op(n: usize, seed: u64) -> FreeFermionOp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    FreeFermionOp::new((&m + m.adjoint()) * Complex64::new(0.5, 0.0)).unwrap()
}

#[test]
fn decomposition_rebuilds_the_hamiltonian() {
    let full6 = generate_ensemble(&EnsembleSpec::full(6, 3).unwrap());
    for h in [
        full6,
        random_hamiltonian(5, 1.0, 4),
        random_hamiltonian(6, 0.2, 5),
    ] {
        let n = h.n_orbitals();
        let basis = FockBasis::full(n).unwrap();
        let d = build_sos(&h);
        assert!(d.squares.len() <= 2 * n * n);
        let target = jw_build_hamiltonian(&h, &basis).unwrap().into_matrix();
        let err = (rebuild(&d, &basis) - &target).norm() / target.norm();
        assert!(err < 1e-10, "N={n}: relative error {err:e}");
    }
}

#[test]
fn free_fermion_norm_and_commutator_match_dense() {
    let basis = FockBasis::full(4).unwrap();
    for seed in 0..6 {
        let (a, b) = (random_op(4, seed), random_op(4, seed + 100));
        let (da, db) = (dense(&a, &basis), dense(&b, &basis));
        assert!((ff_norm(&a) - norm(&da)).abs() < 1e-12 * norm(&da).max(1.0));
        let c = dense(&ff_commutator(&a, &b).unwrap(), &basis);
        let expected = (&da * &db - &db * &da) * Complex64::i();
        assert!((c - expected).camax() < 1e-12);
    }
}

#[test]
fn square_commutator_inequality_and_tightness() {
    for (n, seed) in [(4, 7), (6, 8)] {
        let basis = FockBasis::full(n).unwrap();
        let d = build_sos(&random_hamiltonian(n, 1.0, seed));
        let gens: Vec<&FreeFermionOp> = d.squares.iter().map(|s| &s.generator).take(8).collect();
        let mats: Vec<CMatrix> = gens.iter().map(|g| dense(g, &basis)).collect();
        let mut checked = 0;
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let comm = ff_norm(&ff_commutator(gens[i], gens[j]).unwrap());
                let (a2, b2) = (&mats[i] * &mats[i], &mats[j] * &mats[j]);
                let lhs = norm(&((&a2 * &b2 - &b2 * &a2) * Complex64::i()));
                let (na, nb) = (ff_norm(gens[i]), ff_norm(gens[j]));
                assert!(
                    lhs <= 4.0 * na * nb * comm * (1.0 + 1e-10) + 1e-12,
                    "pair ({i},{j}): {lhs} > {}",
                    4.0 * na * nb * comm
                );
                if comm > 1e-12 {
                    assert!(2.0 * na * nb / comm >= 1.0 - 1e-12);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn serialized_decomposition_is_operator_equal() {
    let h = random_hamiltonian(4, 1.0, 9);
    let basis = FockBasis::full(4).unwrap();
    let d = build_sos(&h);
    let back = deserialize_sos(&serialize_sos(&d)).unwrap();
    assert!((rebuild(&back, &basis) - rebuild(&d, &basis)).camax() < 1e-14);
}

#[test]
fn basis_change_of_real_generator_factors_into_rotations() {
    let d = build_sos(&random_hamiltonian(6, 1.0, 10));
    let real = d
        .squares
        .iter()
        .find(|s| s.generator.is_real())
        .expect("a symmetric-sector square");
    let w = ff_diagonalize(&real.generator).real_basis_change().unwrap();
    let g = givens_decompose(&w).unwrap();
    assert!(g.rotation_count() <= 15);
    assert!((g.reconstruct() - &w).amax() < 1e-10);
    let free = ff_diagonalize(&d.free_part).real_basis_change().unwrap();
    assert!((givens_decompose(&free).unwrap().reconstruct() - free).amax() < 1e-10);
}
