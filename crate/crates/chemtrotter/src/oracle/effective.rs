use nalgebra::DMatrix;

use crate::terms::TermOrder;

use super::dense::DenseOperator;
use super::trotter::TrotterSimulator;

/// Leading correction of the second-order product, without the `Δt²/12`:
/// `Σ_β [S_β + H_β/2, [H_β, S_β]]` with `S_β` the sum of the terms placed
/// before `β` in `order` (the first position being innermost).
pub fn bch_correction(sim: &TrotterSimulator, order: &TermOrder) -> DMatrix<f64> {
    let d = sim.basis().dim();
    let mut before = DMatrix::<f64>::zeros(d, d);
    let mut total = DMatrix::<f64>::zeros(d, d);
    for &b in order.as_slice() {
        let hb = sim.term_matrix(b);
        let inner = &hb * &before - &before * &hb;
        let outer = &before + &hb * 0.5;
        total += &outer * &inner - &inner * &outer;
        before += hb;
    }
    total
}

/// `H + (Δt²/12) Σ_β [S_β + H_β/2, [H_β, S_β]]`.
pub fn bch_effective_hamiltonian(
    sim: &TrotterSimulator,
    order: &TermOrder,
    dt: f64,
) -> DenseOperator {
    let m = sim.hamiltonian() + bch_correction(sim, order) * (dt * dt / 12.0);
    DenseOperator::from_real(sim.basis().clone(), &m)
}

/// First-order perturbative energy shift `⟨Ψ₀|H_eff − H|Ψ₀⟩` of the
/// second-order product.
pub fn perturbative_energy_error(sim: &TrotterSimulator, order: &TermOrder, dt: f64) -> f64 {
    let psi = sim.ground_vector();
    let d = sim.basis().dim();
    let mut before = DMatrix::<f64>::zeros(d, d);
    let mut acc = 0.0;
    for &b in order.as_slice() {
        let hb = sim.term_matrix(b);
        // ⟨ψ|[A, C]|ψ⟩ = 2 (Aψ)·(Cψ) for symmetric A and antisymmetric C.
        let c_psi = &hb * (&before * psi) - &before * (&hb * psi);
        let a_psi = &before * psi + (&hb * psi) * 0.5;
        acc += 2.0 * a_psi.dot(&c_psi);
        before += hb;
    }
    acc * dt * dt / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::trotter::ProductFormula;
    use crate::terms::{enumerate_terms, interleaved_order, Term};
    use crate::testing::random_hamiltonian;

    #[test]
    fn commuting_terms_have_no_correction() {
        let terms = vec![
            Term::one_body_diag(0, 1.0),
            Term::number_number(0, 1, 0.5),
            Term::one_body_diag(2, -0.3),
        ];
        let sim = TrotterSimulator::new(&terms, 3, None).unwrap();
        assert_eq!(bch_correction(&sim, &TermOrder::identity(3)).amax(), 0.0);
    }

    #[test]
    fn two_term_split_matches_the_logarithm() {
        let terms = vec![
            Term::one_body_off_diag(0, 1, 0.8),
            Term::number_number(0, 2, 1.1),
            Term::one_body_diag(1, 0.4),
        ];
        let sim = TrotterSimulator::new(&terms, 3, Some(2)).unwrap();
        let order = TermOrder::identity(3);
        let residual = |dt: f64| {
            let u = sim.trotter_unitary(&order, dt, ProductFormula::Second);
            let log = sim.effective_hamiltonian(&u, dt).unwrap();
            (log.matrix() - bch_effective_hamiltonian(&sim, &order, dt).matrix()).camax()
        };
        let (r1, r2) = (residual(0.1), residual(0.05));
        assert!(r1 < 1e-3 && r2 < r1 / 7.0, "{r1:e} {r2:e}");
    }

    #[test]
    fn vector_and_matrix_routes_agree() {
        let terms = enumerate_terms(&random_hamiltonian(5, 1.0, 11));
        let sim = TrotterSimulator::new(&terms, 5, None).unwrap();
        let order = interleaved_order(&terms);
        let dt = 0.05;
        let psi = sim.ground_vector();
        let full = bch_effective_hamiltonian(&sim, &order, dt).real_part() - sim.hamiltonian();
        let direct = psi.dot(&(full * psi));
        let fast = perturbative_energy_error(&sim, &order, dt);
        assert!(
            (direct - fast).abs() < 1e-12 * direct.abs().max(1e-6),
            "{direct} vs {fast}"
        );
    }
}
