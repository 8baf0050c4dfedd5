use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coalescing::CoalescingSchedule;
use crate::hamiltonian::Monomial;
use crate::terms::{Term, TermOrder};

use super::dense::{real_matrix, DenseOperator};
use super::fock::{apply_ladder, FockBasis};
use super::OracleError;

/// Largest centered eigenphase `w·T` (with `w` the half-width of the exact
/// spectrum) for which the matrix logarithm is taken.
pub const PHASE_LIMIT: f64 = 0.9 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductFormula {
    /// `U_m(Δt) ⋯ U_1(Δt)`, the first position applied first.
    First,
    /// `U_m(Δt/2) ⋯ U_2(Δt/2) U_1(Δt) U_2(Δt/2) ⋯ U_m(Δt/2)`, the first
    /// position in the middle.
    Second,
}

/// Exact exponential of one term, stored as its invariant blocks.
#[derive(Debug, Clone)]
struct TermGate {
    /// Basis states the term maps to a multiple of themselves.
    phases: Vec<(usize, f64)>,
    blocks: Vec<Block>,
}

#[derive(Debug, Clone)]
struct Block {
    rows: Vec<usize>,
    vectors: DMatrix<f64>,
    values: DVector<f64>,
}

impl Block {
    /// `V e^{−iλt} Vᵀ`, complex symmetric.
    fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        let k = self.rows.len();
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        let mut scaled = v.clone();
        for j in 0..k {
            let phase = Complex64::from_polar(1.0, -self.values[j] * t);
            for i in 0..k {
                scaled[(i, j)] = v[(i, j)] * phase;
            }
        }
        scaled * v.transpose()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl TermGate {
    fn new(monomials: &[Monomial], basis: &FockBasis) -> Self {
        let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (col, &state) in basis.states().iter().enumerate() {
            for m in monomials {
                if let Some((image, sign)) = apply_ladder(m, state) {
                    if let Some(row) = basis.index_of(image) {
                        *entries.entry((row, col)).or_default() += m.coefficient * sign;
                    }
                }
            }
        }
        entries.retain(|_, v| *v != 0.0);
        let d = basis.dim();
        let mut parent: Vec<usize> = (0..d).collect();
        let mut touched = vec![false; d];
        for &(r, c) in entries.keys() {
            touched[r] = true;
            touched[c] = true;
            let (a, b) = (find(&mut parent, r), find(&mut parent, c));
            parent[a.max(b)] = a.min(b);
        }
        let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in (0..d).filter(|&i| touched[i]) {
            let root = find(&mut parent, i);
            components.entry(root).or_default().push(i);
        }
        let mut phases = Vec::new();
        let mut blocks = Vec::new();
        for rows in components.into_values() {
            if rows.len() == 1 {
                phases.push((rows[0], entries[&(rows[0], rows[0])]));
                continue;
            }
            let local = DMatrix::from_fn(rows.len(), rows.len(), |i, j| {
                entries.get(&(rows[i], rows[j])).copied().unwrap_or(0.0)
            });
            let eig = SymmetricEigen::new(local);
            blocks.push(Block {
                rows,
                vectors: eig.eigenvectors,
                values: eig.eigenvalues,
            });
        }
        Self { phases, blocks }
    }

    /// `W ← W G(t)`, where `G(t) = exp(−i h t)` is complex symmetric.
    fn apply_right(&self, w: &mut DMatrix<Complex64>, t: f64) {
        for &(i, lambda) in &self.phases {
            let phase = Complex64::from_polar(1.0, -lambda * t);
            for z in w.column_mut(i).iter_mut() {
                *z *= phase;
            }
        }
        for b in &self.blocks {
            let g = b.propagator(t);
            let gathered = w.select_columns(b.rows.iter());
            let mixed = gathered * g;
            for (k, &col) in b.rows.iter().enumerate() {
                w.set_column(col, &mixed.column(k));
            }
        }
    }
}

/// Exact small-system simulator for product formulas over a fixed term list,
/// restricted to one particle-number sector.
#[derive(Debug, Clone)]
pub struct TrotterSimulator {
    basis: FockBasis,
    terms: Vec<Term>,
    gates: Vec<TermGate>,
    hamiltonian: DMatrix<f64>,
    ground_energy: f64,
    ground_vector: DVector<f64>,
    spectrum: (f64, f64),
}

/// Basis, matrix, ground energy, ground vector and spectral range of a sector.
type SectorCandidate = (FockBasis, DMatrix<f64>, f64, DVector<f64>, (f64, f64));

fn sector_spectrum(
    monomials: &[Monomial],
    basis: &FockBasis,
) -> (DMatrix<f64>, f64, DVector<f64>, (f64, f64)) {
    let h = real_matrix(monomials, basis);
    let eig = SymmetricEigen::new(h.clone());
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, 0), |(lo, hi), (i, &e)| {
            (
                if e < eig.eigenvalues[lo] { i } else { lo },
                if e > eig.eigenvalues[hi] { i } else { hi },
            )
        });
    let (emin, emax) = (eig.eigenvalues[lo], eig.eigenvalues[hi]);
    (
        h,
        emin,
        eig.eigenvectors.column(lo).into_owned(),
        (emin, emax),
    )
}

impl TrotterSimulator {
    /// Builds the simulator in particle sector `sector`, or in the sector
    /// holding the global ground state when `None`.
    pub fn new(terms: &[Term], n_modes: usize, sector: Option<usize>) -> Result<Self, OracleError> {
        let needed = terms
            .iter()
            .flat_map(|t| t.indices().iter().copied())
            .max()
            .map_or(0, |p| p + 1);
        if needed > n_modes {
            return Err(OracleError::ModeMismatch {
                needed,
                available: n_modes,
            });
        }
        let monomials: Vec<Monomial> = terms.iter().flat_map(Term::monomials).collect();
        let candidates: Vec<usize> = match sector {
            Some(k) => vec![k],
            None => (0..=n_modes).collect(),
        };
        let mut best: Option<SectorCandidate> = None;
        for k in candidates {
            let basis = FockBasis::sector(n_modes, k)?;
            let (h, e, v, spec) = sector_spectrum(&monomials, &basis);
            if best.as_ref().map_or(true, |b| e < b.2) {
                best = Some((basis, h, e, v, spec));
            }
        }
        let (basis, hamiltonian, ground_energy, ground_vector, spectrum) =
            best.expect("at least one sector");
        let gates = terms
            .iter()
            .map(|t| TermGate::new(&t.monomials(), &basis))
            .collect();
        Ok(Self {
            basis,
            terms: terms.to_vec(),
            gates,
            hamiltonian,
            ground_energy,
            ground_vector,
            spectrum,
        })
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn hamiltonian(&self) -> &DMatrix<f64> {
        &self.hamiltonian
    }

    pub fn ground_energy(&self) -> f64 {
        self.ground_energy
    }

    pub fn ground_vector(&self) -> &DVector<f64> {
        &self.ground_vector
    }

    /// Lowest and highest eigenvalue in the sector.
    pub fn spectrum(&self) -> (f64, f64) {
        self.spectrum
    }

    pub fn term_matrix(&self, k: usize) -> DMatrix<f64> {
        real_matrix(&self.terms[k].monomials(), &self.basis)
    }

    /// Product of exact term exponentials; `steps` lists `(term, time)` in
    /// the order they act on a state.
    pub fn product(&self, steps: &[(usize, f64)]) -> DenseOperator {
        let d = self.basis.dim();
        let mut w = DMatrix::<Complex64>::identity(d, d);
        for &(k, t) in steps {
            self.gates[k].apply_right(&mut w, t);
        }
        DenseOperator::new(self.basis.clone(), w.transpose())
    }

    pub fn trotter_unitary(
        &self,
        order: &TermOrder,
        dt: f64,
        formula: ProductFormula,
    ) -> DenseOperator {
        self.product(&formula_steps(order, dt, formula))
    }

    /// One full cycle of a coalesced first-order schedule.
    pub fn schedule_unitary(&self, schedule: &CoalescingSchedule) -> DenseOperator {
        self.product(&schedule_steps(schedule))
    }

    /// `exp(−iHt)` in the sector.
    pub fn exact_unitary(&self, t: f64) -> DenseOperator {
        let eig = SymmetricEigen::new(self.hamiltonian.clone());
        let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let phases =
            DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
        DenseOperator::new(self.basis.clone(), &v * phases * v.adjoint())
    }

    fn branch_check(&self, t: f64) -> Result<f64, OracleError> {
        let (lo, hi) = self.spectrum;
        let phase = 0.5 * (hi - lo) * t.abs();
        if phase >= PHASE_LIMIT {
            return Err(OracleError::BranchAmbiguity {
                phase,
                limit: PHASE_LIMIT,
            });
        }
        Ok(0.5 * (hi + lo))
    }

    /// Cayley transform of the spectrum-centered propagator: returns the
    /// center `c` and Hermitian `X` with eigenvalues `tan(φ/2)`.
    fn cayley(&self, u: &DenseOperator, t: f64) -> Result<(f64, DMatrix<Complex64>), OracleError> {
        let c = self.branch_check(t)?;
        let d = self.basis.dim();
        let shifted = u.matrix() * Complex64::from_polar(1.0, c * t);
        let id = DMatrix::<Complex64>::identity(d, d);
        let x =
            (&shifted + &id)
                .lu()
                .solve(&(&shifted - &id))
                .ok_or(OracleError::BranchAmbiguity {
                    phase: PI,
                    limit: PHASE_LIMIT,
                })?
                * Complex64::i();
        Ok((c, (&x + x.adjoint()) * Complex64::new(0.5, 0.0)))
    }

    /// `(i/t) log U` on the branch centered at the exact spectrum.
    pub fn effective_hamiltonian(
        &self,
        u: &DenseOperator,
        t: f64,
    ) -> Result<DenseOperator, OracleError> {
        let (c, x) = self.cayley(u, t)?;
        let eig = SymmetricEigen::new(x);
        let e = eig
            .eigenvalues
            .map(|x| Complex64::new(c + 2.0 * x.atan() / t, 0.0));
        let v = &eig.eigenvectors;
        Ok(DenseOperator::new(
            self.basis.clone(),
            v * DMatrix::from_diagonal(&e) * v.adjoint(),
        ))
    }

    /// Lowest eigenvalue of `(i/t) log U`.
    pub fn effective_ground_energy(&self, u: &DenseOperator, t: f64) -> Result<f64, OracleError> {
        let (c, x) = self.cayley(u, t)?;
        let lowest = x.symmetric_eigenvalues().min();
        Ok(c + 2.0 * lowest.atan() / t)
    }

    /// Signed ground-energy error `E_eff − E_exact` of one product-formula step.
    pub fn measured_energy_error(
        &self,
        order: &TermOrder,
        dt: f64,
        formula: ProductFormula,
    ) -> Result<f64, OracleError> {
        self.branch_check(dt)?;
        let u = self.trotter_unitary(order, dt, formula);
        Ok(self.effective_ground_energy(&u, dt)? - self.ground_energy)
    }

    /// Signed ground-energy error of one coalesced cycle, measured over the
    /// cycle time `K δt`.
    pub fn schedule_energy_error(&self, schedule: &CoalescingSchedule) -> Result<f64, OracleError> {
        let t = schedule.cycle_time();
        self.branch_check(t)?;
        let u = self.schedule_unitary(schedule);
        Ok(self.effective_ground_energy(&u, t)? - self.ground_energy)
    }
}

/// `(term, time)` pairs in the order they act.
pub fn formula_steps(order: &TermOrder, dt: f64, formula: ProductFormula) -> Vec<(usize, f64)> {
    let seq = order.as_slice();
    match formula {
        ProductFormula::First => seq.iter().map(|&k| (k, dt)).collect(),
        ProductFormula::Second => {
            let Some((&inner, outer)) = seq.split_first() else {
                return Vec::new();
            };
            let half = 0.5 * dt;
            let mut steps: Vec<(usize, f64)> = outer.iter().rev().map(|&k| (k, half)).collect();
            steps.push((inner, dt));
            steps.extend(outer.iter().map(|&k| (k, half)));
            steps
        }
    }
}

pub fn schedule_steps(schedule: &CoalescingSchedule) -> Vec<(usize, f64)> {
    schedule
        .sub_steps
        .iter()
        .flatten()
        .map(|e| (e.term, e.multiplier as f64 * schedule.base_step))
        .collect()
}
