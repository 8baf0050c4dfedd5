use chemtrotter::bounds::{triangle_bound_exact, CommutationStructure};
use chemtrotter::oracle::{jw_build_hamiltonian, jw_build_quadratic, FockBasis};
use chemtrotter::sos::{
    build_sos, ff_norm, serialize_sos, sos_bound_mc, FreeFermionOp, SosDecomposition,
};
use chemtrotter::{enumerate_terms, SpinOrbitalHamiltonian};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::json;

use crate::args::SosArgs;
use crate::error::{CliError, CliResult};
use crate::output::Run;
use crate::source;

use super::{report_row, reports_text, sampling, HamiltonianSummary, REPORT_COLUMNS};

/// Largest register rebuilt densely by `--verify`.
pub const VERIFY_MAX_MODES: usize = 12;

/// `‖rebuild − H‖_F / ‖H‖_F` over the full Fock space.
fn reconstruction_residual(h: &SpinOrbitalHamiltonian, d: &SosDecomposition) -> CliResult<f64> {
    let n = h.n_orbitals();
    if n > VERIFY_MAX_MODES {
        return Err(CliError::input(format!(
            "--verify rebuilds a 2^{n} dimensional matrix; it is limited to {VERIFY_MAX_MODES} spin orbitals"
        )));
    }
    let basis = FockBasis::full(n)?;
    let dense = |g: &FreeFermionOp| -> CliResult<DMatrix<Complex64>> {
        Ok(jw_build_quadratic(g.coefficients(), &basis)?.into_matrix())
    };
    let dim = basis.dim();
    let mut m = dense(&d.free_part)?
        + DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(d.scalar_offset, 0.0);
    for sq in &d.squares {
        let g = dense(&sq.generator)?;
        m -= &g * &g * Complex64::new(sq.sign, 0.0);
    }
    let target = jw_build_hamiltonian(h, &basis)?.into_matrix();
    let scale = target.norm();
    let diff = (m - &target).norm();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

pub fn run(run: &mut Run, a: &SosArgs) -> CliResult<()> {
    let h = source::load(run, &a.source)?;
    let terms = enumerate_terms(&h);
    let structure = CommutationStructure::new(&terms);
    let standard = triangle_bound_exact(&terms, &structure).with_target(a.target_error)?;
    let d = build_sos(&h);
    let sos = if d.squares.is_empty() {
        None
    } else {
        Some(sos_bound_mc(&d, sampling(&a.sampling))?.with_target(a.target_error)?)
    };
    let residual = if a.verify {
        Some(reconstruction_residual(&h, &d)?)
    } else {
        None
    };
    let ratio = sos
        .as_ref()
        .filter(|_| standard.prefactor > 0.0)
        .map(|s| s.prefactor / standard.prefactor);
    let summary = HamiltonianSummary::new(&h, &terms);
    run.write_json(
        "sos_report.json",
        &json!({
            "hamiltonian": summary,
            "squares": d.squares.len(),
            "square_limit": 2 * h.n_orbitals() * h.n_orbitals(),
            "scalar_offset": d.scalar_offset,
            "free_part_norm": ff_norm(&d.free_part),
            "reconstruction_residual": residual,
            "standard": standard,
            "sos": sos,
            "prefactor_ratio": ratio,
        }),
    )?;

    let mut header = format!(
        "{} spin orbitals, {} squares",
        h.n_orbitals(),
        d.squares.len()
    );
    if let Some(r) = residual {
        header.push_str(&format!(", reconstruction residual {r:.3e}"));
    }
    if let Some(r) = ratio {
        header.push_str(&format!(", SoS/standard prefactor {r:.4}"));
    }
    if sos.is_none() {
        header.push_str("; no squares, so the splitting has nothing to bound");
    }
    let listed: Vec<_> = std::iter::once(&standard).chain(sos.as_ref()).collect();
    run.write_text("sos_report.txt", &reports_text(&header, &listed))?;
    run.write_csv(
        "sos_comparison.csv",
        &REPORT_COLUMNS,
        listed.iter().map(|r| report_row(r)),
    )?;
    if a.save_decomposition {
        run.write_text("sos_decomposition.json", &serialize_sos(&d))?;
    }
    Ok(())
}
