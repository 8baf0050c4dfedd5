use chemtrotter::bounds::CommutationStructure;
use chemtrotter::enumerate_terms;
use serde_json::json;

use crate::args::{BoundArgs, BoundChoice, ScalingMethod};
use crate::error::CliResult;
use crate::output::Run;
use crate::source;

use super::{evaluate, report_row, reports_text, HamiltonianSummary, REPORT_COLUMNS};

pub fn run(run: &mut Run, a: &BoundArgs) -> CliResult<()> {
    let h = source::load(run, &a.source)?;
    let terms = enumerate_terms(&h);
    let structure = CommutationStructure::new(&terms);
    let methods = match a.method {
        BoundChoice::Triangle => vec![ScalingMethod::Triangle],
        BoundChoice::Mc => vec![ScalingMethod::Mc],
        BoundChoice::Cs => vec![ScalingMethod::Cs],
        BoundChoice::All => vec![
            ScalingMethod::Triangle,
            ScalingMethod::Mc,
            ScalingMethod::Cs,
        ],
    };
    let reports = methods
        .into_iter()
        .map(|m| evaluate(m, &terms, &structure, &a.sampling, a.target_error))
        .collect::<CliResult<Vec<_>>>()?;
    let summary = HamiltonianSummary::new(&h, &terms);
    run.write_json(
        "bound_report.json",
        &json!({
            "hamiltonian": summary,
            "neighbor_k_max": structure.k_max(),
            "triple_count": structure.triple_count(),
            "target_error": a.target_error,
            "reports": reports,
        }),
    )?;
    let header = format!(
        "{} spin orbitals, {} terms, target error {:e} Ha",
        summary.n_orbitals, summary.n_terms, a.target_error
    );
    run.write_text(
        "bound_report.txt",
        &reports_text(&header, &reports.iter().collect::<Vec<_>>()),
    )?;
    run.write_csv(
        "bound_report.csv",
        &REPORT_COLUMNS,
        reports.iter().map(report_row),
    )
}
