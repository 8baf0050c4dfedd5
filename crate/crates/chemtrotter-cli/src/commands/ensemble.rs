use std::path::Path;

use chemtrotter::enumerate_terms;
use chemtrotter::ingest::serialize;
use serde_json::json;

use crate::args::EnsembleArgs;
use crate::error::{CliError, CliResult};
use crate::output::Run;
use crate::source;

use super::HamiltonianSummary;

pub fn run(run: &mut Run, a: &EnsembleArgs) -> CliResult<()> {
    if Path::new(&a.file).components().count() != 1 {
        return Err(CliError::input(format!(
            "--file must be a plain file name, got {}",
            a.file
        )));
    }
    let h = source::load(run, &a.source)?;
    run.write_text(&a.file, &serialize(&h))?;
    run.write_json(
        "ensemble_summary.json",
        &json!({
            "file": a.file,
            "fraction": a.source.ensemble.map(|_| a.source.fraction),
            "seed": a.source.ensemble.map(|_| a.source.ensemble_seed),
            "hamiltonian": HamiltonianSummary::new(&h, &enumerate_terms(&h)),
        }),
    )
}
