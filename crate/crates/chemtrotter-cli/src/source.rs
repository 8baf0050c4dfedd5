use std::path::Path;

use chemtrotter::ingest::{
    deserialize, generate_ensemble, parse_fcidump, to_spin_orbital, EnsembleSpec,
};
use chemtrotter::SpinOrbitalHamiltonian;

use crate::args::SourceArgs;
use crate::error::{CliError, CliResult};
use crate::output::Run;

/// Reads a `.json` Hamiltonian or an FCIDUMP file.
pub fn load_file(run: &mut Run, path: &Path) -> CliResult<SpinOrbitalHamiltonian> {
    let text = run.read_input(path)?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        Ok(deserialize(&text)?)
    } else {
        Ok(to_spin_orbital(&parse_fcidump(&text)?)?)
    }
}

pub fn generate(n: usize, fraction: f64, seed: u64) -> CliResult<SpinOrbitalHamiltonian> {
    Ok(generate_ensemble(&EnsembleSpec::new(n, fraction, seed)?))
}

pub fn load(run: &mut Run, source: &SourceArgs) -> CliResult<SpinOrbitalHamiltonian> {
    let h = match (&source.input, source.ensemble) {
        (Some(path), None) => load_file(run, path)?,
        (None, Some(n)) => generate(n, source.fraction, source.ensemble_seed)?,
        (None, None) => return Err(CliError::input("give either --input PATH or --ensemble N")),
        (Some(_), Some(_)) => {
            return Err(CliError::input(
                "--input and --ensemble are mutually exclusive",
            ))
        }
    };
    match source.nelec {
        Some(k) => Ok(h.with_n_electrons(k)?),
        None => Ok(h),
    }
}
