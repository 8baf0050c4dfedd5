use std::collections::{BTreeMap, BTreeSet};

use chemtrotter::bounds::{BoundReport, CommutationStructure};
use chemtrotter::scaling::{fit_power_law, PowerLawFit};
use chemtrotter::{enumerate_terms, SpinOrbitalHamiltonian};
use serde::Serialize;
use serde_json::json;

use crate::args::{ScalingArgs, ScalingMethod};
use crate::error::{CliError, CliResult};
use crate::output::{num, opt, Run};
use crate::source;

use super::{evaluate, HamiltonianSummary};

#[derive(Serialize)]
struct SystemRow {
    source: String,
    summary: HamiltonianSummary,
    reports: Vec<(ScalingMethod, BoundReport)>,
}

#[derive(Serialize)]
struct MethodFit {
    prefactor: Option<PowerLawFit>,
    steps: Option<PowerLawFit>,
}

fn fit_against_size(rows: &[SystemRow], value: impl Fn(&SystemRow) -> f64) -> Option<PowerLawFit> {
    let xs: Vec<f64> = rows.iter().map(|r| r.summary.n_orbitals as f64).collect();
    let ys: Vec<f64> = rows.iter().map(value).collect();
    fit_power_law(&xs, &ys)
}

pub fn run(run: &mut Run, a: &ScalingArgs) -> CliResult<()> {
    let systems: Vec<(String, SpinOrbitalHamiltonian)> =
        match (a.sizes.is_empty(), a.inputs.is_empty()) {
            (false, true) => a
                .sizes
                .iter()
                .map(|&n| {
                    Ok((
                        format!("ensemble:{n}"),
                        source::generate(n, a.fraction, a.ensemble_seed)?,
                    ))
                })
                .collect::<CliResult<_>>()?,
            (true, false) => a
                .inputs
                .iter()
                .map(|p| Ok((p.display().to_string(), source::load_file(run, p)?)))
                .collect::<CliResult<_>>()?,
            _ => return Err(CliError::input("give either --sizes or --inputs")),
        };
    let distinct: BTreeSet<usize> = systems.iter().map(|(_, h)| h.n_orbitals()).collect();
    if distinct.len() < 3 {
        return Err(CliError::input(format!(
            "a scaling fit needs at least 3 distinct sizes, got {}",
            distinct.len()
        )));
    }
    let mut methods: Vec<ScalingMethod> = Vec::new();
    for &m in &a.method {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }

    let mut rows = Vec::new();
    for (label, h) in systems {
        let terms = enumerate_terms(&h);
        let structure = CommutationStructure::new(&terms);
        let reports = methods
            .iter()
            .map(|&m| {
                Ok((
                    m,
                    evaluate(m, &terms, &structure, &a.sampling, a.target_error)?,
                ))
            })
            .collect::<CliResult<Vec<_>>>()?;
        rows.push(SystemRow {
            source: label,
            summary: HamiltonianSummary::new(&h, &terms),
            reports,
        });
    }

    let mut cells = Vec::new();
    for r in &rows {
        for (m, rep) in &r.reports {
            cells.push(vec![
                r.summary.n_orbitals.to_string(),
                r.source.clone(),
                r.summary.n_terms.to_string(),
                num(r.summary.sum_abs_coefficients),
                opt(r.summary.rms_term_norm),
                m.name().to_string(),
                num(rep.prefactor),
                num(rep.energy_prefactor),
                num(rep.steps_for_unit_accuracy),
                opt(rep.statistical_error),
            ]);
        }
    }
    run.write_csv(
        "scaling.csv",
        &[
            "n_orbitals",
            "source",
            "n_terms",
            "sum_abs_coefficients",
            "rms_term_norm",
            "method",
            "prefactor",
            "energy_prefactor",
            "steps",
            "statistical_error",
        ],
        cells,
    )?;

    let mut fits = BTreeMap::new();
    for (k, m) in methods.iter().enumerate() {
        fits.insert(
            m.name(),
            MethodFit {
                prefactor: fit_against_size(&rows, |r| r.reports[k].1.prefactor),
                steps: fit_against_size(&rows, |r| r.reports[k].1.steps_for_unit_accuracy),
            },
        );
    }
    run.write_json(
        "scaling_report.json",
        &json!({
            "target_error": a.target_error,
            "fits": fits,
            "sum_abs_coefficients_fit": fit_against_size(&rows, |r| r.summary.sum_abs_coefficients),
            "terms_fit": fit_against_size(&rows, |r| r.summary.n_terms as f64),
            "systems": rows,
        }),
    )
}
