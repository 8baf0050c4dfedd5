mod bound;
mod coalesce;
mod ensemble;
mod oracle;
mod scaling;
mod sos;

use std::collections::BTreeMap;

use chemtrotter::bounds::{
    cauchy_schwarz_bound, rms_term_norm, triangle_bound_exact, triangle_bound_mc, BoundReport,
    CommutationStructure, Sampling,
};
use chemtrotter::{sum_abs_coefficients, SpinOrbitalHamiltonian, Term};
use serde::Serialize;

use crate::args::{Command, SamplingArgs, ScalingMethod};
use crate::error::CliResult;
use crate::output::{num, opt, Run};

pub fn dispatch(run: &mut Run, command: &Command) -> CliResult<()> {
    match command {
        Command::Bound(a) => bound::run(run, a),
        Command::Sos(a) => sos::run(run, a),
        Command::Coalesce(a) => coalesce::run(run, a),
        Command::Scaling(a) => scaling::run(run, a),
        Command::Oracle(c) => oracle::run(run, c),
        Command::Ensemble(a) => ensemble::run(run, a),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HamiltonianSummary {
    pub n_orbitals: usize,
    pub n_electrons: Option<usize>,
    pub core_energy: f64,
    pub two_body_fill: f64,
    pub sum_abs_coefficients: f64,
    pub n_terms: usize,
    pub terms_by_class: BTreeMap<&'static str, usize>,
    pub rms_term_norm: Option<f64>,
}

impl HamiltonianSummary {
    pub fn new(h: &SpinOrbitalHamiltonian, terms: &[Term]) -> Self {
        let mut terms_by_class = BTreeMap::new();
        for t in terms {
            *terms_by_class.entry(t.class().label()).or_default() += 1;
        }
        Self {
            n_orbitals: h.n_orbitals(),
            n_electrons: h.n_electrons(),
            core_energy: h.core_energy(),
            two_body_fill: h.two_body_fill(),
            sum_abs_coefficients: sum_abs_coefficients(h),
            n_terms: terms.len(),
            terms_by_class,
            rms_term_norm: rms_term_norm(terms).ok(),
        }
    }
}

pub fn sampling(a: &SamplingArgs) -> Sampling {
    if a.exhaustive {
        Sampling::Exhaustive
    } else {
        Sampling::Random {
            samples: a.samples,
            seed: a.seed,
        }
    }
}

pub fn evaluate(
    method: ScalingMethod,
    terms: &[Term],
    structure: &CommutationStructure,
    sampling_args: &SamplingArgs,
    target_error: f64,
) -> CliResult<BoundReport> {
    let report = match method {
        ScalingMethod::Triangle => triangle_bound_exact(terms, structure),
        ScalingMethod::Mc => triangle_bound_mc(terms, structure, sampling(sampling_args))?,
        ScalingMethod::Cs => cauchy_schwarz_bound(terms, structure)?,
    };
    Ok(report.with_target(target_error)?)
}

pub const REPORT_COLUMNS: [&str; 7] = [
    "method",
    "prefactor",
    "energy_prefactor",
    "target_error",
    "steps",
    "statistical_error",
    "samples",
];

pub fn report_row(r: &BoundReport) -> Vec<String> {
    vec![
        format!("{:?}", r.method),
        num(r.prefactor),
        num(r.energy_prefactor),
        num(r.target_error),
        num(r.steps_for_unit_accuracy),
        opt(r.statistical_error),
        r.samples.map(|s| s.to_string()).unwrap_or_default(),
    ]
}

pub fn reports_text(header: &str, reports: &[&BoundReport]) -> String {
    let mut text = format!("{header}\n");
    for r in reports {
        text.push('\n');
        text.push_str(&r.to_text());
        if !text.ends_with('\n') {
            text.push('\n');
        }
    }
    text
}
