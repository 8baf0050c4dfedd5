use chemtrotter::bounds::{cauchy_schwarz_bound, triangle_bound_exact, CommutationStructure};
use chemtrotter::oracle::{
    bch_effective_hamiltonian, perturbative_energy_error, randomized_order_experiment,
    ProductFormula, TrotterSimulator, WATER_REFERENCE_RATIOS,
};
use chemtrotter::scaling::fit_power_law;
use chemtrotter::{enumerate_terms, interleaved_order, Term, TermOrder};
use serde_json::json;

use crate::args::{
    BchArgs, BoundCheckArgs, ConvergenceArgs, FormulaChoice, HistogramArgs, OracleCommand,
    OracleSource,
};
use crate::error::CliResult;
use crate::output::{num, opt, Run};
use crate::source;

pub fn run(run: &mut Run, c: &OracleCommand) -> CliResult<()> {
    match c {
        OracleCommand::Convergence(a) => convergence(run, a),
        OracleCommand::Bch(a) => bch(run, a),
        OracleCommand::Histogram(a) => histogram(run, a),
        OracleCommand::BoundCheck(a) => bound_check(run, a),
    }
}

struct System {
    terms: Vec<Term>,
    order: TermOrder,
    sim: TrotterSimulator,
}

impl System {
    fn load(run: &mut Run, s: &OracleSource) -> CliResult<Self> {
        let h = source::load(run, &s.source)?;
        let terms = enumerate_terms(&h);
        let sector = s.sector.or(h.n_electrons());
        let sim = TrotterSimulator::new(&terms, h.n_orbitals(), sector)?;
        let order = interleaved_order(&terms);
        Ok(Self { terms, order, sim })
    }

    fn header(&self) -> serde_json::Value {
        json!({
            "n_orbitals": self.sim.basis().n_modes(),
            "sector": self.sim.basis().particles(),
            "dimension": self.sim.basis().dim(),
            "n_terms": self.terms.len(),
            "ground_energy": self.sim.ground_energy(),
        })
    }
}

fn halvings(dt: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|k| dt / f64::from(1u32 << k)).collect()
}

/// `previous / current`, blank for the first row.
fn ratios(xs: &[f64]) -> Vec<Option<f64>> {
    std::iter::once(None)
        .chain(xs.windows(2).map(|w| Some(w[0] / w[1])))
        .collect()
}

fn convergence(run: &mut Run, a: &ConvergenceArgs) -> CliResult<()> {
    let sys = System::load(run, &a.system)?;
    let formula = match a.formula {
        FormulaChoice::First => ProductFormula::First,
        FormulaChoice::Second => ProductFormula::Second,
    };
    let dts = halvings(a.dt, a.halvings);
    let errors = dts
        .iter()
        .map(|&dt| sys.sim.measured_energy_error(&sys.order, dt, formula))
        .collect::<Result<Vec<f64>, _>>()?;
    let abs: Vec<f64> = errors.iter().map(|e| e.abs()).collect();
    let r = ratios(&abs);
    run.write_csv(
        "convergence.csv",
        &["dt", "energy_error", "abs_error", "ratio"],
        (0..dts.len()).map(|k| vec![num(dts[k]), num(errors[k]), num(abs[k]), opt(r[k])]),
    )?;
    let fit = fit_power_law(&dts, &abs);
    run.write_json(
        "convergence.json",
        &json!({
            "system": sys.header(),
            "formula": a.formula,
            "dt": dts,
            "energy_error": errors,
            "slope": fit.map(|f| f.exponent),
            "slope_stderr": fit.and_then(|f| f.exponent_stderr),
        }),
    )
}

fn bch(run: &mut Run, a: &BchArgs) -> CliResult<()> {
    let sys = System::load(run, &a.system)?;
    let dts = halvings(a.dt, a.halvings);
    let mut residuals = Vec::new();
    let mut measured = Vec::new();
    let mut predicted = Vec::new();
    for &dt in &dts {
        let u = sys
            .sim
            .trotter_unitary(&sys.order, dt, ProductFormula::Second);
        let log = sys.sim.effective_hamiltonian(&u, dt)?;
        let series = bch_effective_hamiltonian(&sys.sim, &sys.order, dt);
        residuals.push((log.matrix() - series.matrix()).norm());
        measured.push(
            sys.sim
                .measured_energy_error(&sys.order, dt, ProductFormula::Second)?,
        );
        predicted.push(perturbative_energy_error(&sys.sim, &sys.order, dt));
    }
    let r = ratios(&residuals);
    let rel: Vec<Option<f64>> = measured
        .iter()
        .zip(&predicted)
        .map(|(m, p)| (*m != 0.0).then(|| (p - m).abs() / m.abs()))
        .collect();
    run.write_csv(
        "bch.csv",
        &[
            "dt",
            "residual_frobenius",
            "residual_ratio",
            "measured_error",
            "perturbative_error",
            "relative_difference",
        ],
        (0..dts.len()).map(|k| {
            vec![
                num(dts[k]),
                num(residuals[k]),
                opt(r[k]),
                num(measured[k]),
                num(predicted[k]),
                opt(rel[k]),
            ]
        }),
    )?;
    run.write_json(
        "bch.json",
        &json!({
            "system": sys.header(),
            "dt": dts,
            "residual_frobenius": residuals,
            "residual_ratio": r,
            "measured_error": measured,
            "perturbative_error": predicted,
            "relative_difference": rel,
        }),
    )
}

fn histogram(run: &mut Run, a: &HistogramArgs) -> CliResult<()> {
    let sys = System::load(run, &a.system)?;
    let exp = randomized_order_experiment(&sys.sim, &sys.order, a.samples, a.dt, a.seed)?;
    let io = |e: std::io::Error| crate::error::CliError::internal(format!("histogram CSV: {e}"));
    run.write_with("order_histogram.csv", |w| {
        exp.write_csv(a.bins, w).map_err(io)
    })?;
    let (kurtosis, skewness, width) = WATER_REFERENCE_RATIOS;
    run.write_json(
        "order_experiment.json",
        &json!({
            "system": sys.header(),
            "dt": exp.dt,
            "seed": exp.seed,
            "samples": exp.errors.len(),
            "moments": exp.moments,
            "kurtosis_ratio": exp.moments.kurtosis_ratio(),
            "skewness_ratio": exp.moments.skewness_ratio(),
            "width_ratio": exp.moments.width_ratio(),
            "water_reference": {
                "kurtosis_ratio": kurtosis,
                "skewness_ratio": skewness,
                "width_ratio": width,
            },
            "errors": exp.errors,
        }),
    )
}

fn bound_check(run: &mut Run, a: &BoundCheckArgs) -> CliResult<()> {
    let sys = System::load(run, &a.system)?;
    let structure = CommutationStructure::new(&sys.terms);
    let triangle = triangle_bound_exact(&sys.terms, &structure);
    let cs = cauchy_schwarz_bound(&sys.terms, &structure)?;
    let mut rows = Vec::new();
    for &dt in &a.dts {
        let e = sys
            .sim
            .measured_energy_error(&sys.order, dt, ProductFormula::Second)?
            .abs();
        let (t, c) = (
            triangle.energy_prefactor * dt * dt,
            cs.energy_prefactor * dt * dt,
        );
        rows.push((dt, e, t, c, e <= t, e <= c));
    }
    run.write_csv(
        "bound_check.csv",
        &[
            "dt",
            "measured_error",
            "triangle_bound",
            "cauchy_schwarz_bound",
            "within_triangle",
            "within_cauchy_schwarz",
        ],
        rows.iter().map(|&(dt, e, t, c, wt, wc)| {
            vec![
                num(dt),
                num(e),
                num(t),
                num(c),
                wt.to_string(),
                wc.to_string(),
            ]
        }),
    )?;
    let all_within = rows.iter().all(|r| r.4 && r.5);
    run.write_json(
        "bound_check.json",
        &json!({
            "system": sys.header(),
            "triangle": triangle,
            "cauchy_schwarz": cs,
            "rows": rows.iter().map(|&(dt, e, t, c, wt, wc)| json!({
                "dt": dt,
                "measured_error": e,
                "triangle_bound": t,
                "cauchy_schwarz_bound": c,
                "within_triangle": wt,
                "within_cauchy_schwarz": wc,
            })).collect::<Vec<_>>(),
            "all_within": all_within,
        }),
    )
}
