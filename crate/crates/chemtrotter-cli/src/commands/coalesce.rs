use std::collections::BTreeMap;

use chemtrotter::coalescing::{
    assign_periods, build_importance_table, build_schedule, importance_histogram,
    serialize_schedule, work_per_cycle, write_histogram_csv, CoalescingSchedule, HistogramAxis,
};
use chemtrotter::oracle::TrotterSimulator;
use chemtrotter::{enumerate_terms, interleaved_order, TermClass};
use serde_json::json;

use crate::args::CoalesceArgs;
use crate::error::{CliError, CliResult};
use crate::output::{num, Run};
use crate::source;

use super::HamiltonianSummary;

pub fn run(run: &mut Run, a: &CoalesceArgs) -> CliResult<()> {
    let h = source::load(run, &a.source)?;
    let terms = enumerate_terms(&h);
    let table = build_importance_table(&h, &terms, None);
    let assignment = assign_periods(&table);
    let order = interleaved_order(&terms);
    let schedule = build_schedule(&assignment.periods, a.dt, &order)?;

    let axis = if a.normalize {
        HistogramAxis::Standardized
    } else {
        HistogramAxis::Log10
    };
    let rows = importance_histogram(&table, &assignment, a.bin_width, axis);
    run.write_with("importance_histogram.csv", |w| {
        Ok(write_histogram_csv(&rows, axis, w)?)
    })?;
    run.write_text("schedule.json", &(serialize_schedule(&schedule) + "\n"))?;

    let mut regions: BTreeMap<String, usize> =
        ["A", "B", "C", "D", "E"].map(|r| (r.to_string(), 0)).into();
    for (_, r) in &assignment.regions {
        *regions.entry(r.label().to_string()).or_default() += 1;
    }
    let mut periods: BTreeMap<u32, usize> = BTreeMap::new();
    for &n in &assignment.periods {
        *periods.entry(n).or_default() += 1;
    }
    let four = terms
        .iter()
        .filter(|t| t.class() == TermClass::FourIndex)
        .count();
    let others = (terms.len() - four) as f64;
    let work = work_per_cycle(&schedule);

    let comparison = if a.compare_error {
        Some(compare_error(run, &h, &assignment.periods, a.compare_dt)?)
    } else {
        None
    };

    run.write_json(
        "coalesce_report.json",
        &json!({
            "hamiltonian": HamiltonianSummary::new(&h, &terms),
            "occupied": table.occupied,
            "log_mean": table.log_mean,
            "log_std": table.log_std,
            "log_upper_cutoff": assignment.log_upper_cutoff,
            "log_lower_cutoff": assignment.log_lower_cutoff,
            "four_index_terms": four,
            "regions": regions,
            "period_counts": periods,
            "base_step": a.dt,
            "cycle_length": schedule.cycle_length,
            "work_per_step": work,
            "work_uncoalesced": terms.len(),
            "work_all_16": others + four as f64 / 16.0,
            "work_all_32": others + four as f64 / 32.0,
            "histogram_axis": axis,
            "compare_error": comparison,
        }),
    )
}

/// Plain first-order schedule at `dt` against the coalesced one at `dt / 2`.
fn compare_error(
    run: &mut Run,
    h: &chemtrotter::SpinOrbitalHamiltonian,
    periods: &[u32],
    dt: f64,
) -> CliResult<serde_json::Value> {
    let terms = enumerate_terms(h);
    let order = interleaved_order(&terms);
    let sim = TrotterSimulator::new(&terms, h.n_orbitals(), h.n_electrons())?;
    let plain = build_schedule(&vec![1; terms.len()], dt, &order)?;
    let coalesced = build_schedule(periods, dt / 2.0, &order)?;
    let mut rows = Vec::new();
    for (scheme, s) in [("uncoalesced", &plain), ("coalesced", &coalesced)] {
        let e = sim.schedule_energy_error(s).map_err(|e| {
            let mut e = CliError::from(e);
            e.message.push_str(&format!(
                " ({scheme} cycle time {}; lower --compare-dt)",
                s.cycle_time()
            ));
            e
        })?;
        rows.push((scheme, s, e));
    }
    let cells = |(scheme, s, e): &(&str, &CoalescingSchedule, f64)| {
        vec![
            scheme.to_string(),
            num(s.base_step),
            s.cycle_length.to_string(),
            num(s.cycle_time()),
            num(work_per_cycle(s)),
            num(*e),
        ]
    };
    run.write_csv(
        "compare_error.csv",
        &[
            "scheme",
            "base_step",
            "cycle_length",
            "cycle_time",
            "work_per_step",
            "energy_error",
        ],
        rows.iter().map(cells),
    )?;
    Ok(json!({
        "sector": sim.basis().particles(),
        "ground_energy": sim.ground_energy(),
        "uncoalesced": { "base_step": dt, "energy_error": rows[0].2 },
        "coalesced": { "base_step": dt / 2.0, "energy_error": rows[1].2 },
        "coalesced_not_worse": rows[1].2.abs() <= rows[0].2.abs(),
    }))
}
