//! End-to-end runs of the `chemtrotter` binary.

use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stderr: String,
}

fn chemtrotter(out: &Path, args: &[&str]) -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_chemtrotter"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs");
    Outcome {
        code: output.status.code().expect("exit code"),
        stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
    }
}

fn ok(out: &Path, args: &[&str]) {
    let r = chemtrotter(out, args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

/// Two spatial orbitals with one exchange-type integral: a single
/// four-index spin-orbital term.
const EXCHANGE_FCIDUMP: &str = "&FCI NORB=2,NELEC=2,MS2=0,
 ORBSYM=1,1,
 ISYM=1,
&END
 0.60 1 1 1 1
 0.55 2 2 2 2
 0.40 1 1 2 2
 0.12 1 2 1 2
-1.20 1 1 0 0
-0.70 2 2 0 0
 0.30 0 0 0 0
";

#[test]
fn triangle_steps_follow_the_target() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "bound",
            "--ensemble",
            "8",
            "--method",
            "triangle",
            "--target-error",
            "1e-3",
        ],
    );
    let r = json(&dir.path().join("bound_report.json"));
    let rep = &r["reports"][0];
    let gamma = rep["prefactor"].as_f64().unwrap();
    let steps = rep["steps_for_unit_accuracy"].as_f64().unwrap();
    assert_eq!(rep["method"], "ExhaustiveTriangle");
    assert!((steps - (gamma / 1e-3).sqrt()).abs() <= 1e-12 * steps);
    let m = json(&dir.path().join("manifest.json"));
    assert_eq!(m["status"], "ok");
    assert_eq!(m["config"]["command"]["subcommand"], "bound");
    assert_eq!(m["outputs"].as_array().unwrap().len(), 3);
}

#[test]
fn monte_carlo_runs_repeat_exactly() {
    let args = [
        "bound",
        "--ensemble",
        "10",
        "--method",
        "mc",
        "--samples",
        "100000",
        "--seed",
        "7",
    ];
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    ok(a.path(), &args);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    ok(b.path(), &threaded);
    for f in ["bound_report.json", "bound_report.txt", "bound_report.csv"] {
        assert_eq!(read(&a.path().join(f)), read(&b.path().join(f)), "{f}");
    }
    assert_eq!(json(&b.path().join("manifest.json"))["threads"], 3);
}

#[test]
fn all_methods_on_the_full_ensemble() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &["bound", "--ensemble", "16", "--method", "all"],
    );
    let r = json(&dir.path().join("bound_report.json"));
    let reports = r["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    let mc = reports
        .iter()
        .find(|x| x["method"] == "MonteCarlo")
        .unwrap();
    let rel = mc["statistical_error"].as_f64().unwrap();
    assert!(rel <= 0.02, "relative error {rel}");
    let csv = read(&dir.path().join("bound_report.csv"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn fcidump_input_is_digested_into_the_manifest() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("h.fcidump");
    fs::write(&input, EXCHANGE_FCIDUMP).unwrap();
    let out = dir.path().join("run");
    ok(
        &out,
        &[
            "bound",
            "--input",
            input.to_str().unwrap(),
            "--method",
            "cs",
        ],
    );
    let m = json(&out.join("manifest.json"));
    assert_eq!(m["inputs"][0]["bytes"], EXCHANGE_FCIDUMP.len());
    assert_eq!(m["inputs"][0]["fnv1a64"].as_str().unwrap().len(), 16);
    let r = json(&out.join("bound_report.json"));
    assert_eq!(r["hamiltonian"]["n_orbitals"], 4);
    assert_eq!(r["hamiltonian"]["n_electrons"], 2);
}

#[test]
fn sos_verification_at_six_spin_orbitals() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "sos",
            "--ensemble",
            "6",
            "--verify",
            "--save-decomposition",
            "--samples",
            "20000",
        ],
    );
    let r = json(&dir.path().join("sos_report.json"));
    let residual = r["reconstruction_residual"].as_f64().unwrap();
    assert!(residual <= 1e-10, "{residual:e}");
    assert!(r["squares"].as_u64().unwrap() <= 72);
    assert!(dir.path().join("sos_decomposition.json").exists());
    let table = read(&dir.path().join("sos_comparison.csv"));
    assert!(table.contains("ExhaustiveTriangle") && table.contains("SumOfSquaresMC"));
}

#[test]
fn sos_without_two_body_terms_reports_no_squares() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("one_body.fcidump");
    fs::write(
        &input,
        "&FCI NORB=2,NELEC=2\n&END\n-1.0 1 1 0 0\n0.2 1 2 0 0\n-0.5 2 2 0 0\n",
    )
    .unwrap();
    let out = dir.path().join("run");
    ok(
        &out,
        &["sos", "--input", input.to_str().unwrap(), "--verify"],
    );
    let r = json(&out.join("sos_report.json"));
    assert_eq!(r["squares"], 0);
    assert!(r["sos"].is_null());
    assert!(r["reconstruction_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn sos_comparison_on_sixteen_spin_orbitals() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &["sos", "--ensemble", "16", "--samples", "20000"],
    );
    let r = json(&dir.path().join("sos_report.json"));
    assert!(r["standard"]["prefactor"].as_f64().unwrap() > 0.0);
    assert!(r["sos"]["prefactor"].as_f64().unwrap() > 0.0);
    assert!(r["prefactor_ratio"].as_f64().is_some());
}

#[test]
fn sos_verify_refuses_large_registers() {
    let dir = TempDir::new().unwrap();
    let r = chemtrotter(dir.path(), &["sos", "--ensemble", "14", "--verify"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
}

#[test]
fn coalescing_with_one_importance_runs_everything_every_step() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("h.fcidump");
    fs::write(&input, EXCHANGE_FCIDUMP).unwrap();
    let out = dir.path().join("run");
    ok(&out, &["coalesce", "--input", input.to_str().unwrap()]);
    let r = json(&out.join("coalesce_report.json"));
    let m = r["hamiltonian"]["n_terms"].as_u64().unwrap();
    assert!(r["four_index_terms"].as_u64().unwrap() >= 1);
    assert_eq!(r["log_std"].as_f64().unwrap_or(0.0), 0.0);
    assert_eq!(r["regions"]["A"], r["four_index_terms"]);
    assert_eq!(r["work_per_step"].as_f64().unwrap(), m as f64);
    assert_eq!(r["period_counts"]["1"].as_u64().unwrap(), m);
    assert_eq!(r["cycle_length"], 1);
}

#[test]
fn coalescing_regions_cover_the_four_index_terms() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["coalesce", "--ensemble", "16", "--normalize"]);
    let r = json(&dir.path().join("coalesce_report.json"));
    let regions: u64 = r["regions"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(regions, r["four_index_terms"].as_u64().unwrap());
    assert!(r["regions"]["E"].as_u64().unwrap() > 0);
    let work = r["work_per_step"].as_f64().unwrap();
    assert!(work < r["work_uncoalesced"].as_f64().unwrap());
    assert!(work >= r["work_all_32"].as_f64().unwrap());
    let hist = read(&dir.path().join("importance_histogram.csv"));
    assert!(hist.starts_with("z_low,z_high,region,count"));
    let counted: u64 = hist
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(counted, regions);
    let s = json(&dir.path().join("schedule.json"));
    assert_eq!(s["format"], "chemtrotter-schedule");
}

#[test]
fn coalescing_error_comparison_uses_half_the_step() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "coalesce",
            "--ensemble",
            "8",
            "--compare-error",
            "--compare-dt",
            "0.015625",
        ],
    );
    let table = read(&dir.path().join("compare_error.csv"));
    let rows: Vec<Vec<&str>> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0], rows[0][1]), ("uncoalesced", "0.015625"));
    assert_eq!((rows[1][0], rows[1][1]), ("coalesced", "0.0078125"));
    for r in &rows {
        assert!(r[5].parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn scaling_fits_and_size_check() {
    let dir = TempDir::new().unwrap();
    let r = chemtrotter(dir.path(), &["scaling", "--sizes", "8,10"]);
    assert_eq!(r.code, 2);
    assert!(json(&dir.path().join("error.json"))["message"]
        .as_str()
        .unwrap()
        .contains("3 distinct sizes"));

    ok(
        dir.path(),
        &["scaling", "--sizes", "8,12,16", "--method", "triangle,cs"],
    );
    let report = json(&dir.path().join("scaling_report.json"));
    let sum_abs = report["sum_abs_coefficients_fit"]["exponent"]
        .as_f64()
        .unwrap();
    assert!((sum_abs - 4.0).abs() < 0.15, "{sum_abs}");
    for m in ["triangle", "cs"] {
        let fit = &report["fits"][m]["steps"];
        assert!(fit["exponent"].as_f64().unwrap() > 3.0, "{m}: {fit}");
        assert!(fit["exponent_stderr"].as_f64().is_some());
    }
    assert_eq!(read(&dir.path().join("scaling.csv")).lines().count(), 7);
}

#[test]
fn scaling_from_files() {
    let dir = TempDir::new().unwrap();
    let mut files = Vec::new();
    for n in [4, 6, 8] {
        let out = dir.path().join(format!("e{n}"));
        ok(
            &out,
            &[
                "ensemble",
                "--ensemble",
                &n.to_string(),
                "--ensemble-seed",
                "4",
            ],
        );
        files.push(out.join("hamiltonian.json").display().to_string());
    }
    let out = dir.path().join("scaling");
    ok(&out, &["scaling", "--inputs", &files.join(",")]);
    let m = json(&out.join("manifest.json"));
    assert_eq!(m["inputs"].as_array().unwrap().len(), 3);
    assert!(
        json(&out.join("scaling_report.json"))["fits"]["triangle"]["steps"]["exponent"].is_f64()
    );
}

#[test]
fn serialized_ensembles_reproduce_generated_ones() {
    let dir = TempDir::new().unwrap();
    let gen = dir.path().join("gen");
    ok(
        &gen,
        &[
            "ensemble",
            "--ensemble",
            "8",
            "--fraction",
            "0.5",
            "--ensemble-seed",
            "9",
        ],
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(
        &a,
        &[
            "bound",
            "--ensemble",
            "8",
            "--fraction",
            "0.5",
            "--ensemble-seed",
            "9",
            "--method",
            "triangle",
        ],
    );
    let file = gen.join("hamiltonian.json");
    ok(
        &b,
        &[
            "bound",
            "--input",
            file.to_str().unwrap(),
            "--method",
            "triangle",
        ],
    );
    assert_eq!(
        json(&a.join("bound_report.json"))["reports"],
        json(&b.join("bound_report.json"))["reports"]
    );
}

#[test]
fn oracle_convergence_is_second_order() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "oracle",
            "convergence",
            "--ensemble",
            "6",
            "--dt",
            "0.125",
            "--halvings",
            "3",
        ],
    );
    let r = json(&dir.path().join("convergence.json"));
    let slope = r["slope"].as_f64().unwrap();
    assert!((1.9..=2.1).contains(&slope), "{slope}");
    assert_eq!(read(&dir.path().join("convergence.csv")).lines().count(), 5);
}

#[test]
fn oracle_histogram_repeats_per_seed() {
    let args = [
        "oracle",
        "histogram",
        "--ensemble",
        "6",
        "--samples",
        "40",
        "--seed",
        "1",
    ];
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    ok(a.path(), &args);
    ok(b.path(), &args);
    for f in ["order_histogram.csv", "order_experiment.json"] {
        assert_eq!(read(&a.path().join(f)), read(&b.path().join(f)), "{f}");
    }
    let r = json(&a.path().join("order_experiment.json"));
    assert_eq!(r["water_reference"]["kurtosis_ratio"], 3.15);
    assert_eq!(r["errors"].as_array().unwrap().len(), 40);
    assert!(read(&a.path().join("order_histogram.csv")).starts_with("# count=40"));
}

#[test]
fn oracle_bound_check_rows_hold() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "oracle",
            "bound-check",
            "--ensemble",
            "6",
            "--ensemble-seed",
            "3",
        ],
    );
    let r = json(&dir.path().join("bound_check.json"));
    assert_eq!(r["all_within"], true);
    assert_eq!(r["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn oracle_bch_table() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "oracle",
            "bch",
            "--ensemble",
            "5",
            "--dt",
            "0.0625",
            "--halvings",
            "2",
        ],
    );
    let r = json(&dir.path().join("bch.json"));
    let rel = r["relative_difference"].as_array().unwrap();
    assert!(rel.last().unwrap().as_f64().unwrap() < 0.05);
    assert_eq!(r["residual_ratio"][0], Value::Null);
}

#[test]
fn exit_codes_and_error_records() {
    let dir = TempDir::new().unwrap();

    let cap = dir.path().join("cap");
    let r = chemtrotter(&cap, &["oracle", "convergence", "--ensemble", "18"]);
    assert_eq!(r.code, 2);
    let e = json(&cap.join("error.json"));
    assert_eq!(e["error"], "input");
    assert!(e["message"].as_str().unwrap().contains("--ensemble"));
    assert_eq!(json(&cap.join("manifest.json"))["status"], "error");

    let branch = dir.path().join("branch");
    let r = chemtrotter(
        &branch,
        &["oracle", "convergence", "--ensemble", "6", "--dt", "4"],
    );
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert_eq!(json(&branch.join("error.json"))["error"], "numerical");
    let last: Value = serde_json::from_str(r.stderr.lines().last().unwrap()).unwrap();
    assert_eq!(last["exit_code"], 3);

    let missing = dir.path().join("missing");
    let r = chemtrotter(&missing, &["bound", "--input", "/no/such/file.fcidump"]);
    assert_eq!(r.code, 2);

    let bad = dir.path().join("bad.fcidump");
    fs::write(&bad, "&FCI NORB=2,NELEC=2\n&END\n0.5 1 x 0 0\n").unwrap();
    let r = chemtrotter(
        &dir.path().join("bad"),
        &["bound", "--input", bad.to_str().unwrap()],
    );
    assert_eq!(r.code, 2);

    let r = chemtrotter(dir.path(), &["bound"]);
    assert_eq!(r.code, 2);

    let r = chemtrotter(
        dir.path(),
        &["bound", "--ensemble", "6", "--target-error=0"],
    );
    assert_eq!(r.code, 2);
    let last: Value = serde_json::from_str(r.stderr.lines().last().unwrap()).unwrap();
    assert_eq!(last["error"], "input");

    let r = chemtrotter(
        dir.path(),
        &["bound", "--ensemble", "6", "--fraction", "1.5"],
    );
    assert_eq!(r.code, 2);
}
