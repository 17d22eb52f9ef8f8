use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ambiguity-lab");

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .env_remove("AMBIGUITY_LAB_OUTPUT")
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

/// The single run directory for `command` under `root`.
fn run_dir(root: &Path, command: &str) -> PathBuf {
    let dirs: Vec<PathBuf> = fs::read_dir(root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with(&format!("{command}-")))
        .collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs.into_iter().next().unwrap()
}

fn read(p: PathBuf) -> String {
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

const SMALL: [&str; 4] = ["--countries", "8", "--parties", "6"];

#[test]
fn solve_writes_exact_payoffs_and_manifest() {
    let t = tempfile::tempdir().unwrap();
    let o = run(t.path(), &["solve", "--k", "6/5", "--l", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let d = run_dir(t.path(), "solve");
    let report = read(d.join("report.txt"));
    assert_eq!(value(&report, "regime"), "CentristAmbiguity");
    assert_eq!(value(&report, "equilibria"), "AC");
    assert!(read(d.join("payoffs.csv")).contains("AC,4/5,1/5,0.8"));
    let manifest = read(d.join("manifest.txt"));
    assert_eq!(value(&manifest, "k"), "6/5");
    assert!(manifest.contains(&format!("ambiguity-lab {}", ambiguity_lab::VERSION)));
    assert_eq!(read(d.join("errors.txt")), "label\tmessage\n");
}

#[test]
fn sweep_table_has_two_contiguous_regimes() {
    let t = tempfile::tempdir().unwrap();
    assert!(run(t.path(), &["sweep", "--k-range", "1.05:1.6:0.01", "--l-offset", "1/2"]).status.success());
    let table = read(run_dir(t.path(), "sweep").join("phase_table.csv"));
    let regimes: Vec<&str> = table.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(regimes.len(), 56);
    let switches = regimes.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(switches, 1);
    assert_eq!(regimes[0], "CentristAmbiguity");
    assert_eq!(*regimes.last().unwrap(), "FullCommitment");
}

#[test]
fn mc_check_agrees_with_exact_probabilities() {
    let t = tempfile::tempdir().unwrap();
    assert!(run(t.path(), &["mc-check", "--k", "1.3", "--l", "2", "--samples", "40000", "--seed", "7"]).status.success());
    let table = read(run_dir(t.path(), "mc-check").join("mc_check.csv"));
    assert_eq!(table.lines().count(), 5);
    assert!(table.lines().skip(1).all(|l| l.ends_with(",true")), "{table}");
}

#[test]
fn invalid_arguments_fail_before_writing() {
    let t = tempfile::tempdir().unwrap();
    let o = run(t.path(), &["solve", "--k", "1/2", "--l", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 < k"));
    let o = run(t.path(), &["replicate-mechanism", "--theta", "nonsense=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!t.path().exists() || fs::read_dir(t.path()).unwrap().next().is_none());
}

#[test]
fn flags_override_config_and_manifest_reproduces_run() {
    let t = tempfile::tempdir().unwrap();
    let conf = t.path().join("run.conf");
    fs::write(&conf, "# small panel\ncountries = 8\nparties = 6\nseed = 3\nbins = 5\nk = 1.2\n").unwrap();
    let first = t.path().join("first");
    let o = run(&first, &["--config", conf.to_str().unwrap(), "replicate-baseline", "--seed", "11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let d1 = run_dir(&first, "replicate-baseline");
    let manifest = read(d1.join("manifest.txt"));
    assert_eq!(value(&manifest, "seed"), "11");
    assert_eq!(value(&manifest, "countries"), "8");
    assert_eq!(value(&manifest, "beta2"), "-0.1");
    assert_eq!(read(d1.join("binned.csv")).lines().count(), 1 + 5 * 2);

    let second = t.path().join("second");
    let m = d1.join("manifest.txt");
    assert!(run(&second, &["--config", m.to_str().unwrap(), "replicate-baseline"]).status.success());
    let d2 = run_dir(&second, "replicate-baseline");
    for f in ["panel.csv", "summary.csv", "binned.csv", "reports/quadratic_economic.txt", "reports/iv_social.txt"] {
        assert_eq!(read(d1.join(f)), read(d2.join(f)), "{f}");
    }

    fs::write(&conf, "no_such_option = 1\n").unwrap();
    assert_eq!(run(t.path(), &["--config", conf.to_str().unwrap(), "solve", "--k", "1.2", "--l", "2"]).status.code(), Some(2));
}

#[test]
fn output_root_comes_from_environment() {
    let t = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .env("AMBIGUITY_LAB_OUTPUT", t.path())
        .args(["solve", "--k", "1.4", "--l", "3"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(value(&read(run_dir(t.path(), "solve").join("report.txt")), "regime"), "FullCommitment");
}

#[test]
fn failed_specs_are_indexed_and_set_exit_status() {
    let t = tempfile::tempdir().unwrap();
    // Without simulated experts there is no SD-of-experts outcome.
    let mut args = vec!["replicate-baseline", "--experts", "0", "--dimensions", "economic"];
    args.extend(SMALL);
    let o = run(t.path(), &args);
    assert_eq!(o.status.code(), Some(1));
    let d = run_dir(t.path(), "replicate-baseline");
    let errors = read(d.join("errors.txt"));
    assert_eq!(errors.lines().count(), 2, "{errors}");
    assert!(errors.contains("sd_outcome_economic\t"));
    let summary = read(d.join("summary.csv"));
    assert_eq!(summary.lines().filter(|l| l.contains(",ok,")).count(), 5);
    assert!(d.join("reports/quadratic_economic.txt").exists());
    assert!(!d.join("reports/sd_outcome_economic.txt").exists());
}

#[test]
fn gen_ingest_fit_pipeline() {
    let t = tempfile::tempdir().unwrap();
    let mut args = vec!["gen", "--experts", "4", "--expert-sd", "0", "--seed", "5"];
    args.extend(SMALL);
    assert!(run(t.path(), &args).status.success());
    let g = run_dir(t.path(), "gen");
    let experts = g.join("experts.csv");
    assert!(run(t.path(), &["ingest", "--experts-file", experts.to_str().unwrap(), "--min-experts", "4"])
        .status
        .success());
    let i = run_dir(t.path(), "ingest");
    // Noise-free experts: the aggregated means equal the generated panel.
    let truth = read(g.join("panel.csv"));
    let agg = read(i.join("panel.csv"));
    let col = |text: &str, name: &str| -> Vec<String> {
        let mut lines = text.lines();
        let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
        lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
    };
    assert_eq!(col(&truth, "position_economic"), col(&agg, "position_economic"));
    assert_eq!(value(&read(i.join("ingest.txt")), "groups_dropped"), "0");

    let panel = i.join("panel.csv");
    let o = run(
        t.path(),
        &[
            "fit",
            "--panel",
            panel.to_str().unwrap(),
            "--outcome",
            "blurriness_economic",
            "--regressors",
            "position_economic,position_economic^2",
            "--peak",
            "position_economic",
            "--joint",
            "position_economic,position_economic^2",
            "--inference-df",
            "30",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read(run_dir(t.path(), "fit").join("report.txt"));
    assert_eq!(value(&report, "n_obs"), "96");
    assert_eq!(value(&report, "inference_df"), "30");
    assert!(value(&report, "peak").parse::<f64>().is_ok());

    let o = run(t.path(), &["fit", "--panel", panel.to_str().unwrap(), "--outcome", "missing", "--regressors", "x"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn mechanism_runs_on_synthetic_and_file_inputs() {
    let t = tempfile::tempdir().unwrap();
    let mut args = vec!["replicate-mechanism"];
    args.extend(SMALL);
    assert!(run(t.path(), &args).status.success());
    let d = run_dir(t.path(), "replicate-mechanism");
    let summary = read(d.join("summary.csv"));
    assert_eq!(summary.lines().filter(|l| l.contains(",ok,")).count(), 8, "{summary}");
    assert!(summary.contains("centrism_midpoint_economic*growth_var_lag*opposition"));

    // Re-run from the written panel and context tables. The panel already
    // carries context columns, so strip them by generating a fresh one.
    let g = t.path().join("g");
    let mut args = vec!["gen", "--model", "centrism"];
    args.extend(SMALL);
    assert!(run(&g, &args).status.success());
    let panel = run_dir(&g, "gen").join("panel.csv");
    let cy = d.join("context_country_years.csv");
    let gov = d.join("context_government.csv");
    let files = t.path().join("files");
    let o = run(
        &files,
        &[
            "replicate-mechanism",
            "--panel",
            panel.to_str().unwrap(),
            "--context-country-years",
            cy.to_str().unwrap(),
            "--context-government",
            gov.to_str().unwrap(),
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&files, &["replicate-mechanism", "--panel", panel.to_str().unwrap()]).status.code(), Some(2));
}
