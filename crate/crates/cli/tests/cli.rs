use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vcm(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcm"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_scenarios_print_totals() {
    let dir = tempfile::tempdir().unwrap();
    for (name, line) in [
        ("nash_highest", "120 120 120 120"),
        ("lowest", "0 0 0 0"),
        ("social_optimal", "169 169 169 169"),
        ("nash_lowest", "30 30 30 30"),
        ("nash_no_invest", "100 100 100 100"),
    ] {
        let o = vcm(&["simulate", "--scenario", name], dir.path());
        assert!(o.status.success(), "{name}");
        assert_eq!(stdout(&o).trim(), line);
    }
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("period,vote_1,"));
    assert_eq!(csv.lines().count(), 11);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("trajectory.json")).unwrap())
            .unwrap();
    assert_eq!(json["total_payoffs"][0], 100.0);
}

#[test]
fn simulate_is_byte_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    vcm(&["simulate", "--scenario", "social_optimal"], a.path());
    vcm(&["simulate", "--scenario", "social_optimal"], b.path());
    for f in ["trajectory.csv", "trajectory.json"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap()
        );
    }
}

#[test]
fn simulate_from_config_profile() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{
  "params": {"n_players": 2},
  "profile": [
    {"kind": "constant", "vote": 0, "contribution_fraction": 1},
    {"kind": "constant", "vote": 0, "contribution_fraction": 0}
  ]
}"#,
    )
    .unwrap();
    let o = vcm(
        &["simulate", "--config", cfg.to_str().unwrap(), "--format", "json"],
        dir.path(),
    );
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // Contributor: 0.3 * 10 per period; free rider keeps 10 plus the same.
    assert_eq!(v["total_payoffs"][0], 30.0);
    assert_eq!(v["total_payoffs"][1], 130.0);
}

#[test]
fn bad_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, "{\n  \"scenario\": \"lowest\",\n  \"params\": {\"n_players\": -4}\n}").unwrap();
    let o = vcm(&["simulate", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn verify_nash_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = vcm(&["verify-nash", "--scenario", "nash_lowest"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nash true"));
    let o = vcm(
        &["verify-nash", "--scenario", "social_optimal", "--format", "json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["is_nash"], false);
    assert_eq!(v["gains"].as_array().unwrap().len(), 4);
    assert_eq!(v["gains"][0], 22.75);
}

#[test]
fn optimize_and_fit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = vcm(&["optimize", "--format", "json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["grid_best_x"], 3.5);
    assert_eq!(v["grid_best_payoff"], 169.0);
    assert_eq!(v["closed_form_x"], 3.5);
    let table = dir.path().join("switch_payoffs.csv");
    let text = fs::read_to_string(&table).unwrap();
    assert_eq!(text.lines().count(), 1002);
    assert!(text.contains("\n3.5,169\n"));

    let o = vcm(&["fit", table.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["a"], -4.0);
    assert_eq!(v["b"], 28.0);
    assert_eq!(v["c"], 120.0);
    assert_eq!(v["vertex_x"], 3.5);
    assert!(v["rss"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn fit_rejects_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("xy.csv");
    fs::write(&f, "x,y\n0,1\n1,oops\n").unwrap();
    let o = vcm(&["fit", f.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    fs::write(&f, "0,1\n1,2\n").unwrap();
    let o = vcm(&["fit", f.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"sweep": {"productivity_rate": [0.01], "endowment": [10], "base_productivity": [0.3, 1.5], "n_periods": [10], "n_players": [4]}}"#,
    )
    .unwrap();
    let o = vcm(&["sweep", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("2/2 rows agree"));
    let report = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = report.lines();
    assert!(lines.next().unwrap().starts_with("productivity_rate,endowment,"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("0.01,10,0.3,10,4,3.5,169,3.5,169,"), "{row}");
    assert!(lines.next().unwrap().contains(",true,true,"));
}

#[test]
fn sweep_fails_on_invalid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"sweep": {"n_players": [1], "n_periods": [5]}}"#).unwrap();
    let o = vcm(&["sweep", "--config", cfg.to_str().unwrap(), "--step", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn emit_figures_writes_six_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = vcm(&["emit-figures"], dir.path());
    assert!(o.status.success());
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names.len(), 6);
    let fig1 = fs::read_to_string(dir.path().join("figure1_lowest.csv")).unwrap();
    assert!(fig1.trim_end().ends_with(",0,0"));
    let fig5 = fs::read_to_string(dir.path().join("figure5_switch_curve.csv")).unwrap();
    assert!(fig5.contains("\n3.5,169\n"));
    let fig3 = fs::read_to_string(dir.path().join("figure3_nash_no_invest.csv")).unwrap();
    assert!(fig3.contains("\n7,10,70\n"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"step": 5.0}"#).unwrap();
    let o = vcm(
        &["optimize", "--config", cfg.to_str().unwrap(), "--step", "0.5"],
        dir.path(),
    );
    assert!(stdout(&o).contains("step 0.5\n"));
    let o = vcm(&["optimize", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(stdout(&o).contains("step 5\n"));
    let o = vcm(&["optimize", "--step", "-1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
