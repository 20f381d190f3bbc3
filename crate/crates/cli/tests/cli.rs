//! The `ocwt` binary: scenario errors, exit codes and emitted files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ocwt_cli::output::{read_manifest, MANIFEST_FILE, REPORTS_FILE, SUMMARY_FILE};
use ocwt_cli::scenario::Scenario;
use ocwt_cli::{EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};

fn ocwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocwt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_scenario(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("scenario.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn verify(dir: &Path, scenario: Option<&str>, suites: &[&str]) -> Output {
    let out = dir.join("out");
    let mut args = vec!["verify"];
    args.extend_from_slice(suites);
    args.extend(["--out", out.to_str().unwrap()]);
    let path;
    if let Some(text) = scenario {
        path = write_scenario(dir, text);
        args.extend(["--scenario", path.to_str().unwrap()]);
    }
    ocwt(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn minimal_scenario_fills_defaults() {
    let s = Scenario::from_toml("[params]\nalpha = 1.0\nbeta = 0.5\n").unwrap();
    let d = Scenario {
        base_dir: s.base_dir.clone(),
        ..Default::default()
    };
    assert_eq!(s, d);
}

#[test]
fn alpha_below_bound_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(dir.path(), Some("[params]\nalpha = -0.6\nbeta = -0.6\n"), &["plancherel"]);
    assert_eq!(o.status.code(), Some(EXIT_CONFIG), "{}", stderr(&o));
    assert!(stderr(&o).contains("alpha"), "{}", stderr(&o));
}

#[test]
fn beta_above_alpha_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(dir.path(), Some("[params]\nalpha = 0.5\nbeta = 1.0\n"), &["plancherel"]);
    assert_eq!(o.status.code(), Some(EXIT_CONFIG), "{}", stderr(&o));
}

#[test]
fn unknown_key_is_named_with_its_position() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(
        dir.path(),
        Some("seed = 1\n[grid]\nradius = 6.0\nwidth = 3\n"),
        &["plancherel"],
    );
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    let e = stderr(&o);
    assert!(e.contains("width") && e.contains("line 4"), "{e}");
}

#[test]
fn missing_scenario_file_is_a_config_error() {
    let o = ocwt(&[
        "verify",
        "plancherel",
        "--scenario",
        "/nonexistent/scenario.toml",
        "--out",
        "/tmp",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn bad_flag_is_a_config_error() {
    assert_eq!(ocwt(&["verify", "--refine", "0"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(ocwt(&["verify", "nonsense"]).status.code(), Some(EXIT_CONFIG));
}

#[test]
fn plancherel_suite_emits_two_passing_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(dir.path(), None, &["plancherel"]);
    assert_eq!(o.status.code(), Some(EXIT_PASS), "{}", stderr(&o));
    let out = dir.path().join("out");
    let m = read_manifest(&out.join(MANIFEST_FILE)).unwrap();
    assert_eq!(m.checks.len(), 2);
    assert!(m.checks.iter().all(|c| c.report.pass));
    assert_eq!(std::fs::read_to_string(out.join(REPORTS_FILE)).unwrap().lines().count(), 2);
    let csv = std::fs::read_to_string(out.join(SUMMARY_FILE)).unwrap();
    assert_eq!(csv.lines().next(), Some("name,lhs,rhs,margin,pass"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn empty_suite_list_passes_with_no_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(dir.path(), Some("suites = []\n"), &[]);
    assert_eq!(o.status.code(), Some(EXIT_PASS), "{}", stderr(&o));
    let m = read_manifest(&dir.path().join("out").join(MANIFEST_FILE)).unwrap();
    assert!(m.checks.is_empty());
    assert_eq!(m.summary.total, 0);
}

#[test]
fn failed_inequality_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(dir.path(), Some("[tolerances]\nplancherel = 1e-12\n"), &["plancherel"]);
    assert_eq!(o.status.code(), Some(EXIT_FAIL), "{}", stderr(&o));
    let m = read_manifest(&dir.path().join("out").join(MANIFEST_FILE)).unwrap();
    assert!(m.summary.failed >= 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn report_rerenders_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(verify(dir.path(), None, &["plancherel"]).status.code(), Some(EXIT_PASS));
    let o = ocwt(&["report", dir.path().join("out").join(MANIFEST_FILE).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_PASS));
    assert!(String::from_utf8_lossy(&o.stdout).contains("2 passed"));
}

#[test]
fn table_subcommands_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for cmd in [vec!["transform"], vec!["kernel", "--points", "21"]] {
        let mut args = cmd.clone();
        args.extend(["--out", out]);
        let o = ocwt(&args);
        assert_eq!(o.status.code(), Some(EXIT_PASS), "{cmd:?}: {}", stderr(&o));
    }
    let csvs: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .collect();
    assert_eq!(csvs.len(), 2);
}

#[test]
fn scenario_hash_tracks_content() {
    let a = Scenario::from_toml("seed = 1\n").unwrap();
    let b = Scenario::from_toml("seed = 1\n[params]\nalpha = 1.0\n").unwrap();
    let c = Scenario::from_toml("seed = 2\n").unwrap();
    assert_eq!(a.hash(), b.hash());
    assert_ne!(a.hash(), c.hash());
}

#[test]
fn checked_in_scenario_is_the_default() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/default.toml");
    let s = Scenario::load(&path).unwrap();
    let d = Scenario {
        base_dir: s.base_dir.clone(),
        ..Default::default()
    };
    assert_eq!(s, d);
    assert_eq!(s.hash(), d.hash());
}
