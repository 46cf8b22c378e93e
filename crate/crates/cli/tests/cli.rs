//! End-to-end runs of the `hypspec` binary: exit codes, report files and
//! determinism.

use std::path::Path;
use std::process::{Command, Output};

fn hypspec(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypspec"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("HYPSPEC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_names_every_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypspec(&["--list"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in [
        "verify-lemma-est",
        "psi-residual",
        "iso-profile",
        "mean-curvature",
        "epsilon-decay",
        "tangent-cone",
        "cone-spectrum",
        "fem-spectrum",
        "cheeger",
        "laplacian-error",
        "sigma-spectrum",
        "delta-ratio",
        "barrier",
        "volume-compare",
        "all",
    ] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name} missing");
    }
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypspec(&["no-such-scenario"], dir.path());
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("unknown scenario"));
    assert_eq!(hypspec(&["--bogus-flag"], dir.path()).status.code(), Some(64));
    assert_eq!(hypspec(&["verify-lemma-est", "--m", "two"], dir.path()).status.code(), Some(64));
    assert_eq!(hypspec(&[], dir.path()).status.code(), Some(64));
    assert_eq!(hypspec(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn help_documents_csv_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&hypspec(&["--help"], dir.path()));
    assert!(text.contains("verify-lemma-est.csv: m,lambda,R,sigma,lhs,rhs,ratio,eps_R,C1,C2,PASS"));
    assert!(text.contains("cone-spectrum.csv: m,lambda,k,R_k,residual,norm,ratio,eps_k,PASS"));
    assert!(text.contains("HYPSPEC_THREADS"));
}

#[test]
fn missing_cloud_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypspec(&["tangent-cone", "--cloud", "missing.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.txt"));
}

#[test]
fn lemma_grid_writes_three_passing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypspec(&["verify-lemma-est", "--m", "2", "--lambda", "2", "--R", "20,40,80"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("verify-lemma-est.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",PASS")));
    let summary = std::fs::read_to_string(dir.path().join("verify-lemma-est-summary.txt")).unwrap();
    assert_eq!(summary.lines().filter(|l| l.starts_with("PASS")).count(), 3);
}

#[test]
fn fem_spectrum_on_the_geodesic_disk() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypspec(&["fem-spectrum", "--geometry", "geodesic-h2", "--R", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("fem-spectrum.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let lambda0: f64 = row[2].parse().unwrap();
    assert!(lambda0 > 0.25 && lambda0 < 0.40, "{lambda0}");
    assert!(dir.path().join("fem-spectrum-lambda0.dat").exists());
}

#[test]
fn failed_assertions_exit_2() {
    // An impossible tolerance turns a passing check into a failed assertion.
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("strict.toml");
    std::fs::write(&config, "scenario = \"psi-residual\"\n[grid]\nsamples = 50\n[tolerance]\npsi-residual = 1e-30\n").unwrap();
    let o = hypspec(&["--config", config.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL max residual"));
}

#[test]
fn config_file_sets_the_run_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "scenario = \"verify-lemma-est\"\nseed = 3\n[grid]\nm = [2]\nlambda = [2.0]\nR = [20, 40]\n",
    )
    .unwrap();
    let o = hypspec(&["--config", config.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("verify-lemma-est.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let o = hypspec(&["--config", config.to_str().unwrap(), "--R", "20"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("verify-lemma-est.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);

    std::fs::write(&config, "[grid]\nR = []\n").unwrap();
    assert_eq!(hypspec(&["--config", config.to_str().unwrap()], dir.path()).status.code(), Some(1));
    let missing = dir.path().join("absent.toml");
    assert_eq!(hypspec(&["--config", missing.to_str().unwrap()], dir.path()).status.code(), Some(1));
}

#[test]
fn identical_runs_write_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["psi-residual", "--samples", "200", "--seed", "11", "--threads", "1"];
    assert_eq!(hypspec(&args, a.path()).status.code(), Some(0));
    assert_eq!(hypspec(&args, b.path()).status.code(), Some(0));
    let read = |d: &Path| std::fs::read(d.join("psi-residual.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));

    let args = ["mean-curvature", "--samples", "20", "--threads", "1"];
    assert_eq!(hypspec(&args, a.path()).status.code(), Some(0));
    let run = Command::new(env!("CARGO_BIN_EXE_hypspec"))
        .args(args)
        .arg("--out")
        .arg(b.path())
        .env("HYPSPEC_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    let read = |d: &Path| std::fs::read(d.join("mean-curvature.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn bad_thread_variable_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hypspec"))
        .args(["iso-profile", "--out"])
        .arg(dir.path())
        .env("HYPSPEC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(64));
}
