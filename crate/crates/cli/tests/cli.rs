use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spindyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spindyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn presets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

#[test]
fn run_writes_csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", "p0=0.5\nd=1\nt_end=0.05\n");
    let out = spindyn(&["run", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,C,QD,CC,MI,trace_err,min_eig,argmin_branch"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[1], "0.25");
    assert_eq!(text.lines().count(), 7);
    assert!(!text.contains('\r'));
}

#[test]
fn flags_override_file_and_out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", "p0=0.5\nt_end=5\n");
    let csv = dir.path().join("o.csv");
    let out = spindyn(&[
        "run",
        cfg.to_str().unwrap(),
        "--t_end=0.02",
        "--mode=both",
        "--env=dissipative",
        "--gamma=0.5",
        "--delta=0.3",
        &format!("--out={}", csv.display()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,C,QD,CC,MI,trace_err,min_eig,argmin_branch,analytic_dev\n"));
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().last().unwrap().starts_with("0.02,"));
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", "env=noisy\ngamma=0.5\nd=0.7\nt_end=1\n");
    let a = spindyn(&["run", cfg.to_str().unwrap()]);
    let b = spindyn(&["run", cfg.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.cfg", "colour=blue\n");
    assert_eq!(spindyn(&["run", bad.to_str().unwrap()]).status.code(), Some(2));
    let ok = write_config(dir.path(), "ok.cfg", "t_end=1\n");
    assert_eq!(
        spindyn(&["run", ok.to_str().unwrap(), "--dt=0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        spindyn(&["run", ok.to_str().unwrap(), "--env=warm"]).status.code(),
        Some(2)
    );
    assert_eq!(
        spindyn(&["run", dir.path().join("missing.cfg").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(spindyn(&["sweep", ok.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(spindyn(&["run"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_1() {
    // closed-form dissipative propagator is singular at γ = 0, Δ = 0
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.cfg",
        "env=dissipative\ngamma=0\nmode=analytic\nt_end=1\n",
    );
    let out = spindyn(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn sweep_writes_row_major_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.cfg",
        "env=dissipative\ngamma=0.5\naxis1=t:0:1:3\naxis2=delta:0:1:2\n",
    );
    let out = spindyn(&["sweep", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,delta,C,QD,CC,error");
    assert_eq!(lines.len(), 7);
    let keys: Vec<(&str, &str)> = lines[1..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0], f[1])
        })
        .collect();
    assert_eq!(
        keys,
        [
            ("0", "0"),
            ("0", "1"),
            ("0.5", "0"),
            ("0.5", "1"),
            ("1", "0"),
            ("1", "1")
        ]
    );
    assert!(lines[1..].iter().all(|l| l.ends_with(',')));
}

#[test]
fn sweep_records_bad_cells() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s.cfg", "axis1=p:0:2:3\naxis2=d:0:1:2\nt_end=0.1\n");
    let out = spindyn(&["sweep", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines()
            .filter(|l| l.ends_with(",NaN,NaN,NaN,out_of_range"))
            .count(),
        2
    );
}

#[test]
fn min_over_period_reports_critical_d() {
    let out = spindyn(&["min-over-period", presets_dir().join("fig1a.cfg").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("d,nu,period,min_C\n"));
    assert_eq!(text.lines().count(), 5);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("critical D ~ 1.73"), "{stderr}");
}

#[test]
fn every_preset_loads() {
    let mut names: Vec<String> = std::fs::read_dir(presets_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let expected = [
        "fig1a", "fig1b", "fig1c", "fig1d", "fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig4c",
        "fig5a", "fig5b",
    ];
    assert_eq!(names, expected.iter().map(|n| format!("{n}.cfg")).collect::<Vec<_>>());
    for name in &names {
        let cfg = spindyn_core::harness::Config::load(presets_dir().join(name)).unwrap();
        if name == "fig2.cfg" {
            spindyn_core::harness::SweepGrid::from_config(&cfg).unwrap();
        } else {
            cfg.scenario().unwrap();
        }
    }
}

#[test]
fn preset_runs_end_to_end() {
    let out = spindyn(&["run", presets_dir().join("fig3a.cfg").to_str().unwrap(), "--t_end=0.5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 52);
}

#[test]
fn verify_exit_status_tracks_failures() {
    let out = spindyn(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS] werner p=0.5 C"));
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("[FAIL]")).collect();
    assert_eq!(out.status.code(), Some(if failed.is_empty() { 0 } else { 1 }));

    let perturbed = spindyn(&["verify", "--snapshot-gamma=0.6"]);
    let text = String::from_utf8(perturbed.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("[FAIL] snapshot rho11")));
    assert_eq!(perturbed.status.code(), Some(1));
}
