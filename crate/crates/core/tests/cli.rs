use std::fs;
use std::process::{Command, Output};

fn aqrm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqrm")).args(args).output().unwrap()
}

fn field(line: &str, header: &str, name: &str) -> f64 {
    let idx = header.split(',').position(|h| h == name).unwrap();
    line.split(',').nth(idx).unwrap().parse().unwrap()
}

fn solve_energy(args: &[&str]) -> f64 {
    let mut all = vec!["solve", "--header"];
    all.extend_from_slice(args);
    let out = aqrm(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    field(lines.next().unwrap(), header, "e_var")
}

#[test]
fn solve_zero_coupling() {
    let e = solve_energy(&["--delta", "1", "--omega", "1", "--g", "0", "--epsilon", "1"]);
    assert!((e + 0.7071067812).abs() < 1e-8, "{e}");
}

#[test]
fn solve_zero_splitting() {
    let e = solve_energy(&["--delta", "0", "--omega", "1", "--g", "0.7", "--epsilon", "0.4"]);
    assert!((e + 0.69).abs() < 1e-8, "{e}");
}

#[test]
fn solve_with_oracle_column() {
    let out = aqrm(&["solve", "--header", "--delta", "1", "--omega", "1", "--g", "1", "--epsilon", "0.5", "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let d = field(lines.next().unwrap(), header, "deviation");
    assert!((0.0..=0.02).contains(&d), "{d}");
}

#[test]
fn negative_values_are_accepted() {
    let e = solve_energy(&["--g", "-0.7", "--delta", "0", "--epsilon", "-0.4"]);
    assert!((e + 0.69).abs() < 1e-8, "{e}");
}

#[test]
fn stdout_header_is_optional() {
    let out = aqrm(&["solve", "--g", "0.2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(!text.starts_with("delta"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(aqrm(&["solve", "--gama", "1"]).status.code(), Some(64));
    assert_eq!(aqrm(&["solve", "--omega", "0"]).status.code(), Some(64));
    assert_eq!(aqrm(&["sweep", "--axis", "g", "--start", "0", "--stop", "1", "--steps", "1"]).status.code(), Some(64));
    assert_eq!(aqrm(&["sweep", "--axis", "q"]).status.code(), Some(64));
    assert_eq!(aqrm(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(aqrm(&["solve", "--config", "/nonexistent.cfg"]).status.code(), Some(64));
    assert_eq!(aqrm(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("run.csv");
    fs::write(&cfg, format!("axis = g\nstart = 0\nstop = 1\nsteps = 5\nepsilon = 3\nout = {}\n", out.display())).unwrap();
    let status = aqrm(&["sweep", "--config", cfg.to_str().unwrap(), "--epsilon", "0", "--steps", "3"]).status;
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(field(rows[0], header, "epsilon"), 0.0);
}

#[test]
fn bad_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "axis = g\ngama = 0.1\n").unwrap();
    let out = aqrm(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2") && err.contains("`gamma`"), "{err}");
}

#[test]
fn mismatched_recipe_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("map.cfg");
    fs::write(&cfg, "mode = gamma-map\n").unwrap();
    assert_eq!(aqrm(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn sweep_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let args = [
            "sweep", "--epsilon", "1", "--axis", "g", "--start", "0", "--stop", "2", "--steps", "11", "--exact",
            "--fixed-weight", "--threads", threads, "--out", path.to_str().unwrap(),
        ];
        assert_eq!(aqrm(&args).status.code(), Some(0));
        fs::read(path).unwrap()
    };
    let a = run("a.csv", "1");
    assert_eq!(a, run("b.csv", "1"));
    assert_eq!(a, run("c.csv", "2"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("delta,omega,g,epsilon,alpha"));
    assert!(text.lines().next().unwrap().ends_with("deviation_fixed"));
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn gamma_map_command() {
    let out = aqrm(&["gamma-map", "--header", "--delta-steps", "3", "--epsilon-steps", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("delta,omega,epsilon,g,gamma_opt"));
}

#[test]
fn verify_quick_passes() {
    let out = aqrm(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("property,cases,failures,worst,tolerance,status"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));
}
