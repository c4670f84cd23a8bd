//! The `biopepa` binary: exit codes, output routing and CSV shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn model_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models/camp_pka_mapk.biopepa")
}

fn biopepa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biopepa")).args(args).output().expect("binary runs")
}

const TOY: &str = "k = 1;\nlocation c : size = 1, kind = compartment;\nkineticLawOf r : fMA(k);\n\
                   A = r << A@c;\nB = r >> B@c;\nratio = A@c / B@c;\nA@c[10] <*> B@c[0]";

#[test]
fn check_reports_static_errors_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.biopepa");
    std::fs::write(&path, "k = 1;\nkineticLawOf r : fMA(k);\nA = r << A@nowhere;\nA@nowhere[1]").unwrap();
    let out = biopepa(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.lines().all(|l| l.starts_with("ERROR ") || l.starts_with("WARNING ")), "{stderr}");
    assert!(stderr.contains("UNDEFINED_LOCATION"));
}

#[test]
fn missing_file_and_bad_flags_exit_2() {
    assert_eq!(biopepa(&["check", "/nonexistent/model.biopepa"]).status.code(), Some(2));
    let path = model_path();
    let path = path.to_str().unwrap();
    assert_eq!(biopepa(&["simulate", path, "--method", "euler", "--stop", "1", "--points", "2"]).status.code(), Some(2));
    assert_eq!(biopepa(&["simulate", path, "--method", "ssa", "--stop", "1", "--points", "1"]).status.code(), Some(2));
    let out = biopepa(&["simulate", path, "--method", "ode-rk4", "--stop", "1", "--points", "2", "--set", "Nope=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UNKNOWN_OVERRIDE"));
}

#[test]
fn ode_output_to_file_with_species_selection() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let path = model_path();
    let out = biopepa(&[
        "simulate",
        path.to_str().unwrap(),
        "--method",
        "ode-dopri",
        "--stop",
        "100",
        "--points",
        "11",
        "--species",
        "MAPK_active@cyto,MAPK_active_fraction",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "time,MAPK_active@cyto,MAPK_active_fraction");
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[1], "0,0,0");
    assert!(lines[11].starts_with("100,"));
}

#[test]
fn ensemble_columns_and_undefined_observables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toy.biopepa");
    std::fs::write(&path, TOY).unwrap();
    let out = biopepa(&["simulate", path.to_str().unwrap(), "--method", "nrm", "--stop", "2", "--points", "3", "--runs", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "time,A@c:mean,A@c:std,B@c:mean,B@c:std,ratio:mean,ratio:std");
    assert_eq!(lines.next().unwrap(), "0,10,0,0,0,,");
    assert!(String::from_utf8_lossy(&out.stderr).contains("WARNING DIVISION_BY_ZERO"));
}
