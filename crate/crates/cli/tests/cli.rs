use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn sctk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sctk")).args(args).output().unwrap()
}

fn surfaces() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../surfaces")
}

fn surface(name: &str) -> String {
    surfaces().join(name).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn expand_l3_gives_ten_rows_and_passing_sandwich() {
    let o = sctk(&["expand", "--surface", &surface("l3.json"), "--theta", "pi", "--terms", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# sctk-format v1"));
    assert!(lines.next().unwrap().starts_with("n,x_a,x_b,y_a,y_b"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    assert!(rows[2].starts_with("2,22,0,7,0,"));
    assert!(stderr(&o).contains("PASS sandwich"));
}

#[test]
fn mink_l3_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("mink.json");
    let o = sctk(&["mink", "--surface", &surface("l3.json"), "--radius", "20", "--format", "json", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(v["lower_bound"].as_f64().unwrap() >= 0.99);
    assert!((v["upper_bound"].as_f64().unwrap() - 3.0 * std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(v["surface"]["volume"], "3");
}

#[test]
fn verify_torus_passes() {
    let o = sctk(&["verify", "--surface", &surface("torus.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let err = stderr(&o);
    for name in ["vorobets", "symmetry", "sandwich", "height", "domination", "mink"] {
        assert!(err.contains(&format!("PASS {name}:")), "{name} missing from {err}");
    }
    assert!(!err.contains("FAIL"));
}

#[test]
fn verify_golden_l_passes() {
    let o = sctk(&["verify", "--surface", &surface("golden-l.json"), "--theta", "sqrt(2)", "--word-length", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn enumerate_columns_and_exact_strings() {
    let o = sctk(&["enumerate", "--surface", &surface("golden-l.json"), "--radius", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().nth(1), Some("x_a,x_b,y_a,y_b,norm_approx,multiplicity"));
    assert!(text.lines().any(|l| l.starts_with("1/2,1/2,0,0,")));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args = ["verify", "--surface", &surface("l3.json"), "--format", "json"];
    let a = sctk(&args);
    let b = sctk(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = sctk(&["--threads", "1", "verify", "--surface", &surface("l3.json"), "--format", "json"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn growth_csv_has_plot_columns() {
    let o = sctk(&["growth", "--surface", &surface("torus.json"), "--theta", "sqrt(2)", "--terms", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().nth(1), Some("n,q,loglog_q_over_n"));
    assert!(text.lines().any(|l| l.starts_with("3,5,")));
}

#[test]
fn malformed_theta_is_a_parse_error() {
    let o = sctk(&["expand", "--surface", &surface("torus.json"), "--theta", "1+1*sqrt(5)/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("theta"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn bad_permutation_names_the_field() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", r#"{"kind": "origami", "n": 3, "h": [[1, 2]], "v": [[1, 4]]}"#);
    let o = sctk(&["enumerate", "--surface", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`v`"), "{}", stderr(&o));
}

#[test]
fn disconnected_origami_is_invalid() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "split.json", r#"{"kind": "origami", "n": 2, "h": [], "v": []}"#);
    let o = sctk(&["enumerate", "--surface", &p]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not connected"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_io_error() {
    let o = sctk(&["enumerate", "--surface", "/nonexistent/surface.json"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn nonpositive_radius_is_rejected() {
    let o = sctk(&["enumerate", "--surface", &surface("torus.json"), "--radius", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("radius"));
}

#[test]
fn run_file_resolves_surface_relative_to_itself() {
    let dir = TempDir::new().unwrap();
    std::fs::copy(surfaces().join("l3.json"), dir.path().join("l3.json")).unwrap();
    let run = write(&dir, "run.json", r#"{"command": "expand", "surface": "l3.json", "theta": "e", "terms": 6, "format": "json"}"#);
    let o = sctk(&["run", &run]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["expansion"]["records"].as_array().unwrap().len(), 6);
    assert_eq!(v["sandwich"]["violations"], 0);
}

#[test]
fn run_file_syntax_error_reports_position() {
    let dir = TempDir::new().unwrap();
    let run = write(&dir, "run.json", "{\"command\": \"expand\",\n \"surface\": }");
    let o = sctk(&["run", &run]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}
