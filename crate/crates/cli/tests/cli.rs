use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use stagflow::SolutionFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stagflow"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

/// Cosine coefficients of the unit circle centred at `(eps, 0)` seen from the origin.
fn translated_cos(eps: f64, terms: usize) -> Vec<f64> {
    let m = 256;
    let b = |phi: f64| eps * phi.cos() + (1.0 - eps * eps * phi.sin().powi(2)).sqrt();
    (0..terms)
        .map(|k| {
            let sum: f64 = (0..m)
                .map(|j| {
                    let phi = 2.0 * PI * j as f64 / m as f64;
                    b(phi) * (k as f64 * phi).cos()
                })
                .sum();
            if k == 0 { sum / m as f64 } else { 2.0 * sum / m as f64 }
        })
        .collect()
}

fn problem(dir: &Path, name: &str, boundary_cos: Vec<f64>, numerics: Value) -> PathBuf {
    let doc = json!({
        "format_version": 1,
        "vorticity": {"type": "constant", "value": 4.0},
        "boundary": {"fourier_cos": boundary_cos, "fourier_sin": [], "tau": 1.0},
        "numerics": numerics,
    });
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    path
}

fn solve(dir: &Path, prob: &Path, out: &str) -> (Output, PathBuf) {
    let out = dir.join(out);
    let o = run(&["solve", "--problem", prob.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    (o, out)
}

fn small() -> Value {
    json!({"K": 16, "N": 32})
}

#[test]
fn solve_disk() {
    let dir = scratch("disk");
    let prob = problem(&dir, "disk.json", vec![1.0], small());
    let (o, out) = solve(&dir, &prob, "sol.json");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let sol = SolutionFile::load(&out).unwrap();
    assert!(sol.converged);
    assert_eq!(sol.iterations, 0);
    assert!((sol.r - 1.0).abs() < 1e-10);
    assert!(sol.p[0].hypot(sol.p[1]) < 1e-10);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"R\": 1.0000000000000000e0"));
    assert_eq!(sol.analyticity_width, None);
}

#[test]
fn solve_translated_disk() {
    let dir = scratch("translated");
    let prob = problem(&dir, "p.json", translated_cos(0.1, 24), small());
    let (o, out) = solve(&dir, &prob, "sol.json");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let sol = SolutionFile::load(&out).unwrap();
    assert!((sol.p[0] - 0.1).abs() < 1e-8 && sol.p[1].abs() < 1e-8);
    assert!((sol.r - 1.0).abs() < 1e-8);
}

#[test]
fn invalid_boundary_is_an_input_error() {
    let dir = scratch("bad-boundary");
    let prob = problem(&dir, "p.json", vec![0.5, 1.0], small());
    let (o, out) = solve(&dir, &prob, "sol.json");
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("boundary"));
    assert!(!out.exists());
}

#[test]
fn unknown_key_is_reported_with_location() {
    let dir = scratch("unknown-key");
    let path = dir.join("p.json");
    fs::write(
        &path,
        "{\n  \"format_version\": 1,\n  \"vorticity\": {\"type\": \"constant\", \"value\": 4},\n  \"boundary\": {\"fourier_cos\": [1], \"tau\": 1},\n  \"numerix\": {}\n}\n",
    )
    .unwrap();
    let (o, _) = solve(&dir, &path, "sol.json");
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("numerix") && err.contains("line 5"), "{err}");
}

#[test]
fn non_convergence_exits_2_and_writes_partial() {
    let dir = scratch("no-conv");
    let prob = problem(&dir, "p.json", translated_cos(0.1, 24), json!({"K": 16, "N": 32, "max_iter": 1}));
    let (o, out) = solve(&dir, &prob, "sol.json");
    assert_eq!(code(&o), 2);
    let sol = SolutionFile::load(&out).unwrap();
    assert!(!sol.converged);
    assert_eq!(sol.iterations, 1);
}

#[test]
fn solution_round_trip_reproduces_residual() {
    let dir = scratch("round-trip");
    let prob = problem(&dir, "p.json", translated_cos(0.05, 24), small());
    let (o, out) = solve(&dir, &prob, "sol.json");
    assert_eq!(code(&o), 0);
    let sol = SolutionFile::load(&out).unwrap();
    let again = sol.recompute_residual().unwrap();
    assert!((again.interior - sol.residual.interior).abs() <= 1e-12);
    assert!((again.boundary - sol.residual.boundary).abs() <= 1e-12);
    let copy = dir.join("copy.json");
    sol.save(&copy).unwrap();
    assert_eq!(fs::read(&copy).unwrap(), fs::read(&out).unwrap());
}

#[test]
fn repeated_solves_are_byte_identical() {
    let dir = scratch("determinism");
    let prob = problem(&dir, "p.json", translated_cos(0.1, 24), small());
    let (_, a) = solve(&dir, &prob, "a.json");
    let (_, b) = solve(&dir, &prob, "b.json");
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn extra_outputs_are_written() {
    let dir = scratch("outputs");
    let doc = json!({
        "format_version": 1,
        "vorticity": {"type": "polynomial", "coefficients": [4.0, 0.1]},
        "boundary": {"fourier_cos": [1.0], "tau": 1.0},
        "numerics": {"K": 8, "N": 24},
        "outputs": ["solution", "report", "flowlines", "stream"],
    });
    let prob = dir.join("p.json");
    fs::write(&prob, doc.to_string()).unwrap();
    let (o, out) = solve(&dir, &prob, "sol.json");
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.join("sol.report.json")).unwrap()).unwrap();
    assert_eq!(report["converged"], json!(true));
    assert_eq!(report["strip"]["pass"], json!(true));
    assert_eq!(fs::read_to_string(dir.join("sol.flowlines.csv")).unwrap().lines().count(), 1 + 4 * 17);
    assert_eq!(fs::read_to_string(dir.join("sol.stream.csv")).unwrap().lines().count(), 1 + 64 * 64);
    assert!(out.exists());
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn flowlines_of_reference_and_translated() {
    let dir = scratch("flowlines");
    let prob = problem(&dir, "p.json", vec![1.0], small());
    let (_, sol) = solve(&dir, &prob, "sol.json");
    let csv = dir.join("f.csv");
    let o = run(&["flowlines", "--solution", sol.to_str().unwrap(), "--levels", "0.25,1.0", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(&csv).unwrap().starts_with("level,theta,x,y\n"));
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 2 * 33);
    for r in &rows {
        let want = r[0].sqrt();
        assert!((r[2].hypot(r[3]) - want).abs() < 1e-14);
    }

    let prob = problem(&dir, "t.json", translated_cos(0.1, 24), small());
    let (_, sol) = solve(&dir, &prob, "tsol.json");
    let o = run(&["flowlines", "--solution", sol.to_str().unwrap(), "--levels", "1.0", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for r in csv_rows(&csv) {
        assert!(((r[2] - 0.1).hypot(r[3]) - 1.0).abs() < 1e-8);
    }
    let o = run(&["flowlines", "--solution", sol.to_str().unwrap(), "--levels", "1.5", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn stream_of_reference_and_translated() {
    let dir = scratch("stream");
    let prob = problem(&dir, "p.json", vec![1.0], small());
    let (_, sol) = solve(&dir, &prob, "sol.json");
    let csv = dir.join("s.csv");
    let o = run(&["stream", "--solution", sol.to_str().unwrap(), "--nx", "64", "--ny", "64", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut outside = 0;
    for line in text.lines().skip(1) {
        let v: Vec<&str> = line.split(',').collect();
        let (x, y): (f64, f64) = (v[0].parse().unwrap(), v[1].parse().unwrap());
        if v[2] == "nan" {
            outside += 1;
            assert!(x * x + y * y > 1.0 - 1e-12);
        } else {
            let psi: f64 = v[2].parse().unwrap();
            assert!((psi - (x * x + y * y)).abs() < 1e-10);
        }
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains(&format!("outside points: {outside}")));

    let prob = problem(&dir, "t.json", translated_cos(0.1, 24), small());
    let (_, sol) = solve(&dir, &prob, "tsol.json");
    let js = dir.join("s.json");
    let o = run(&["stream", "--solution", sol.to_str().unwrap(), "--nx", "3", "--ny", "3", "--out", js.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&js).unwrap()).unwrap();
    assert!((doc["psi"][1][1].as_f64().unwrap() - 0.01).abs() < 1e-8);
    assert!(doc["psi"][0][0].is_null());

    let o = run(&["stream", "--solution", sol.to_str().unwrap(), "--nx", "1", "--out", js.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "cokernel"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["pass"], json!(true));
    assert_eq!(doc["seed"], json!(0));
    let r = &doc["reports"][0];
    for key in ["name", "seed", "samples", "worst_ratio", "bound", "pass"] {
        assert!(!r[key].is_null(), "{key}");
    }

    let o = run(&["verify", "--suite", "hardy", "--seed", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));

    let o = run(&["verify", "--suite", "nosuchsuite"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_is_reproducible() {
    let a = run(&["verify", "--suite", "cokernel", "--seed", "3"]);
    let b = run(&["verify", "--suite", "cokernel", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_over_boundary_scale() {
    let dir = scratch("sweep");
    let prob = problem(&dir, "p.json", vec![1.0], json!({"K": 8, "N": 24}));
    let out = dir.join("runs");
    let o = run(&["sweep", "--problem", prob.to_str().unwrap(), "--param", "/boundary/fourier_cos/0", "--values", "1,1.5", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let rows: Vec<Vec<&str>> = summary.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    let r: f64 = rows[1][4].parse().unwrap();
    assert!((r - 1.5).abs() < 1e-9);
    assert!(out.join("solution_001.json").exists());

    let o = run(&["sweep", "--problem", prob.to_str().unwrap(), "--param", "/boundary/nothing", "--values", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&run(&["solve"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
