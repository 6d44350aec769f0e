//! Subcommand implementations; `main` only maps results to exit codes.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use stagflow_core::diagnostics::{check_cokernel, check_hardy, check_linear_isomorphism, PropertyReport};
use stagflow_core::solver::{reconstruct_stream, CartesianGrid, SolveConfig, SolveReport, Solver};
use stagflow_core::spectral::{sample_points, FlowLineFamily};

use crate::error::{CliError, Result};
use crate::jsonfmt::{self, fmt_f64};
use crate::problem::{Output, ProblemFile, FORMAT_VERSION};
use crate::solution::{ReportFile, SolutionFile};

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Numerical failure; partial results were written.
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::NotConverged => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

const DEFAULT_LEVELS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(suffix)
}

/// Runs the continuation solve of a parsed problem.
pub fn solve_problem(problem: &ProblemFile) -> Result<SolveReport> {
    let solver = Solver::new(problem.config())?;
    let f = problem.vorticity_on(solver.grid())?;
    let b = problem.boundary_curve()?;
    Ok(solver.continuation_report(&f, &b)?)
}

pub fn cmd_solve(problem: &Path, out: &Path) -> Result<Status> {
    let problem = ProblemFile::load(problem)?;
    let report = solve_problem(&problem)?;
    let file = SolutionFile::from_report(&problem, &report)?;
    let fam = file.family()?;
    for output in &problem.outputs {
        match output {
            Output::Solution => file.save(out)?,
            Output::Report => jsonfmt::write_file(&sibling(out, "report.json"), &ReportFile::new(&file)?)?,
            Output::Flowlines => write_text(&sibling(out, "flowlines.csv"), &flowlines_csv(&fam, &DEFAULT_LEVELS)?)?,
            Output::Stream => {
                let grid = CartesianGrid::covering(&fam, 64, 64)?;
                write_text(&sibling(out, "stream.csv"), &stream_csv(&fam, &grid).0)?;
            }
        }
    }
    log::info!(
        "R = {}, p = ({}, {}), {} iterations, residual {:.3e}",
        file.r,
        file.p[0],
        file.p[1],
        file.iterations,
        file.residual.interior.max(file.residual.boundary)
    );
    Ok(if report.converged { Status::Success } else { Status::NotConverged })
}

/// `level,theta,x,y` with `2K+1` rows per level.
pub fn flowlines_csv(fam: &FlowLineFamily, levels: &[f64]) -> Result<String> {
    if let Some(bad) = levels.iter().find(|l| !(**l > 0.0 && **l <= 1.0)) {
        return Err(CliError::invalid(format!("levels: {bad} is outside (0, 1]")));
    }
    let thetas = sample_points(fam.a.k_max());
    let mut csv = String::from("level,theta,x,y\n");
    for &level in levels {
        for &theta in &thetas {
            let [x, y] = fam.point(level, theta);
            writeln!(csv, "{},{},{},{}", fmt_f64(level), fmt_f64(theta), fmt_f64(x), fmt_f64(y)).expect("string write");
        }
    }
    Ok(csv)
}

pub fn cmd_flowlines(solution: &Path, levels: &[f64], out: &Path) -> Result<()> {
    if levels.is_empty() {
        return Err(CliError::invalid("levels: at least one level is required"));
    }
    let fam = SolutionFile::load(solution)?.family()?;
    write_text(out, &flowlines_csv(&fam, levels)?)
}

/// `x,y,psi` rows with `nan` outside the boundary; also returns the number
/// of outside points.
pub fn stream_csv(fam: &FlowLineFamily, grid: &CartesianGrid) -> (String, usize) {
    let field = reconstruct_stream(fam, grid);
    let mut csv = String::from("x,y,psi\n");
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let psi = field.get(i, j).unwrap_or(f64::NAN);
            writeln!(csv, "{},{},{}", fmt_f64(grid.x(i)), fmt_f64(grid.y(j)), fmt_f64(psi)).expect("string write");
        }
    }
    (csv, field.outside_count())
}

#[derive(Serialize)]
struct StreamJson {
    format_version: u32,
    nx: usize,
    ny: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    /// `psi[j][i]` at `(x[i], y[j])`; `null` outside.
    psi: Vec<Vec<Option<f64>>>,
    outside_count: usize,
}

pub const MAX_RESOLUTION: usize = 4096;

/// Writes `ψ` on an `nx × ny` grid covering the domain; returns the number
/// of points outside it.
pub fn cmd_stream(solution: &Path, nx: usize, ny: usize, out: &Path, format: Format) -> Result<usize> {
    for (name, n) in [("nx", nx), ("ny", ny)] {
        if !(2..=MAX_RESOLUTION).contains(&n) {
            return Err(CliError::invalid(format!("{name}: must lie in [2, {MAX_RESOLUTION}], got {n}")));
        }
    }
    let fam = SolutionFile::load(solution)?.family()?;
    let grid = CartesianGrid::covering(&fam, nx, ny)?;
    let outside = match format {
        Format::Csv => {
            let (csv, outside) = stream_csv(&fam, &grid);
            write_text(out, &csv)?;
            outside
        }
        Format::Json => {
            let field = reconstruct_stream(&fam, &grid);
            let doc = StreamJson {
                format_version: FORMAT_VERSION,
                nx,
                ny,
                x: (0..nx).map(|i| grid.x(i)).collect(),
                y: (0..ny).map(|j| grid.y(j)).collect(),
                psi: (0..ny).map(|j| (0..nx).map(|i| field.get(i, j)).collect()).collect(),
                outside_count: field.outside_count(),
            };
            jsonfmt::write_file(out, &doc)?;
            field.outside_count()
        }
    };
    log::info!("{outside} of {} points lie outside the domain", nx * ny);
    Ok(outside)
}

pub const HARDY_ALPHAS: [f64; 6] = [-1.0, -0.5, 0.0, 0.25, 0.75, 1.0];

#[derive(Serialize)]
struct ReportJson<'a> {
    name: &'a str,
    seed: u64,
    samples: usize,
    worst_ratio: f64,
    bound: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    format_version: u32,
    suite: &'a str,
    seed: u64,
    pass: bool,
    reports: Vec<ReportJson<'a>>,
}

/// Runs a named diagnostics suite.
pub fn run_suite(suite: &str, seed: u64) -> Result<Vec<PropertyReport>> {
    let mut out = Vec::new();
    let all = suite == "all";
    if !matches!(suite, "hardy" | "cokernel" | "linear" | "all") {
        return Err(CliError::invalid(format!(
            "suite: unknown suite `{suite}` (expected hardy, cokernel, linear or all)"
        )));
    }
    if all || suite == "hardy" {
        for alpha in HARDY_ALPHAS {
            out.push(check_hardy(alpha, 100, seed)?);
        }
    }
    if all || suite == "cokernel" {
        out.push(check_cokernel(100, 0.1, seed)?);
    }
    if all || suite == "linear" {
        let cfg = SolveConfig {
            k_modes: 16,
            n_radial: 48,
            ..SolveConfig::default()
        };
        let iso = check_linear_isomorphism(200, &cfg, seed)?;
        log::info!("empirical stability constant {:.6e}", iso.stability_constant);
        let boundary = PropertyReport::new(
            format!("linear-boundary(K={},N={})", cfg.k_modes, cfg.n_radial),
            seed,
            iso.report.samples,
            iso.worst_boundary,
            1e-10,
            0.0,
        );
        out.push(iso.report);
        out.push(boundary);
    }
    Ok(out)
}

/// Writes the suite result to `sink`; returns whether every check passed.
pub fn cmd_verify(suite: &str, seed: u64, format: Format, sink: &mut impl Write) -> Result<bool> {
    let reports = run_suite(suite, seed)?;
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        log::info!("{}", r.line());
    }
    let text = match format {
        Format::Json => jsonfmt::to_string(&VerifyJson {
            format_version: FORMAT_VERSION,
            suite,
            seed,
            pass,
            reports: reports
                .iter()
                .map(|r| ReportJson {
                    name: &r.name,
                    seed: r.seed,
                    samples: r.samples,
                    worst_ratio: r.worst_ratio,
                    bound: r.bound,
                    pass: r.pass,
                })
                .collect(),
        }),
        Format::Csv => {
            let mut csv = String::from("name,seed,samples,worst_ratio,bound,pass\n");
            for r in &reports {
                writeln!(
                    csv,
                    "\"{}\",{},{},{},{},{}",
                    r.name,
                    r.seed,
                    r.samples,
                    fmt_f64(r.worst_ratio),
                    fmt_f64(r.bound),
                    r.pass
                )
                .expect("string write");
            }
            csv
        }
    };
    sink.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    Ok(pass)
}

/// Solves the problem once per value of the field at JSON pointer `param`,
/// writing `solution_NNN.json` files and `summary.csv` into `out_dir`.
pub fn cmd_sweep(problem: &Path, param: &str, values: &[f64], out_dir: &Path) -> Result<Status> {
    if values.is_empty() {
        return Err(CliError::invalid("values: at least one value is required"));
    }
    let base: serde_json::Value = jsonfmt::read_file(problem)?;
    if !base.pointer(param).is_some_and(|v| v.is_number()) {
        return Err(CliError::invalid(format!("param: `{param}` does not name a number in {}", problem.display())));
    }
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_owned(),
        source,
    })?;
    let mut summary = String::from("index,value,converged,iterations,R,p_x,p_y,interior,boundary,file\n");
    let mut status = Status::Success;
    for (idx, &value) in values.iter().enumerate() {
        let mut doc = base.clone();
        *doc.pointer_mut(param).expect("checked above") = serde_json::json!(value);
        let prob: ProblemFile = serde_json::from_value(doc).map_err(|source| CliError::Json {
            path: problem.to_owned(),
            source,
        })?;
        prob.validate()
            .map_err(|e| CliError::invalid(format!("{param} = {value}: {e}")))?;
        let name = format!("solution_{idx:03}.json");
        match solve_problem(&prob) {
            Ok(report) => {
                let file = SolutionFile::from_report(&prob, &report)?;
                file.save(&out_dir.join(&name))?;
                if !file.converged {
                    status = Status::NotConverged;
                }
                writeln!(
                    summary,
                    "{idx},{},{},{},{},{},{},{},{},{name}",
                    fmt_f64(value),
                    file.converged,
                    file.iterations,
                    fmt_f64(file.r),
                    fmt_f64(file.p[0]),
                    fmt_f64(file.p[1]),
                    fmt_f64(file.residual.interior),
                    fmt_f64(file.residual.boundary)
                )
                .expect("string write");
            }
            Err(e) if e.exit_code() == 2 => {
                log::warn!("{param} = {value}: {e}");
                status = Status::NotConverged;
                writeln!(summary, "{idx},{},false,,,,,,,", fmt_f64(value)).expect("string write");
            }
            Err(e) => return Err(e),
        }
    }
    write_text(&out_dir.join("summary.csv"), &summary)?;
    Ok(status)
}
