//! Solution files: the converged triple in a form that reloads bit-exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};
use stagflow_core::diagnostics::strip_margin_report;
use stagflow_core::field_ops::residual;
use stagflow_core::solver::{ContinuationStep, ResidualNorms, SolveReport};
use stagflow_core::spectral::{sample_points, BracketField, FieldSamples, FlowLineFamily, Order, SGrid, ThetaSeries};
use stagflow_core::Complex64;

use crate::error::{CliError, Result};
use crate::jsonfmt;
use crate::problem::{Numerics, ProblemFile, FORMAT_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexArray {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridInfo {
    #[serde(rename = "K")]
    pub k_modes: usize,
    #[serde(rename = "N")]
    pub n_radial: usize,
    pub s_nodes: Vec<f64>,
    pub theta_nodes: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualInfo {
    pub interior: f64,
    pub boundary: f64,
    pub cokernel: f64,
}

impl From<ResidualNorms> for ResidualInfo {
    fn from(r: ResidualNorms) -> Self {
        ResidualInfo {
            interior: r.interior,
            boundary: r.boundary,
            cokernel: r.cokernel,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepInfo {
    pub t: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

impl From<&ContinuationStep> for StepInfo {
    fn from(s: &ContinuationStep) -> Self {
        StepInfo {
            t: s.t,
            iterations: s.iterations,
            residual: s.residual,
            converged: s.converged,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormsInfo {
    /// `null` when the weighted norm diverges.
    pub j_norm: Option<f64>,
    pub r_distance: f64,
    pub p_norm: f64,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// `R`, `p`, the leading coefficients `v̂_k` and the remainder smooth factor
/// `h - v` at the collocation points, plus diagnostics and the problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub format_version: u32,
    pub converged: bool,
    pub iterations: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub p: [f64; 2],
    /// `v̂_k` for `k = -K..=K`.
    pub leading: ComplexArray,
    /// `h(s_i, θ_j) - v(θ_j)`, one row per radial node.
    pub remainder: Vec<Vec<f64>>,
    pub grid: GridInfo,
    /// Residual of the stored solution as reloaded.
    pub residual: ResidualInfo,
    pub residual_history: Vec<ResidualInfo>,
    pub continuation: Vec<StepInfo>,
    /// Decay width of the trace coefficients; `null` when unbounded.
    pub analyticity_width: Option<f64>,
    pub norms: NormsInfo,
    pub numerics: Numerics,
    pub problem: ProblemFile,
}

impl SolutionFile {
    pub fn from_report(problem: &ProblemFile, report: &SolveReport) -> Result<Self> {
        let fam = &report.solution;
        let grid = fam.a.grid();
        let k = fam.a.k_max();
        let leading = fam.a.leading();
        let v: Vec<f64> = leading.samples().iter().map(|c| c.re).collect();
        let h = fam.a.to_samples();
        let remainder = (0..h.n_s)
            .map(|i| h.row(i).iter().zip(&v).map(|(hv, vv)| hv.re - vv).collect())
            .collect();
        let mut file = SolutionFile {
            format_version: FORMAT_VERSION,
            converged: report.converged,
            iterations: report.iterations,
            r: fam.r,
            p: fam.p,
            leading: ComplexArray {
                re: leading.coeffs().iter().map(|c| c.re).collect(),
                im: leading.coeffs().iter().map(|c| c.im).collect(),
            },
            remainder,
            grid: GridInfo {
                k_modes: k,
                n_radial: grid.len(),
                s_nodes: grid.nodes().to_vec(),
                theta_nodes: sample_points(k),
            },
            residual: report.final_residual().into(),
            residual_history: report.residual_history.iter().map(|r| (*r).into()).collect(),
            continuation: report.steps.iter().map(StepInfo::from).collect(),
            analyticity_width: finite(report.analyticity_width_of_trace),
            norms: NormsInfo {
                j_norm: finite(report.norms.j_norm),
                r_distance: report.norms.r_distance,
                p_norm: report.norms.p_norm,
            },
            numerics: problem.numerics,
            problem: problem.clone(),
        };
        // the stored residual belongs to the solution as it will be reloaded
        file.residual = file.recompute_residual()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file: SolutionFile = jsonfmt::read_file(path)?;
        if file.format_version != FORMAT_VERSION {
            return Err(CliError::invalid(format!(
                "{}: format_version: expected {FORMAT_VERSION}, got {}",
                path.display(),
                file.format_version
            )));
        }
        file.family().map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        jsonfmt::write_file(path, self)
    }

    /// Rebuilds `(R, p, a)` from the stored fields.
    pub fn family(&self) -> Result<FlowLineFamily> {
        let k = self.grid.k_modes;
        let n = self.grid.n_radial;
        let n_theta = 2 * k + 1;
        if self.leading.re.len() != n_theta || self.leading.im.len() != n_theta {
            return Err(CliError::invalid(format!("leading: expected {n_theta} coefficients")));
        }
        if self.remainder.len() != n || self.remainder.iter().any(|r| r.len() != n_theta) {
            return Err(CliError::invalid(format!("remainder: expected {n} rows of {n_theta} values")));
        }
        let grid = SGrid::new(n)?;
        if grid.nodes().iter().zip(&self.grid.s_nodes).any(|(a, b)| (a - b).abs() > 1e-15)
            || self.grid.s_nodes.len() != n
        {
            return Err(CliError::invalid("grid.s_nodes: not the Chebyshev nodes of this N"));
        }
        let coeffs = self
            .leading
            .re
            .iter()
            .zip(&self.leading.im)
            .map(|(a, b)| Complex64::new(*a, *b))
            .collect();
        let leading = ThetaSeries::from_coeffs(coeffs)?;
        let v = leading.samples();
        let mut smp = FieldSamples::zeros(n, n_theta);
        for (i, row) in self.remainder.iter().enumerate() {
            for ((out, w), vv) in smp.row_mut(i).iter_mut().zip(row).zip(&v) {
                *out = Complex64::new(w + vv.re, 0.0);
            }
        }
        Ok(FlowLineFamily {
            r: self.r,
            p: self.p,
            a: BracketField::from_samples(Order::HALF, &grid, &smp),
        })
    }

    /// Residual of the reloaded solution against the embedded problem.
    pub fn recompute_residual(&self) -> Result<ResidualInfo> {
        let fam = self.family()?;
        let f = self.problem.vorticity_on(fam.a.grid())?;
        let b = self.problem.boundary_curve()?;
        let cfg = self.problem.config();
        let res = residual(&f, &b, &fam, &cfg.eval_options())?;
        Ok(ResidualInfo {
            interior: res.interior_raw_sup,
            boundary: res.boundary_sup(),
            cokernel: res.cokernel_magnitude(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripInfo {
    pub excursion: f64,
    pub trace_width: Option<f64>,
    pub offset_width: Option<f64>,
    pub worst_ratio: f64,
    pub pass: bool,
}

/// Convergence summary written next to a solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub format_version: u32,
    pub converged: bool,
    pub iterations: usize,
    pub residual_history: Vec<ResidualInfo>,
    pub continuation: Vec<StepInfo>,
    pub norms: NormsInfo,
    pub analyticity_width: Option<f64>,
    /// `null` when the boundary map cannot be evaluated.
    pub strip: Option<StripInfo>,
}

impl ReportFile {
    pub fn new(sol: &SolutionFile) -> Result<Self> {
        let fam = sol.family()?;
        let b = sol.problem.boundary_curve()?;
        let strip = strip_margin_report(&fam, &b, &sol.problem.config()).ok().map(|m| StripInfo {
            excursion: m.excursion,
            trace_width: finite(m.trace_width),
            offset_width: finite(m.offset_width),
            worst_ratio: m.report.worst_ratio,
            pass: m.report.pass,
        });
        Ok(ReportFile {
            format_version: FORMAT_VERSION,
            converged: sol.converged,
            iterations: sol.iterations,
            residual_history: sol.residual_history.clone(),
            continuation: sol.continuation.clone(),
            norms: sol.norms,
            analyticity_width: sol.analyticity_width,
            strip,
        })
    }
}
