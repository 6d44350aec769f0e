//! Problem description files.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use stagflow_core::field_ops::BoundaryCurve;
use stagflow_core::solver::{JacobianMode, SolveConfig};
use stagflow_core::spectral::{SGrid, SGridFunction, ThetaSeries};
use stagflow_core::Complex64;

use crate::error::{CliError, Result};
use crate::jsonfmt;

pub const FORMAT_VERSION: u32 = 1;

/// Vorticity `F` as a function of `ψ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Vorticity {
    Constant { value: f64 },
    /// Samples of `F` at radii `s = √ψ`.
    RadialSamples { s_values: Vec<f64>, #[serde(rename = "F_values")] f_values: Vec<f64> },
    /// `F(ψ) = Σ c_j ψ^j`.
    Polynomial { coefficients: Vec<f64> },
}

/// `b(φ) = Σ_k fourier_cos[k] cos kφ + fourier_sin[k] sin kφ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boundary {
    pub fourier_cos: Vec<f64>,
    #[serde(default)]
    pub fourier_sin: Vec<f64>,
    pub tau: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JacobianName {
    FrozenReference,
    NewtonKrylov,
    FiniteDifferenceFull,
}

impl From<JacobianName> for JacobianMode {
    fn from(j: JacobianName) -> Self {
        match j {
            JacobianName::FrozenReference => JacobianMode::FrozenReference,
            JacobianName::NewtonKrylov => JacobianMode::NewtonKrylov,
            JacobianName::FiniteDifferenceFull => JacobianMode::FiniteDifferenceFull,
        }
    }
}

impl From<JacobianMode> for JacobianName {
    fn from(j: JacobianMode) -> Self {
        match j {
            JacobianMode::FrozenReference => JacobianName::FrozenReference,
            JacobianMode::NewtonKrylov => JacobianName::NewtonKrylov,
            JacobianMode::FiniteDifferenceFull => JacobianName::FiniteDifferenceFull,
        }
    }
}

/// Solver settings; every field is optional in the file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    #[serde(rename = "K")]
    pub k_modes: usize,
    #[serde(rename = "N")]
    pub n_radial: usize,
    pub gamma: f64,
    pub sigma: f64,
    pub m: u32,
    pub tol_residual: f64,
    pub max_iter: usize,
    pub damping: f64,
    pub continuation_steps: usize,
    pub jacobian_mode: JacobianName,
    pub degeneracy_tol: f64,
    pub dealias: bool,
}

impl Default for Numerics {
    fn default() -> Self {
        SolveConfig::default().into()
    }
}

impl From<SolveConfig> for Numerics {
    fn from(c: SolveConfig) -> Self {
        Numerics {
            k_modes: c.k_modes,
            n_radial: c.n_radial,
            gamma: c.gamma,
            sigma: c.sigma,
            m: c.m,
            tol_residual: c.tol_residual,
            max_iter: c.max_iter,
            damping: c.damping,
            continuation_steps: c.continuation_steps,
            jacobian_mode: c.jacobian_mode.into(),
            degeneracy_tol: c.degeneracy_tol,
            dealias: c.dealias,
        }
    }
}

impl From<Numerics> for SolveConfig {
    fn from(n: Numerics) -> Self {
        SolveConfig {
            k_modes: n.k_modes,
            n_radial: n.n_radial,
            gamma: n.gamma,
            sigma: n.sigma,
            m: n.m,
            tol_residual: n.tol_residual,
            max_iter: n.max_iter,
            damping: n.damping,
            continuation_steps: n.continuation_steps,
            jacobian_mode: n.jacobian_mode.into(),
            degeneracy_tol: n.degeneracy_tol,
            dealias: n.dealias,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Output {
    Solution,
    Report,
    Flowlines,
    Stream,
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Solution]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub format_version: u32,
    pub vorticity: Vorticity,
    pub boundary: Boundary,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self> {
        let p: ProblemFile = jsonfmt::read_file(path)?;
        p.validate().map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        Ok(p)
    }

    pub fn config(&self) -> SolveConfig {
        self.numerics.into()
    }

    /// Checks everything that does not need a solve.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::invalid(format!(
                "format_version: expected {FORMAT_VERSION}, got {}",
                self.format_version
            )));
        }
        let cfg = self.config();
        cfg.validate().map_err(|e| CliError::invalid(format!("numerics: {e}")))?;
        let b = self.boundary_curve()?;
        cfg.validate_for(&b).map_err(|e| CliError::invalid(format!("boundary.tau: {e}")))?;
        let grid = SGrid::new(cfg.n_radial)?;
        self.vorticity_on(&grid)?;
        Ok(())
    }

    pub fn boundary_curve(&self) -> Result<BoundaryCurve> {
        let Boundary { fourier_cos, fourier_sin, tau } = &self.boundary;
        if fourier_cos.is_empty() {
            return Err(CliError::invalid("boundary.fourier_cos: needs at least the mean term"));
        }
        if fourier_sin.first().is_some_and(|v| *v != 0.0) {
            return Err(CliError::invalid("boundary.fourier_sin: entry 0 multiplies sin 0 and must be 0"));
        }
        if fourier_cos.iter().chain(fourier_sin).any(|v| !v.is_finite()) {
            return Err(CliError::invalid("boundary: coefficients must be finite"));
        }
        let k = (fourier_cos.len().max(fourier_sin.len()) - 1).max(1);
        let series = ThetaSeries::from_cos_sin(k, fourier_cos, fourier_sin);
        BoundaryCurve::new(series, *tau).map_err(|e| CliError::invalid(format!("boundary: {e}")))
    }

    /// `F` at the nodes of `grid`.
    pub fn vorticity_on(&self, grid: &Arc<SGrid>) -> Result<SGridFunction> {
        match &self.vorticity {
            Vorticity::Constant { value } => {
                if !value.is_finite() {
                    return Err(CliError::invalid("vorticity.value: must be finite"));
                }
                Ok(SGridFunction::from_real_fn(grid.clone(), |_| *value))
            }
            Vorticity::Polynomial { coefficients } => {
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(CliError::invalid("vorticity.coefficients: need at least one finite value"));
                }
                Ok(SGridFunction::from_real_fn(grid.clone(), |s| {
                    let psi = s * s;
                    coefficients.iter().rev().fold(0.0, |acc, c| acc * psi + c)
                }))
            }
            Vorticity::RadialSamples { s_values, f_values } => {
                radial_samples(grid, s_values, f_values)
            }
        }
    }
}

fn radial_samples(grid: &Arc<SGrid>, s: &[f64], f: &[f64]) -> Result<SGridFunction> {
    if s.len() != f.len() {
        return Err(CliError::invalid(format!(
            "vorticity: s_values has {} entries but F_values has {}",
            s.len(),
            f.len()
        )));
    }
    if s.len() < 2 {
        return Err(CliError::invalid("vorticity.s_values: need at least 2 samples"));
    }
    if s.windows(2).any(|w| !(w[1] > w[0])) || s[0] < 0.0 || s[s.len() - 1] > 1.0 {
        return Err(CliError::invalid("vorticity.s_values: must increase strictly within [0, 1]"));
    }
    if s[0] != 0.0 || s[s.len() - 1] != 1.0 {
        return Err(CliError::invalid("vorticity.s_values: must include both 0 and 1"));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(CliError::invalid("vorticity.F_values: must be finite"));
    }
    let nodes = grid.nodes();
    if s.len() == nodes.len() && s.iter().zip(nodes).all(|(a, b)| (a - b).abs() <= 1e-15) {
        let values = f.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        return Ok(SGridFunction::new(grid.clone(), values)?);
    }
    let interp = FloaterHormann::new(s, f, 3);
    Ok(SGridFunction::from_real_fn(grid.clone(), |x| interp.eval(x)))
}

/// Barycentric rational interpolant of blending degree `d`.
struct FloaterHormann<'a> {
    x: &'a [f64],
    y: &'a [f64],
    w: Vec<f64>,
}

impl<'a> FloaterHormann<'a> {
    fn new(x: &'a [f64], y: &'a [f64], d: usize) -> Self {
        let n = x.len() - 1;
        let d = d.min(n);
        let w = (0..=n)
            .map(|k| {
                let lo = k.saturating_sub(d);
                let hi = k.min(n - d);
                let sum: f64 = (lo..=hi)
                    .map(|i| {
                        (i..=i + d)
                            .filter(|&j| j != k)
                            .map(|j| 1.0 / (x[k] - x[j]).abs())
                            .product::<f64>()
                    })
                    .sum();
                if (k + d).is_multiple_of(2) { sum } else { -sum }
            })
            .collect();
        FloaterHormann { x, y, w }
    }

    fn eval(&self, t: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((xk, yk), wk) in self.x.iter().zip(self.y).zip(&self.w) {
            if t == *xk {
                return *yk;
            }
            let c = wk / (t - xk);
            num += c * yk;
            den += c;
        }
        num / den
    }
}
