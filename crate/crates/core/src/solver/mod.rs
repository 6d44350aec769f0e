//! Newton iteration for `Ξ(a) = F(ψ)`, `B(b, R, p, a) = 0`, with
//! continuation, the `R = 1` scale search and stream-function recovery.

mod config;
mod continuation;
mod gmres;
mod stream;

pub use config::{JacobianMode, SolveConfig};
pub use continuation::{manufactured_radial, ContinuationStep, Manufactured};
pub use stream::{reconstruct_stream, stream_at, CartesianGrid, StreamField};

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field_ops::{residual, BoundaryCurve, EvalOptions, ResidualPair};
use crate::linear::{LinearData, LinearSolver};
use crate::spectral::{j_norm, width_or_infinite, BracketField, FieldSamples, FlowLineFamily, Order, SGrid, SGridFunction};
use gmres::gmres;

/// Residual sizes after one accepted iterate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualNorms {
    pub interior: f64,
    pub boundary: f64,
    pub cokernel: f64,
}

impl ResidualNorms {
    fn of(res: &ResidualPair) -> Self {
        ResidualNorms {
            interior: res.interior_raw_sup,
            boundary: res.boundary_sup(),
            cokernel: res.cokernel_magnitude(),
        }
    }

    /// The convergence measure: larger of the two sup norms.
    pub fn combined(&self) -> f64 {
        self.interior.max(self.boundary)
    }
}

/// Distances of a solution from the circular flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionNorms {
    /// `J` norm of `a - ψ^{1/2}`.
    pub j_norm: f64,
    /// `|R - 1|`.
    pub r_distance: f64,
    /// `|p|`.
    pub p_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub solution: FlowLineFamily,
    pub converged: bool,
    pub iterations: usize,
    pub residual_history: Vec<ResidualNorms>,
    /// Decay width of the Fourier coefficients of `a(1, θ)`; infinite for a
    /// trigonometric polynomial.
    pub analyticity_width_of_trace: f64,
    pub norms: SolutionNorms,
    /// One entry per continuation step; empty for a plain Newton solve.
    pub steps: Vec<ContinuationStep>,
}

impl SolveReport {
    pub fn final_residual(&self) -> ResidualNorms {
        *self.residual_history.last().expect("history holds the initial residual")
    }
}

/// Precomputed grid and linear inverse for one configuration.
#[derive(Clone, Debug)]
pub struct Solver {
    cfg: SolveConfig,
    grid: Arc<SGrid>,
    linear: LinearSolver,
}

struct Evaluated {
    res: ResidualPair,
    norms: ResidualNorms,
}

impl Solver {
    pub fn new(cfg: SolveConfig) -> Result<Self> {
        cfg.validate()?;
        let grid = SGrid::new(cfg.n_radial)?;
        let linear = LinearSolver::new(&grid, cfg.k_modes);
        Ok(Solver { cfg, grid, linear })
    }

    pub fn config(&self) -> &SolveConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Arc<SGrid> {
        &self.grid
    }

    pub fn reference(&self) -> FlowLineFamily {
        FlowLineFamily::reference(&self.grid, self.cfg.k_modes)
    }

    /// Newton solve that fails on non-convergence.
    pub fn newton(&self, f: &SGridFunction, b: &BoundaryCurve, init: &FlowLineFamily) -> Result<SolveReport> {
        let report = self.newton_report(f, b, init)?;
        if report.converged {
            Ok(report)
        } else {
            Err(Error::NoConvergence {
                iterations: report.iterations,
                residual: report.final_residual().combined(),
            })
        }
    }

    /// Newton solve that returns the last iterate even without convergence.
    /// Errors only when the initial guess itself cannot be evaluated.
    pub fn newton_report(&self, f: &SGridFunction, b: &BoundaryCurve, init: &FlowLineFamily) -> Result<SolveReport> {
        self.cfg.validate_for(b)?;
        let opts = self.cfg.eval_options();
        let f = f.interpolate_to(&self.grid);
        let mut x = self.pack(&init.a.resized(self.cfg.k_modes), init.r, init.p);
        let mut cur = self.evaluate(&f, b, &x, &opts)?;
        let mut history = vec![cur.norms];
        let mut iterations = 0;
        let tol = self.cfg.tol_residual;
        while cur.norms.combined() >= tol && iterations < self.cfg.max_iter {
            let delta = match self.cfg.jacobian_mode {
                JacobianMode::FrozenReference => self.precondition(&cur.res)?,
                JacobianMode::NewtonKrylov => self.krylov_step(&f, b, &x, &cur, &opts)?,
                JacobianMode::FiniteDifferenceFull => self.dense_step(&f, b, &x, &cur, &opts)?,
            };
            let mut alpha = self.cfg.damping;
            let mut accepted = None;
            for _ in 0..=5 {
                let trial: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi - alpha * di).collect();
                match self.evaluate(&f, b, &trial, &opts) {
                    Ok(ev) if ev.norms.combined() < cur.norms.combined() => {
                        accepted = Some((trial, ev));
                        break;
                    }
                    Ok(_) => {}
                    Err(e) => log::debug!("trial step alpha = {alpha} rejected: {e}"),
                }
                alpha *= 0.5;
            }
            let Some((trial, ev)) = accepted else {
                log::warn!(
                    "step rejected after 5 halvings at residual {:.3e}",
                    cur.norms.combined()
                );
                break;
            };
            iterations += 1;
            log::debug!(
                "iteration {iterations}: interior {:.3e} boundary {:.3e} (alpha {alpha})",
                ev.norms.interior,
                ev.norms.boundary
            );
            x = trial;
            cur = ev;
            history.push(cur.norms);
        }
        let converged = cur.norms.combined() < tol;
        let solution = self.unpack(&x);
        let norms = self.solution_norms(&solution)?;
        Ok(SolveReport {
            analyticity_width_of_trace: width_or_infinite(&solution.trace()),
            solution,
            converged,
            iterations,
            residual_history: history,
            norms,
            steps: Vec::new(),
        })
    }

    fn solution_norms(&self, sol: &FlowLineFamily) -> Result<SolutionNorms> {
        let dev = sol.a.sub(&self.reference().a)?;
        Ok(SolutionNorms {
            j_norm: j_norm(&dev, self.cfg.gamma, self.cfg.m, self.cfg.sigma)?,
            r_distance: libm::fabs(sol.r - 1.0),
            p_norm: libm::hypot(sol.p[0], sol.p[1]),
        })
    }

    fn n_theta(&self) -> usize {
        2 * self.cfg.k_modes + 1
    }

    fn pack(&self, a: &BracketField, r: f64, p: [f64; 2]) -> Vec<f64> {
        let smp = a.to_samples();
        let mut x = Vec::with_capacity(3 + smp.data.len());
        x.extend_from_slice(&[r, p[0], p[1]]);
        x.extend(smp.data.iter().map(|c| c.re));
        x
    }

    fn unpack(&self, x: &[f64]) -> FlowLineFamily {
        let smp = FieldSamples {
            n_s: self.grid.len(),
            n_theta: self.n_theta(),
            data: x[3..].iter().map(|v| Complex64::new(*v, 0.0)).collect(),
        };
        FlowLineFamily {
            r: x[0],
            p: [x[1], x[2]],
            a: BracketField::from_samples(Order::HALF, &self.grid, &smp),
        }
    }

    fn evaluate(&self, f: &SGridFunction, b: &BoundaryCurve, x: &[f64], opts: &EvalOptions) -> Result<Evaluated> {
        let fam = self.unpack(x);
        let res = residual(f, b, &fam, opts)?;
        let norms = ResidualNorms::of(&res);
        Ok(Evaluated { res, norms })
    }

    /// Inverse of the linearization at the circular flow applied to a
    /// residual, in state coordinates.
    fn precondition(&self, res: &ResidualPair) -> Result<Vec<f64>> {
        // DΞ = -8 ψ^{-1/2} L and DB = 2 (δR + δp·ê + u(1, θ)) at the reference
        let f = res.interior.shifted(1).scale(Complex64::new(-0.125, 0.0));
        let g = res.boundary.scale(Complex64::new(0.5, 0.0));
        let (data, _) = LinearData::projected(f, g)?;
        let sol = self.linear.solve(&data)?;
        Ok(self.pack(&sol.u, sol.r.re, [sol.p[0].re, sol.p[1].re]))
    }

    fn directional(
        &self,
        f: &SGridFunction,
        b: &BoundaryCurve,
        x: &[f64],
        base: &[f64],
        v: &[f64],
        opts: &EvalOptions,
    ) -> Result<Vec<f64>> {
        let vmax = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if vmax == 0.0 {
            return Ok(vec![0.0; v.len()]);
        }
        let xmax = x.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let eps = 1e-7 * (1.0 + xmax) / vmax;
        let shifted: Vec<f64> = x.iter().zip(v).map(|(a, d)| a + eps * d).collect();
        let ev = self.evaluate(f, b, &shifted, opts)?;
        let pf = self.precondition(&ev.res)?;
        Ok(pf.iter().zip(base).map(|(a, c)| (a - c) / eps).collect())
    }

    fn krylov_step(
        &self,
        f: &SGridFunction,
        b: &BoundaryCurve,
        x: &[f64],
        cur: &Evaluated,
        opts: &EvalOptions,
    ) -> Result<Vec<f64>> {
        let base = self.precondition(&cur.res)?;
        let (delta, iters, rel) = gmres(|v| self.directional(f, b, x, &base, v, opts), &base, 1e-9, 60)?;
        log::debug!("GMRES: {iters} iterations, relative residual {rel:.2e}");
        Ok(delta)
    }

    fn dense_step(
        &self,
        f: &SGridFunction,
        b: &BoundaryCurve,
        x: &[f64],
        cur: &Evaluated,
        opts: &EvalOptions,
    ) -> Result<Vec<f64>> {
        let base = self.precondition(&cur.res)?;
        let n = x.len();
        let mut jac = nalgebra::DMatrix::<f64>::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.directional(f, b, x, &base, &e, opts)?;
            e[j] = 0.0;
            jac.column_mut(j).copy_from_slice(&col);
        }
        let rhs = nalgebra::DVector::from_vec(base);
        let sol = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidArgument("finite-difference Jacobian is singular".into()))?;
        Ok(sol.iter().copied().collect())
    }

    /// Continuation from the circular flow along
    /// `((1-t)·4 + t·F, (1-t)·1 + t·b)`.
    pub fn continuation(&self, f: &SGridFunction, b: &BoundaryCurve) -> Result<SolveReport> {
        continuation::run(self, f, b)
    }

    /// [`Solver::continuation`] returning the partial report of a step that
    /// did not converge.
    pub fn continuation_report(&self, f: &SGridFunction, b: &BoundaryCurve) -> Result<SolveReport> {
        continuation::run_report(self, f, b)
    }

    /// Scale `c` with `R = 1` for the boundary `c·b`.
    pub fn compatibilize(&self, f: &SGridFunction, b: &BoundaryCurve) -> Result<(f64, SolveReport)> {
        continuation::compatibilize(self, f, b)
    }
}

/// One Newton solve from `init`.
pub fn newton_solve(f: &SGridFunction, b: &BoundaryCurve, cfg: &SolveConfig, init: &FlowLineFamily) -> Result<SolveReport> {
    Solver::new(*cfg)?.newton(f, b, init)
}

/// Continuation solve from the circular flow.
pub fn continuation_solve(f: &SGridFunction, b: &BoundaryCurve, cfg: &SolveConfig) -> Result<SolveReport> {
    Solver::new(*cfg)?.continuation(f, b)
}

/// Finds `c > 0` such that the solution for `(F, c·b)` has `R = 1`.
pub fn compatibilize(f: &SGridFunction, b: &BoundaryCurve, cfg: &SolveConfig) -> Result<(f64, SolveReport)> {
    Solver::new(*cfg)?.compatibilize(f, b)
}
