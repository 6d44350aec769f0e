use alloc::boxed::Box;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{SolveReport, Solver};
use crate::error::{Error, Result};
use crate::field_ops::{xi, BoundaryCurve, EvalOptions};
use crate::spectral::{BracketField, FlowLineFamily, Order, SGridFunction};

/// Outcome of one continuation step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuationStep {
    pub t: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Continuation that stops at the first non-converged step and returns its
/// report with `converged = false`.
pub(super) fn run_report(solver: &Solver, f: &SGridFunction, b: &BoundaryCurve) -> Result<SolveReport> {
    let steps = solver.cfg.continuation_steps;
    let f = f.interpolate_to(&solver.grid);
    let mut current = solver.reference();
    let mut records = Vec::with_capacity(steps);
    let mut last_t = 0.0;
    let mut report = None;
    for i in 1..=steps {
        let t = i as f64 / steps as f64;
        let f_t = f.map(|_, v| Complex64::new(4.0 * (1.0 - t), 0.0) + v * t);
        let b_t = if i == steps { b.clone() } else { b.blend_from_unit(t) };
        let rep = solver.newton_report(&f_t, &b_t, &current).map_err(|e| Error::Continuation {
            last_t,
            source: Box::new(e),
        })?;
        records.push(ContinuationStep {
            t,
            iterations: rep.iterations,
            residual: rep.final_residual().combined(),
            converged: rep.converged,
        });
        log::info!("continuation t = {t:.4}: {} iterations, converged {}", rep.iterations, rep.converged);
        current = rep.solution.clone();
        let done = !rep.converged;
        report = Some(rep);
        if done {
            break;
        }
        last_t = t;
    }
    let mut report = report.expect("at least one step");
    report.steps = records;
    Ok(report)
}

pub(super) fn run(solver: &Solver, f: &SGridFunction, b: &BoundaryCurve) -> Result<SolveReport> {
    let report = run_report(solver, f, b)?;
    if report.converged {
        return Ok(report);
    }
    let last_t = report
        .steps
        .iter()
        .rev()
        .find(|s| s.converged)
        .map_or(0.0, |s| s.t);
    Err(Error::Continuation {
        last_t,
        source: Box::new(Error::NoConvergence {
            iterations: report.iterations,
            residual: report.final_residual().combined(),
        }),
    })
}

const SCALE_RANGE: (f64, f64) = (0.5, 2.0);

fn in_range(c: f64) -> bool {
    c >= SCALE_RANGE.0 * (1.0 - 1e-9) && c <= SCALE_RANGE.1 * (1.0 + 1e-9)
}

pub(super) fn compatibilize(solver: &Solver, f: &SGridFunction, b: &BoundaryCurve) -> Result<(f64, SolveReport)> {
    let tol = solver.cfg.tol_residual;
    let first = run(solver, f, b)?;
    let mut c_prev = 1.0;
    let mut d_prev = first.solution.r - 1.0;
    if libm::fabs(d_prev) < tol {
        return Ok((1.0, first));
    }
    // R scales linearly with the boundary, so 1/R is the first guess
    let mut c = 1.0 / first.solution.r;
    let mut last = first;
    for _ in 0..30 {
        if !in_range(c) || !c.is_finite() {
            return Err(Error::Incompatible { scale: c });
        }
        let ratio = c / c_prev;
        let init = FlowLineFamily {
            r: last.solution.r * ratio,
            p: [last.solution.p[0] * ratio, last.solution.p[1] * ratio],
            a: last.solution.a.clone(),
        };
        let rep = solver.newton(f, &b.scaled(c), &init)?;
        let d = rep.solution.r - 1.0;
        log::debug!("scale search: c = {c:.15}, R - 1 = {d:.3e}");
        if libm::fabs(d) < tol {
            return Ok((c, rep));
        }
        let next = c - d * (c - c_prev) / (d - d_prev);
        if libm::fabs(next - c) <= 1e-15 * c {
            return Ok((c, rep));
        }
        c_prev = c;
        d_prev = d;
        c = next;
        last = rep;
    }
    Err(Error::NoConvergence {
        iterations: 30,
        residual: libm::fabs(last.solution.r - 1.0),
    })
}

/// Exact radial solution together with its data.
#[derive(Clone, Debug, PartialEq)]
pub struct Manufactured {
    /// Vorticity profile on the grid of the input.
    pub f: SGridFunction,
    /// Constant boundary radius.
    pub b_value: f64,
    /// `a = ψ^{1/2} h₀(s)`.
    pub a: BracketField,
}

/// Builds `(F, b, a)` from a radial smooth factor `h₀` with `h₀(0) = 1`.
pub fn manufactured_radial(profile: &SGridFunction, k_max: usize) -> Result<Manufactured> {
    let h0 = profile.at_origin();
    if libm::fabs(h0.re - 1.0) > 1e-12 || libm::fabs(h0.im) > 1e-12 {
        return Err(Error::InvalidArgument(alloc::format!(
            "profile must equal 1 at the stagnation point, got {h0}"
        )));
    }
    // a = s h₀ is increasing iff h₀ + s h₀' > 0
    let grid = profile.grid().clone();
    let dh = profile.diff_s(1)?;
    let slope = |s: f64| profile.eval(s).re + s * dh.eval(s).re;
    let dense = 8 * grid.len();
    for j in 0..=dense {
        let s = j as f64 / dense as f64;
        if !(slope(s) > 0.0) {
            return Err(Error::NotMonotone { s });
        }
    }
    for &s in grid.nodes() {
        if !(slope(s) > 0.0) {
            return Err(Error::NotMonotone { s });
        }
    }
    let a = BracketField::radial(Order::HALF, profile.clone(), k_max);
    let vort = xi(&a, &EvalOptions::default())?;
    let f = vort.mode(0).map(|_, v| Complex64::new(v.re, 0.0));
    Ok(Manufactured {
        f,
        b_value: profile.at_boundary().re,
        a,
    })
}
