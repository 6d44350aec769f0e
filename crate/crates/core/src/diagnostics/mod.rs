//! Seeded numerical checks of the inequalities and identities behind the
//! solver: Hardy bounds, cokernel moments, the linear inverse and the
//! analyticity strip.

mod hardy;
pub mod random;

pub use hardy::{hardy_bound, hardy_ratio};

use alloc::format;
use alloc::string::String;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field_ops::{phi_angle, strip_excursion, xi, BoundaryCurve, EvalOptions};
use crate::linear::{apply_l, LinearData, LinearSolver};
use crate::solver::SolveConfig;
use crate::spectral::{j_norm, width_or_infinite, x_sigma_norm, BracketField, FlowLineFamily, Order, SGrid, ThetaSeries};
use random::{complex_normal, random_chebyshev, eval_chebyshev, random_interior_data, random_theta_series};

/// Outcome of one seeded check.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub name: String,
    pub seed: u64,
    pub samples: usize,
    pub worst_ratio: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

impl PropertyReport {
    pub fn new(name: String, seed: u64, samples: usize, worst_ratio: f64, bound: f64, slack: f64) -> Self {
        PropertyReport {
            name,
            seed,
            samples,
            worst_ratio,
            bound,
            slack,
            pass: worst_ratio <= bound * (1.0 + slack),
        }
    }

    /// One-line text form.
    pub fn line(&self) -> String {
        format!(
            "{} seed={} samples={} worst_ratio={:.6e} bound={:.6e} {}",
            self.name,
            self.seed,
            self.samples,
            self.worst_ratio,
            self.bound,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Running maximum of the Hardy ratio over random Chebyshev series against
/// `1 / |1/2 - α|` with 5% slack.
pub fn check_hardy(alpha: f64, trials: usize, seed: u64) -> Result<PropertyReport> {
    let bound = hardy_bound(alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let coeffs = random_chebyshev(&mut rng, 16);
        let ratio = hardy_ratio(alpha, |x| eval_chebyshev(&coeffs, x))?;
        worst = worst.max(ratio);
    }
    if trials == 0 {
        hardy_ratio(alpha, |_| 1.0)?;
    }
    Ok(PropertyReport::new(format!("hardy(alpha={alpha})"), seed, trials, worst, bound, 0.05))
}

/// Largest `|∮ Ξ(ψ^{1/2} ξ) e^{±2iθ} dθ|` (one of the pair `[+2, -2]`).
pub fn cokernel_moment(xi_series: &ThetaSeries, grid: &alloc::sync::Arc<SGrid>) -> Result<f64> {
    let k = xi_series.k_max();
    let a = BracketField::from_mode_fn(Order::HALF, grid, k, |m, _| xi_series.coeff(m));
    let vort = xi(&a, &EvalOptions::default())?;
    let lead = |m: i64| 2.0 * PI * vort.mode(m).at_origin().norm();
    Ok(lead(2).max(lead(-2)))
}

/// Random real analytic `ξ = 1 + Σ e^{-|k|/2} z_k e^{ikθ}` with `z_k`
/// standard normal, rescaled to `‖ξ - 1‖∞ ≤ amplitude`.
pub fn random_analytic_perturbation(rng: &mut ChaCha8Rng, k_max: usize, modes: usize, amplitude: f64) -> ThetaSeries {
    let mut s = ThetaSeries::zeros(k_max);
    for k in 1..=modes.min(k_max) as i64 {
        let c = complex_normal(rng) * libm::exp(-0.5 * k as f64);
        s.set(k, c);
        s.set(-k, c.conj());
    }
    let sup = s.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut s = if sup > 0.0 { s.scale(Complex64::new(amplitude / sup, 0.0)) } else { s };
    s.set(0, Complex64::new(1.0, 0.0));
    s
}

/// Cokernel moments of `Ξ` over random positive `ξ(θ)`, against `1e-9`.
pub fn check_cokernel(trials: usize, amplitude: f64, seed: u64) -> Result<PropertyReport> {
    const K: usize = 32;
    let grid = SGrid::new(8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let xi_series = random_analytic_perturbation(&mut rng, K, 12, amplitude);
        worst = worst.max(cokernel_moment(&xi_series, &grid)?);
    }
    Ok(PropertyReport::new(format!("cokernel(amplitude={amplitude})"), seed, trials, worst, 1e-9, 0.0))
}

/// Round-trip report of the linear inverse with the empirical stability
/// constant `C` in `|R| + |p| + ‖u‖_J ≤ C (‖f‖_J + ‖g‖_X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsomorphismReport {
    /// Worst relative residual of `L u = f` against `1e-8`.
    pub report: PropertyReport,
    /// Worst relative mismatch of the boundary relation over all modes.
    pub worst_boundary: f64,
    pub stability_constant: f64,
}

/// Interior and boundary round-trip errors with solution and data norms.
fn linear_trial(
    solver: &LinearSolver,
    f: BracketField,
    g: ThetaSeries,
    cfg: &SolveConfig,
) -> Result<(f64, f64, f64, f64)> {
    let (data, _) = LinearData::projected(f, g)?;
    let sol = solver.solve(&data)?;
    let lu = apply_l(&sol.u);
    let f_scale = data.f.max_abs_h().max(1.0);
    let interior = lu.sub(&data.f)?.max_abs_h() / f_scale;
    let trace = sol.u.trace();
    let g_scale = data.g.max_coeff().max(1.0);
    let boundary = (-(data.g.k_max() as i64)..=data.g.k_max() as i64)
        .map(|k| {
            let mut lhs = trace.coeff(k);
            match k {
                0 => lhs += sol.r,
                1 => lhs += 0.5 * (sol.p[0] - Complex64::new(0.0, 1.0) * sol.p[1]),
                -1 => lhs += 0.5 * (sol.p[0] + Complex64::new(0.0, 1.0) * sol.p[1]),
                _ => {}
            }
            (lhs - data.g.coeff(k)).norm()
        })
        .fold(0.0, f64::max)
        / g_scale;
    let m = cfg.m;
    let data_norm = j_norm(&data.f, cfg.gamma, m - 2, cfg.sigma)? + x_sigma_norm(&data.g, cfg.sigma, m as f64 - 0.5);
    let sol_norm = sol.r.norm() + libm::hypot(sol.p[0].norm(), sol.p[1].norm()) + j_norm(&sol.u, cfg.gamma, m, cfg.sigma)?;
    Ok((interior, boundary, sol_norm, data_norm))
}

/// Random band-limited data at the configured `K`, `N`.
pub fn check_linear_isomorphism(trials: usize, cfg: &SolveConfig, seed: u64) -> Result<IsomorphismReport> {
    cfg.validate()?;
    let grid = SGrid::new(cfg.n_radial)?;
    let k = cfg.k_modes;
    let solver = LinearSolver::new(&grid, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut worst_boundary: f64 = 0.0;
    let mut constant: f64 = 0.0;
    for _ in 0..trials {
        let f = random_interior_data(&mut rng, &grid, k, 12);
        let g = random_theta_series(&mut rng, k);
        let g = ThetaSeries::from_real_fn(k, |t| g.eval(t).re);
        let (interior, boundary, sol_norm, data_norm) = linear_trial(&solver, f, g, cfg)?;
        worst = worst.max(interior);
        worst_boundary = worst_boundary.max(boundary);
        if data_norm > 0.0 {
            constant = constant.max(sol_norm / data_norm);
        }
    }
    Ok(IsomorphismReport {
        report: PropertyReport::new(format!("linear(K={k},N={})", cfg.n_radial), seed, trials, worst, 1e-8, 0.0),
        worst_boundary,
        stability_constant: constant,
    })
}

/// Ratio `‖(R, p, u)‖ / ‖(f, g)‖` for one data pair; exposed for examples.
pub fn linear_stability_ratio(f: BracketField, g: ThetaSeries, cfg: &SolveConfig) -> Result<f64> {
    let solver = LinearSolver::new(f.grid(), f.k_max());
    let (_, _, sol_norm, data_norm) = linear_trial(&solver, f, g, cfg)?;
    Ok(sol_norm / data_norm)
}

/// Widths and excursion behind a strip report.
#[derive(Clone, Debug, PartialEq)]
pub struct StripMargin {
    /// `worst_ratio = max((σ + E)/τ, σ/w_trace, σ/w_offset)`, passing at ≤ 1.
    pub report: PropertyReport,
    /// `E = Σ_{k≠0} |(φ-θ)^_k| e^{σ|k|}`.
    pub excursion: f64,
    pub trace_width: f64,
    pub offset_width: f64,
}

/// Checks that the boundary map keeps the `σ`-strip inside the declared
/// analyticity strip `τ` of the boundary curve, and that the trace and
/// `φ - θ` are analytic on the `σ`-strip.
pub fn strip_margin_report(sol: &FlowLineFamily, b: &BoundaryCurve, cfg: &SolveConfig) -> Result<StripMargin> {
    let sigma = cfg.sigma;
    let trace = sol.trace();
    let phi = phi_angle(sol.r, sol.p, &trace)?;
    let excursion = strip_excursion(&phi.offset, sigma);
    let trace_width = width_or_infinite(&trace);
    let offset_width = width_or_infinite(&phi.offset);
    let worst = ((sigma + excursion) / b.tau())
        .max(sigma / trace_width)
        .max(sigma / offset_width);
    Ok(StripMargin {
        report: PropertyReport::new(format!("strip(sigma={sigma},tau={})", b.tau()), 0, 1, worst, 1.0, 0.0),
        excursion,
        trace_width,
        offset_width,
    })
}

#[cfg(test)]
mod tests;
