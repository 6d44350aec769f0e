//! Weighted norms and Fourier-decay width estimates.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::bracket::BracketField;
use super::quadrature::power_weight_rule;
use super::theta::ThetaSeries;
use crate::error::{Error, Result};

/// Coefficients below this are treated as numerically zero.
pub const AMPLITUDE_FLOOR: f64 = 1e-14;

/// Weighted Sobolev norm `Σ_{p+q≤m} ‖ψ^{p-γ} ∂_ψ^p ∂_θ^q w‖²` over
/// `[0,1] × 𝕋` with `dψ dθ`, returned as its square root.
///
/// Returns `f64::INFINITY` when a weighted integrand is not integrable at
/// `ψ = 0`.
pub fn kondratev_norm(w: &BracketField, gamma: f64, m: u32) -> Result<f64> {
    kondratev_norm_sigma(w, gamma, m, 0.0)
}

/// [`kondratev_norm`] with the angular weight `e^{2σ|k|}` on every mode.
pub fn kondratev_norm_sigma(w: &BracketField, gamma: f64, m: u32, sigma: f64) -> Result<f64> {
    if m > 4 {
        return Err(Error::InvalidArgument(alloc::format!(
            "Kondratev order must be at most 4, got {m}"
        )));
    }
    let grid = w.grid().clone();
    let n = grid.len();
    let lambda = w.lambda();
    let base_exp = 4.0 * (lambda - gamma) + 1.0;
    let nodes = grid.nodes();
    let scale_all = w.max_abs_h().max(f64::MIN_POSITIVE);

    // cache quadrature rules per vanishing order
    let mut rules: [Option<(Vec<f64>, Vec<f64>)>; 3] = [None, None, None];
    let mut total = 0.0;
    for k in -(w.k_max() as i64)..=w.k_max() as i64 {
        let h = w.mode(k).values();
        let mode_scale = h.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if mode_scale == 0.0 {
            continue;
        }
        let tol = 1e-12 * scale_all;
        let dh = grid.apply_diff(1, h);
        let nu = if h[0].norm() > tol {
            0
        } else if dh[0].norm() > tol * n as f64 * n as f64 {
            1
        } else {
            2
        };
        let e = base_exp + 2.0 * nu as f64;
        if e <= -1.0 {
            return Ok(f64::INFINITY);
        }
        if rules[nu].is_none() {
            rules[nu] = Some(power_weight_rule(n + 4, e));
        }
        let (qs, qw) = rules[nu].as_ref().expect("just filled");
        let kk = (k * k) as f64;
        let ang = libm::exp(2.0 * sigma * libm::fabs(k as f64));
        // P_p h = Π_{j<p} (E + λ - j) h with E = (s/2) d/ds
        let mut ph: Vec<Complex64> = h.to_vec();
        for p in 0..=m {
            if p > 0 {
                let d = grid.apply_diff(1, &ph);
                ph = ph
                    .iter()
                    .zip(&d)
                    .zip(nodes)
                    .map(|((v, dv), s)| dv * (0.5 * s) + v * (lambda - (p - 1) as f64))
                    .collect();
            }
            let mut integral = 0.0;
            for (s, wq) in qs.iter().zip(qw) {
                let v = grid.interpolate(&ph, *s);
                integral += wq * v.norm_sqr() / libm::pow(*s, 2.0 * nu as f64);
            }
            let q_sum: f64 = (0..=(m - p)).map(|q| libm::pow(kk, q as f64)).sum();
            total += 2.0 * integral * q_sum * ang;
        }
    }
    Ok(libm::sqrt(2.0 * PI * total))
}

/// `(Σ (1 + k²)^m e^{2σ|k|} |ĉ_k|²)^{1/2}`; `m` may be fractional.
pub fn x_sigma_norm(f: &ThetaSeries, sigma: f64, m: f64) -> f64 {
    let k_max = f.k_max() as i64;
    let sum: f64 = (-k_max..=k_max)
        .map(|k| {
            let kk = (k * k) as f64;
            libm::pow(1.0 + kk, m) * libm::exp(2.0 * sigma * libm::fabs(k as f64)) * f.coeff(k).norm_sqr()
        })
        .sum();
    libm::sqrt(sum)
}

/// Least-squares decay rate of `|ĉ_k|` with the mode range used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WidthEstimate {
    pub sigma: f64,
    pub k_lo: usize,
    pub k_hi: usize,
}

/// Estimates the width of the strip of analyticity from the slope of
/// `-log|ĉ_k|` against `|k|`, fitted over the upper half of the modes that
/// sit above [`AMPLITUDE_FLOOR`].
pub fn analyticity_width(f: &ThetaSeries) -> Result<WidthEstimate> {
    let amps: Vec<(usize, f64)> = (1..=f.k_max())
        .map(|k| {
            let k = k as i64;
            (k as usize, f.coeff(k).norm().max(f.coeff(-k).norm()))
        })
        .filter(|(_, a)| *a > AMPLITUDE_FLOOR)
        .collect();
    if amps.len() < 8 {
        return Err(Error::UndefinedWidth { found: amps.len() });
    }
    let k_last = amps.last().expect("nonempty").0;
    let fit: Vec<(f64, f64)> = amps
        .iter()
        .filter(|(k, _)| 2 * k >= k_last)
        .map(|(k, a)| (*k as f64, -libm::log(*a)))
        .collect();
    let n = fit.len() as f64;
    let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
    let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = fit.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(WidthEstimate {
        sigma: sxy / sxx,
        k_lo: fit[0].0 as usize,
        k_hi: k_last,
    })
}

/// Width estimate with trigonometric polynomials (and zero) mapped to an
/// infinite width.
pub fn width_or_infinite(f: &ThetaSeries) -> f64 {
    analyticity_width(f).map_or(f64::INFINITY, |w| w.sigma)
}

/// Norm of an order-1/2 field split as `v(θ) ψ^{1/2} + w`: the `X^m_σ` norm
/// of `v` plus the Kondratev norm of `w` with weight exponent `γ + 1/2`.
pub fn j_norm(u: &BracketField, gamma: f64, m: u32, sigma: f64) -> Result<f64> {
    let (v, w) = u.decompose_leading();
    Ok(x_sigma_norm(&v, sigma, m as f64) + kondratev_norm_sigma(&w, gamma + 0.5, m, sigma)?)
}
