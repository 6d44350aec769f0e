use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::spectral::quadrature::{gauss_legendre, power_weight_rule};

const LEVELS: usize = 60;
const POINTS: usize = 20;

/// `‖T f‖ / ‖f‖` in `L²(0, 1)` for the weighted average
/// `T f(y) = y^{α-1} ∫₀^y x^{-α} f(x) dx` when `α < 1/2` and
/// `T f(y) = y^{α-1} ∫_y^1 x^{-α} f(x) dx` when `α > 1/2`.
///
/// Integrals run over the dyadic panels `[2^{-j-1}, 2^{-j}]`, `j < 60`.
pub fn hardy_ratio(alpha: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    if alpha == 0.5 || !alpha.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!(
            "Hardy check needs alpha != 1/2, got {alpha}"
        )));
    }
    let panels: Vec<(f64, f64)> = (0..LEVELS)
        .map(|j| (libm::exp2(-(j as f64) - 1.0), libm::exp2(-(j as f64))))
        .collect();
    let mut f_sq = 0.0;
    let mut t_sq = 0.0;
    if alpha < 0.5 {
        // T f(y) = ∫₀¹ t^{-α} f(y t) dt
        let (tn, tw) = power_weight_rule(POINTS + 8, -alpha);
        for &(lo, hi) in &panels {
            let (ys, ws) = gauss_legendre(POINTS, lo, hi);
            for (y, w) in ys.iter().zip(&ws) {
                let fy = f(*y);
                let ty: f64 = tn.iter().zip(&tw).map(|(t, q)| q * f(y * t)).sum();
                f_sq += w * fy * fy;
                t_sq += w * ty * ty;
            }
        }
    } else {
        let weighted = |lo: f64, hi: f64| -> f64 {
            let (xs, ws) = gauss_legendre(POINTS, lo, hi);
            xs.iter().zip(&ws).map(|(x, w)| w * libm::pow(*x, -alpha) * f(*x)).sum()
        };
        // ∫ over the panels above the current one
        let mut above = 0.0;
        for &(lo, hi) in &panels {
            let (ys, ws) = gauss_legendre(POINTS, lo, hi);
            for (y, w) in ys.iter().zip(&ws) {
                let fy = f(*y);
                let ty = libm::pow(*y, alpha - 1.0) * (above + weighted(*y, hi));
                f_sq += w * fy * fy;
                t_sq += w * ty * ty;
            }
            above += weighted(lo, hi);
        }
    }
    if f_sq == 0.0 {
        return Err(Error::InvalidArgument("Hardy check needs a nonzero function".into()));
    }
    Ok(libm::sqrt(t_sq / f_sq))
}

/// `1 / |1/2 - α|`.
pub fn hardy_bound(alpha: f64) -> f64 {
    1.0 / libm::fabs(0.5 - alpha)
}
