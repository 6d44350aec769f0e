//! Closed-form inverses of the first-order factors `ψ∂_ψ + μ`.
//!
//! With `s = √ψ` both inverses become averages of the data over a scaled
//! variable:
//!
//! * anchored at the origin: `z(s) = 2 ∫₀¹ r^{2μ-1} y(s r) dr`
//! * anchored at the boundary: `z(s) = -2 ∫_s^1 (s/τ)^{-2μ} y(τ) dτ / τ`
//!
//! Both are assembled once as `N×N` matrices acting on grid values, with
//! Gauss–Legendre quadrature and barycentric interpolation.

use alloc::vec;
use alloc::vec::Vec;

use crate::spectral::quadrature::gauss_legendre;
use crate::spectral::SGrid;

/// Where the inverse takes its zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// Regular at `ψ = 0`.
    Origin,
    /// Vanishes at `ψ = 1`.
    Boundary,
}

/// Matrix of `(ψ∂_ψ + μ)^{-1}` on grid values, row-major.
///
/// `2μ` must be an integer. The row for `s = 0` uses the limit `y(0)/μ`
/// (zero when `μ ≤ 0`, where only data with `y(0) = 0` is admissible).
pub fn weighted_average_matrix(grid: &SGrid, mu: f64, anchor: Anchor) -> Vec<f64> {
    let n = grid.len();
    let nodes = grid.nodes();
    let mut mat = vec![0.0; n * n];
    let two_mu = libm::round(2.0 * mu) as i32;
    debug_assert!((2.0 * mu - two_mu as f64).abs() < 1e-12);
    if mu > 0.0 || (anchor == Anchor::Boundary && mu < 0.0) {
        mat[0] = 1.0 / mu;
    }
    match anchor {
        Anchor::Origin => {
            let e = two_mu - 1;
            let q = (n + e.unsigned_abs() as usize) / 2 + 6;
            let (rs, ws) = gauss_legendre(q, 0.0, 1.0);
            for i in 1..n {
                let row = &mut mat[i * n..(i + 1) * n];
                for (r, w) in rs.iter().zip(&ws) {
                    let weight = 2.0 * w * r.powi_compat(e);
                    for (m, l) in row.iter_mut().zip(grid.lagrange_row(nodes[i] * r)) {
                        *m += weight * l;
                    }
                }
            }
        }
        Anchor::Boundary => {
            let q = n / 2 + 12;
            let (xs, ws) = gauss_legendre(q, 0.0, 1.0);
            for i in 1..n - 1 {
                let s = nodes[i];
                let row = &mut mat[i * n..(i + 1) * n];
                // geometric panels [s·ρ^j, s·ρ^{j+1}] resolve the factor (s/τ)^{-2μ}
                let mut lo = s;
                while lo < 1.0 {
                    let hi = (lo * 1.5).min(1.0);
                    let hi = if hi > 1.0 - 1e-3 * (1.0 - s) { 1.0 } else { hi };
                    for (x, w) in xs.iter().zip(&ws) {
                        let tau = lo + (hi - lo) * x;
                        let weight = -2.0 * w * (hi - lo) * (s / tau).powi_compat(-two_mu) / tau;
                        for (m, l) in row.iter_mut().zip(grid.lagrange_row(tau)) {
                            *m += weight * l;
                        }
                    }
                    lo = hi;
                }
            }
        }
    }
    mat
}

trait PowiCompat {
    fn powi_compat(self, e: i32) -> f64;
}

impl PowiCompat for f64 {
    fn powi_compat(self, e: i32) -> f64 {
        let mut acc = 1.0;
        let base = if e < 0 { 1.0 / self } else { self };
        for _ in 0..e.unsigned_abs() {
            acc *= base;
        }
        acc
    }
}

pub(crate) fn mat_mul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}
