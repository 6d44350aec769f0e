use alloc::sync::Arc;

use num_complex::Complex64;

use super::bracket::{BracketField, Order};
use super::sgrid::{SGrid, SGridFunction};
use super::theta::ThetaSeries;

/// The unknown triple: dilation `R`, stagnation point `p` and the flow-line
/// radii `a = ψ^{1/2} h(s, θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowLineFamily {
    pub r: f64,
    pub p: [f64; 2],
    pub a: BracketField,
}

impl FlowLineFamily {
    /// Circular flow `ψ = x² + y²` on the unit disk: `(1, 0, ψ^{1/2})`.
    pub fn reference(grid: &Arc<SGrid>, k_max: usize) -> Self {
        FlowLineFamily {
            r: 1.0,
            p: [0.0, 0.0],
            a: BracketField::radial(
                Order::HALF,
                SGridFunction::from_real_fn(grid.clone(), |_| 1.0),
                k_max,
            ),
        }
    }

    /// Leading coefficient `v(θ)` and remainder `w` of `a`.
    pub fn split(&self) -> (ThetaSeries, BracketField) {
        self.a.decompose_leading()
    }

    /// Boundary trace `a(1, θ)`.
    pub fn trace(&self) -> ThetaSeries {
        self.a.trace()
    }

    /// Point on the flow line `ψ` at polar angle `θ` about `p`.
    pub fn point(&self, psi: f64, theta: f64) -> [f64; 2] {
        let s = libm::sqrt(psi);
        let r = self.r * self.a.value_at(s, theta).re;
        [self.p[0] + r * libm::cos(theta), self.p[1] + r * libm::sin(theta)]
    }

    /// Minimum of `Re v(θ)` over the angular samples; positive for a
    /// non-degenerate stagnation point.
    pub fn min_leading(&self) -> f64 {
        self.a
            .leading()
            .samples()
            .iter()
            .map(|c: &Complex64| c.re)
            .fold(f64::INFINITY, f64::min)
    }
}
