use core::f64::consts::PI;

use num_complex::Complex64;

use super::boundary::{phi_angle, strip_excursion};
use super::{boundary_op, xi, BoundaryCurve, EvalOptions};
use crate::error::Result;
use crate::spectral::{BracketField, FlowLineFamily, SGridFunction, ThetaSeries};

/// Interior and boundary residuals of a candidate solution.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualPair {
    /// `Ξ(a) - F(ψ)` of order zero, with the `e^{±2iθ}` leading modes removed.
    pub interior: BracketField,
    /// `B(b, R, p, a)` at the angular samples.
    pub boundary: ThetaSeries,
    /// Sup norm of `Ξ(a) - F` over the collocation points before projection.
    pub interior_raw_sup: f64,
    /// `∮ v(θ) e^{2iθ} dθ` and `∮ v(θ) e^{-2iθ} dθ` of the interior leading
    /// term `v`, measured before projection.
    pub cokernel_moments: [Complex64; 2],
}

impl ResidualPair {
    pub fn interior_sup(&self) -> f64 {
        self.interior.to_samples().sup_norm()
    }

    pub fn boundary_sup(&self) -> f64 {
        self.boundary
            .samples()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn cokernel_magnitude(&self) -> f64 {
        self.cokernel_moments[0].norm().max(self.cokernel_moments[1].norm())
    }
}

/// Residual of `Ξ(a) = F(ψ)`, `B = 0` with `F` continued constantly in `θ`.
pub fn residual(
    f: &SGridFunction,
    b: &BoundaryCurve,
    sol: &FlowLineFamily,
    opts: &EvalOptions,
) -> Result<ResidualPair> {
    let mut interior = xi(&sol.a, opts)?;
    let f = f.interpolate_to(interior.grid());
    {
        let m0 = interior.mode_mut(0);
        for (v, fv) in m0.values_mut().iter_mut().zip(f.values()) {
            *v -= fv;
        }
    }
    let interior_raw_sup = interior.to_samples().sup_norm();
    let mut moments = [Complex64::new(0.0, 0.0); 2];
    for (slot, k) in [(0usize, -2i64), (1, 2)] {
        if interior.k_max() >= 2 {
            let lead = interior.mode(k).at_origin();
            moments[slot] = 2.0 * PI * lead;
            interior.mode_mut(k).values_mut().iter_mut().for_each(|v| *v -= lead);
        }
    }
    let boundary = boundary_op(b, sol.r, sol.p, &sol.a)?;
    let phi = phi_angle(sol.r, sol.p, &sol.a.trace())?;
    let excursion = strip_excursion(&phi.offset, opts.sigma);
    if opts.sigma + excursion > b.tau() {
        log::warn!(
            "boundary map leaves the analyticity strip: sigma {} + excursion {:.3e} > tau {}",
            opts.sigma,
            excursion,
            b.tau()
        );
    }
    Ok(ResidualPair {
        interior,
        boundary,
        interior_raw_sup,
        cokernel_moments: moments,
    })
}
