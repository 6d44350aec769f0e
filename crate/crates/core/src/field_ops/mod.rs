//! The nonlinear interior operator in bracket form, derived flow quantities,
//! and the boundary operator.

mod boundary;
mod residual;

pub use boundary::{boundary_op, boundary_op_rho_form, phi_angle, strip_excursion, BoundaryCurve, PhiAngle};
pub use residual::{residual, ResidualPair};

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{BracketField, FieldSamples, Order, SGridFunction};

/// Settings shared by the pointwise nonlinear evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    /// Smallest admissible `|B1|` and `|B2|`.
    pub degeneracy_tol: f64,
    /// Evaluate on a grid padded to `3K/2` angular modes.
    pub dealias: bool,
    /// Strip width of the solve, used only for the boundary-map warning.
    pub sigma: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            degeneracy_tol: 1e-3,
            dealias: false,
            sigma: 0.2,
        }
    }
}

/// The six normalized derivative combinations of `a = ψ^{1/2} h`, all of
/// order zero:
///
/// | | value | in terms of `h` |
/// |---|---|---|
/// | `b1` | `ψ^{-1/2} a` | `h` |
/// | `b2` | `ψ^{1/2} a_ψ` | `(h + s h_s)/2` |
/// | `b3` | `ψ^{-1/2} a_θ` | `h_θ` |
/// | `b4` | `ψ^{-1/2} a_θθ` | `h_θθ` |
/// | `b5` | `ψ^{1/2} a_ψθ` | `(h_θ + s h_sθ)/2` |
/// | `b6` | `ψ^{3/2} a_ψψ` | `(s² h_ss + s h_s - h)/4` |
#[derive(Clone, Debug, PartialEq)]
pub struct Brackets {
    pub b1: BracketField,
    pub b2: BracketField,
    pub b3: BracketField,
    pub b4: BracketField,
    pub b5: BracketField,
    pub b6: BracketField,
}

impl Brackets {
    fn as_array(&self) -> [&BracketField; 6] {
        [&self.b1, &self.b2, &self.b3, &self.b4, &self.b5, &self.b6]
    }
}

pub fn brackets(a: &BracketField) -> Result<Brackets> {
    if a.order() != Order::HALF {
        return Err(Error::InvalidArgument(alloc::format!(
            "brackets expect a field of order 1/2, got {}",
            a.lambda()
        )));
    }
    let grid = a.grid().clone();
    let nodes = grid.nodes();
    let k_max = a.k_max() as i64;
    let mut out: [Vec<SGridFunction>; 6] = Default::default();
    for k in -k_max..=k_max {
        let h = a.mode(k);
        let hs = h.diff_s(1)?;
        let hss = h.diff_s(2)?;
        let ik = Complex64::new(0.0, k as f64);
        let euler: Vec<Complex64> = h
            .values()
            .iter()
            .zip(hs.values())
            .zip(nodes)
            .map(|((v, d), s)| 0.5 * (v + d * s))
            .collect();
        let b6: Vec<Complex64> = h
            .values()
            .iter()
            .zip(hs.values())
            .zip(hss.values())
            .zip(nodes)
            .map(|(((v, d), dd), s)| 0.25 * (dd * (s * s) + d * s - v))
            .collect();
        let mk = |vals: Vec<Complex64>| SGridFunction::new(grid.clone(), vals).expect("grid length");
        out[0].push(h.clone());
        out[1].push(mk(euler.clone()));
        out[2].push(h.map(|_, v| v * ik));
        out[3].push(h.map(|_, v| v * (-(k * k) as f64)));
        out[4].push(mk(euler.iter().map(|v| v * ik).collect()));
        out[5].push(mk(b6));
    }
    let [b1, b2, b3, b4, b5, b6] = out.map(|m| BracketField::new(Order::ZERO, m).expect("odd mode count"));
    Ok(Brackets {
        b1,
        b2,
        b3,
        b4,
        b5,
        b6,
    })
}

/// Evaluates `f(B1..B6)` at every collocation point and re-expands in modes.
fn pointwise(
    a: &BracketField,
    opts: &EvalOptions,
    order: Order,
    f: impl Fn([Complex64; 6]) -> Complex64,
) -> Result<BracketField> {
    let br = brackets(a)?;
    let k_max = a.k_max();
    let k_eval = if opts.dealias { (3 * k_max).div_ceil(2) } else { k_max };
    let samples: Vec<FieldSamples> = br
        .as_array()
        .iter()
        .map(|b| {
            if opts.dealias {
                b.resized(k_eval).to_samples()
            } else {
                b.to_samples()
            }
        })
        .collect();
    let mut out = FieldSamples::zeros(samples[0].n_s, samples[0].n_theta);
    for idx in 0..out.data.len() {
        let vals: [Complex64; 6] = core::array::from_fn(|i| samples[i].data[idx]);
        for (name, v) in [("B1", vals[0]), ("B2", vals[1])] {
            if v.norm() < opts.degeneracy_tol || !v.norm().is_finite() {
                return Err(Error::Degenerate {
                    bracket: name,
                    value: v.norm(),
                    tol: opts.degeneracy_tol,
                });
            }
        }
        out.data[idx] = f(vals);
    }
    let field = BracketField::from_samples(order, a.grid(), &out);
    Ok(if opts.dealias { field.resized(k_max) } else { field })
}

/// Vorticity of the flow described by `a`, as an order-zero field:
///
/// `Ξ = -(1 + B3²/B1²) B6 / B2³ + 2 B3 B5 / (B1² B2²) - B4 / (B1² B2) + 1 / (B1 B2)`.
pub fn xi(a: &BracketField, opts: &EvalOptions) -> Result<BracketField> {
    pointwise(a, opts, Order::ZERO, |[b1, b2, b3, b4, b5, b6]| {
        let b1s = b1 * b1;
        -(1.0 + b3 * b3 / b1s) * b6 / (b2 * b2 * b2) + 2.0 * b3 * b5 / (b1s * b2 * b2) - b4 / (b1s * b2)
            + 1.0 / (b1 * b2)
    })
}

/// Polar velocity components `(u_r, u_θ) = (a_θ / (a a_ψ), 1 / a_ψ)`, both
/// of order 1/2.
pub fn velocity(a: &BracketField, opts: &EvalOptions) -> Result<(BracketField, BracketField)> {
    let ur = pointwise(a, opts, Order::HALF, |[b1, b2, b3, ..]| b3 / (b1 * b2))?;
    let ut = pointwise(a, opts, Order::HALF, |[_, b2, ..]| 1.0 / b2)?;
    Ok((ur, ut))
}

/// Ellipticity `AC - B² = 1/(a² a_ψ⁴)`, as the order-one field `ψ / (B1² B2⁴)`.
pub fn ellipticity(a: &BracketField, opts: &EvalOptions) -> Result<BracketField> {
    pointwise(a, opts, Order::ONE, |[b1, b2, ..]| {
        let b2s = b2 * b2;
        1.0 / (b1 * b1 * b2s * b2s)
    })
}
