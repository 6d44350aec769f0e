//! Explicit inverse of the linearization at the circular flow.
//!
//! The operator is `L = ψ²∂²_ψ + 2ψ∂_ψ + ¼(1 + ∂²_θ)` with the boundary
//! condition `R + p_x cos θ + p_y sin θ + u(1, θ) = g(θ)`. Per Fourier mode it
//! factors into two first-order Cauchy–Euler operators whose inverses are
//! weighted averages.

mod weighted;

pub use weighted::{weighted_average_matrix, Anchor};

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{BracketField, Order, SGrid, SGridFunction, ThetaSeries};
use weighted::mat_mul;

/// Right-hand side `(f, g)` of the linear problem; `f` has order 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearData {
    pub f: BracketField,
    pub g: ThetaSeries,
}

impl LinearData {
    /// Removes the `e^{±2iθ}` part of the leading term of `f`, which lies
    /// outside the range of `L`, and returns its size alongside the data.
    pub fn projected(f: BracketField, g: ThetaSeries) -> Result<(Self, f64)> {
        if f.order() != Order::HALF {
            return Err(Error::InvalidArgument(alloc::format!(
                "interior data must have order 1/2, got {}",
                f.lambda()
            )));
        }
        let mut f = f;
        let mut removed: f64 = 0.0;
        if f.k_max() >= 2 {
            for k in [-2i64, 2] {
                let lead = f.mode(k).at_origin();
                removed = removed.max(lead.norm());
                f.mode_mut(k).values_mut().iter_mut().for_each(|v| *v -= lead);
            }
        }
        if removed > 0.0 {
            log::debug!("projected cokernel modes of size {removed:.3e} from linear data");
        }
        Ok((LinearData { f, g }, removed))
    }

    /// Accepts interior data of order zero (the form carrying `ψ^{-1/2}`)
    /// and multiplies by `ψ^{1/2}`.
    pub fn from_order_zero(f0: BracketField, g: ThetaSeries) -> Result<(Self, f64)> {
        if f0.order() != Order::ZERO {
            return Err(Error::InvalidArgument("expected interior data of order 0".into()));
        }
        Self::projected(f0.shifted(1), g)
    }
}

/// Solution `(R, p, u)` of the linear problem.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub r: Complex64,
    pub p: [Complex64; 2],
    /// Full solution of order 1/2.
    pub u: BracketField,
    /// Particular leading coefficient from the algebraic solve (`v̂_{±2} = 0`).
    pub v: ThetaSeries,
    /// Particular remainder; its trace vanishes for `|k| ≥ 3`.
    pub w: BracketField,
    /// Coefficients `c_k` of the homogeneous modes `ψ^{(|k|-1)/2} e^{ikθ}`, `|k| ≥ 2`.
    pub homogeneous: ThetaSeries,
}

/// `L u` for a field of any order: on `ψ^λ h` it acts as
/// `(s²/4) h'' + (3/4 + λ) s h' + (λ² + λ + (1 - k²)/4) h` per mode.
pub fn apply_l(u: &BracketField) -> BracketField {
    let lambda = u.lambda();
    let grid = u.grid().clone();
    let nodes = grid.nodes();
    let k_max = u.k_max() as i64;
    let modes = (-k_max..=k_max)
        .map(|k| {
            let h = u.mode(k);
            let d1 = h.diff_s(1).expect("order 1");
            let d2 = h.diff_s(2).expect("order 2");
            let c0 = lambda * lambda + lambda + 0.25 * (1.0 - (k * k) as f64);
            let vals = nodes
                .iter()
                .zip(h.values())
                .zip(d1.values().iter().zip(d2.values()))
                .map(|((s, v), (a, b))| b * (0.25 * s * s) + a * ((0.75 + lambda) * s) + v * c0)
                .collect();
            SGridFunction::new(grid.clone(), vals).expect("grid length")
        })
        .collect();
    BracketField::new(u.order(), modes).expect("odd mode count")
}

/// Leading-term solve `(1 - k²/4) v̂_k = ξ̂_k`, with `v̂_{±2} = 0`.
pub fn solve_leading(xi: &ThetaSeries, tol: f64) -> Result<ThetaSeries> {
    let bad = xi.coeff(2).norm().max(xi.coeff(-2).norm());
    if bad > tol {
        return Err(Error::Cokernel { magnitude: bad });
    }
    let mut v = ThetaSeries::zeros(xi.k_max());
    for k in -(xi.k_max() as i64)..=xi.k_max() as i64 {
        if k.abs() != 2 {
            v.set(k, xi.coeff(k) / (1.0 - 0.25 * (k * k) as f64));
        }
    }
    Ok(v)
}

fn apply_matrix(mat: &[f64], f: &SGridFunction) -> SGridFunction {
    let n = f.grid().len();
    let vals = (0..n)
        .map(|i| {
            mat[i * n..(i + 1) * n]
                .iter()
                .zip(f.values())
                .map(|(m, v)| v * *m)
                .sum()
        })
        .collect();
    SGridFunction::new(f.grid().clone(), vals).expect("grid length")
}

/// `(L_k^+)^{-1} η = ψ^{-(1+|k|)/2} ∫₀^ψ t^{(|k|-1)/2} η(t) dt` on function values.
pub fn apply_lk_plus_inverse(eta: &SGridFunction, k: i64) -> SGridFunction {
    let mu = 0.5 * (1.0 + k.abs() as f64);
    apply_matrix(&weighted_average_matrix(eta.grid(), mu, Anchor::Origin), eta)
}

/// `(L_k^-)^{-1} η`, anchored at `ψ = 0` for `|k| < 3` and at `ψ = 1` otherwise.
pub fn apply_lk_minus_inverse(eta: &SGridFunction, k: i64) -> SGridFunction {
    let mu = 0.5 * (1.0 - k.abs() as f64);
    let anchor = if k.abs() < 3 { Anchor::Origin } else { Anchor::Boundary };
    apply_matrix(&weighted_average_matrix(eta.grid(), mu, anchor), eta)
}

/// Precomputed per-mode remainder inverses on one grid and band.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    grid: Arc<SGrid>,
    k_max: usize,
    /// `(L_k^-)^{-1}(L_k^+)^{-1}` in the smooth-factor form, indexed by `|k|`.
    remainder_ops: Vec<Vec<f64>>,
    /// Tolerance on the cokernel modes of the leading data.
    pub cokernel_tol: f64,
}

impl LinearSolver {
    pub fn new(grid: &Arc<SGrid>, k_max: usize) -> Self {
        let n = grid.len();
        let remainder_ops = (0..=k_max)
            .map(|k| {
                // on the smooth factor h of ψ^{1/2} h the factors shift by 1/2
                let kf = k as f64;
                let plus = weighted_average_matrix(grid, 1.0 + 0.5 * kf, Anchor::Origin);
                let anchor = if k < 3 { Anchor::Origin } else { Anchor::Boundary };
                let minus = weighted_average_matrix(grid, 1.0 - 0.5 * kf, anchor);
                let mut op = mat_mul(n, &minus, &plus);
                for j in 0..n {
                    op[j] = 0.0;
                    op[j * n] = 0.0;
                }
                op
            })
            .collect();
        LinearSolver {
            grid: grid.clone(),
            k_max,
            remainder_ops,
            cokernel_tol: 1e-9,
        }
    }

    pub fn grid(&self) -> &Arc<SGrid> {
        &self.grid
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Solves `L w = η` mode by mode for remainder data (`η` of order 1/2
    /// whose smooth factor vanishes at `s = 0`).
    pub fn solve_remainder(&self, eta: &BracketField) -> Result<BracketField> {
        self.check(eta)?;
        let k = self.k_max as i64;
        let modes = (-k..=k)
            .map(|k| apply_matrix(&self.remainder_ops[k.unsigned_abs() as usize], eta.mode(k)))
            .collect();
        BracketField::new(Order::HALF, modes)
    }

    fn check(&self, f: &BracketField) -> Result<()> {
        if f.order() != Order::HALF {
            return Err(Error::InvalidArgument(alloc::format!(
                "linear data must have order 1/2, got {}",
                f.lambda()
            )));
        }
        if f.k_max() != self.k_max || f.grid().len() != self.grid.len() {
            return Err(Error::GridMismatch(self.grid.len(), f.grid().len()));
        }
        Ok(())
    }

    /// Full solve: leading term, remainder, then boundary matching for `R`,
    /// `p` and the homogeneous coefficients.
    pub fn solve(&self, data: &LinearData) -> Result<LinearSolution> {
        self.check(&data.f)?;
        let kk = self.k_max as i64;
        let g = band_limit(&data.g, self.k_max);
        let (xi, eta) = data.f.decompose_leading();
        let scale = xi.max_coeff().max(1.0);
        let v = solve_leading(&xi, self.cokernel_tol * scale)?;
        let w = if eta.max_abs_h() == 0.0 {
            eta
        } else {
            self.solve_remainder(&eta)?
        };
        let wb = |k: i64| w.mode(k).at_boundary();

        let r = g.coeff(0) - v.coeff(0) - wb(0);
        let sum = |x: Complex64, y: Complex64| x + y;
        let px = sum(g.coeff(1), g.coeff(-1)) - sum(v.coeff(1), v.coeff(-1)) - sum(wb(1), wb(-1));
        let minus_i_py = (g.coeff(1) - g.coeff(-1)) - (v.coeff(1) - v.coeff(-1)) - (wb(1) - wb(-1));
        let py = Complex64::new(0.0, 1.0) * minus_i_py;

        let mut homogeneous = ThetaSeries::zeros(self.k_max);
        for k in -kk..=kk {
            let c = match k.abs() {
                0 | 1 => continue,
                2 => g.coeff(k) - wb(k),
                _ => g.coeff(k) - v.coeff(k),
            };
            homogeneous.set(k, c);
        }
        let modes = (-kk..=kk)
            .map(|k| {
                let c = homogeneous.coeff(k);
                let vk = v.coeff(k);
                let pow = (k.abs() - 2).max(0) as i32;
                w.mode(k).map(|s, x| {
                    let hom = if k.abs() >= 2 { c * pow_int(s, pow) } else { Complex64::new(0.0, 0.0) };
                    x + vk + hom
                })
            })
            .collect();
        let u = BracketField::new(Order::HALF, modes)?;
        Ok(LinearSolution {
            r,
            p: [px, py],
            u,
            v,
            w,
            homogeneous,
        })
    }
}

fn pow_int(s: f64, p: i32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..p {
        acc *= s;
    }
    acc
}

fn band_limit(g: &ThetaSeries, k_max: usize) -> ThetaSeries {
    if g.k_max() > k_max {
        let dropped = (k_max as i64 + 1..=g.k_max() as i64)
            .map(|k| g.coeff(k).norm().max(g.coeff(-k).norm()))
            .fold(0.0, f64::max);
        if dropped > 0.0 {
            log::warn!("boundary data modes above K = {k_max} dropped (largest {dropped:.3e})");
        }
    }
    g.resized(k_max)
}

/// Solution of the homogeneous problem `L u = 0` with boundary data `g`.
pub fn solve_homogeneous(g: &ThetaSeries, grid: &Arc<SGrid>, k_max: usize) -> LinearSolution {
    // the remainder operators are never touched when f = 0
    let solver = LinearSolver {
        grid: grid.clone(),
        k_max,
        remainder_ops: Vec::new(),
        cokernel_tol: 0.0,
    };
    let data = LinearData {
        f: BracketField::zeros(Order::HALF, grid, k_max),
        g: g.clone(),
    };
    solver.solve(&data).expect("zero interior data is always solvable")
}

/// One-shot remainder solve; prefer [`LinearSolver`] for repeated use.
pub fn solve_remainder(eta: &BracketField) -> Result<BracketField> {
    LinearSolver::new(eta.grid(), eta.k_max()).solve_remainder(eta)
}

/// One-shot full solve; prefer [`LinearSolver`] for repeated use.
pub fn solve_linear(data: &LinearData) -> Result<LinearSolution> {
    LinearSolver::new(data.f.grid(), data.f.k_max()).solve(data)
}
