//! Fields with a known power-law leading order, `ψ^λ · h(s, θ)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::sgrid::{SGrid, SGridFunction};
use super::theta::{Dft, ThetaSeries};
use crate::error::{Error, Result};

/// Leading order `λ` stored as an integer number of halves, so that shifts
/// are exact.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order(i32);

impl Order {
    pub const ZERO: Order = Order(0);
    pub const HALF: Order = Order(1);
    pub const ONE: Order = Order(2);

    pub const fn from_halves(halves: i32) -> Self {
        Order(halves)
    }

    pub const fn halves(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 * 0.5
    }

    pub const fn shifted(self, halves: i32) -> Self {
        Order(self.0 + halves)
    }
}

/// Point values of `h` on the tensor grid: `N` radial rows of `2K+1` angles.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSamples {
    pub n_s: usize,
    pub n_theta: usize,
    pub data: Vec<Complex64>,
}

impl FieldSamples {
    pub fn zeros(n_s: usize, n_theta: usize) -> Self {
        FieldSamples {
            n_s,
            n_theta,
            data: vec![Complex64::new(0.0, 0.0); n_s * n_theta],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n_theta + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n_theta..(i + 1) * self.n_theta]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.n_theta..(i + 1) * self.n_theta]
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `ψ^λ h(s, θ)` with `h` held per Fourier mode `k = -K..=K` on the s-grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketField {
    order: Order,
    modes: Vec<SGridFunction>,
}

impl BracketField {
    pub fn new(order: Order, modes: Vec<SGridFunction>) -> Result<Self> {
        if modes.is_empty() || modes.len().is_multiple_of(2) {
            return Err(Error::SampleCount {
                expected: modes.len() + 1,
                got: modes.len(),
            });
        }
        let n = modes[0].grid().len();
        if let Some(m) = modes.iter().find(|m| m.grid().len() != n) {
            return Err(Error::GridMismatch(n, m.grid().len()));
        }
        Ok(BracketField { order, modes })
    }

    pub fn zeros(order: Order, grid: &Arc<SGrid>, k_max: usize) -> Self {
        BracketField {
            order,
            modes: vec![SGridFunction::zeros(grid.clone()); 2 * k_max + 1],
        }
    }

    /// Field whose smooth factor depends on `s` only.
    pub fn radial(order: Order, h: SGridFunction, k_max: usize) -> Self {
        let mut out = Self::zeros(order, h.grid(), k_max);
        out.modes[k_max] = h;
        out
    }

    /// Builds `h` from its per-mode radial profiles `h_k(s)`.
    pub fn from_mode_fn(
        order: Order,
        grid: &Arc<SGrid>,
        k_max: usize,
        f: impl Fn(i64, f64) -> Complex64,
    ) -> Self {
        let modes = (-(k_max as i64)..=k_max as i64)
            .map(|k| SGridFunction::from_fn(grid.clone(), |s| f(k, s)))
            .collect();
        BracketField { order, modes }
    }

    /// Builds `h` from point values `h(s, θ)` at the collocation points.
    pub fn from_point_fn(
        order: Order,
        grid: &Arc<SGrid>,
        k_max: usize,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Self {
        let thetas = super::theta::sample_points(k_max);
        let mut smp = FieldSamples::zeros(grid.len(), thetas.len());
        for (i, s) in grid.nodes().iter().enumerate() {
            for (j, t) in thetas.iter().enumerate() {
                smp.data[i * thetas.len() + j] = f(*s, *t);
            }
        }
        Self::from_samples(order, grid, &smp)
    }

    pub fn from_samples(order: Order, grid: &Arc<SGrid>, smp: &FieldSamples) -> Self {
        let k_max = smp.n_theta / 2;
        let dft = Dft::new(k_max);
        let mut out = Self::zeros(order, grid, k_max);
        let mut buf = vec![Complex64::new(0.0, 0.0); smp.n_theta];
        for i in 0..smp.n_s {
            dft.forward(smp.row(i), &mut buf);
            for (m, c) in out.modes.iter_mut().zip(&buf) {
                m.values_mut()[i] = *c;
            }
        }
        out
    }

    pub fn to_samples(&self) -> FieldSamples {
        let k_max = self.k_max();
        let n = self.grid().len();
        let dft = Dft::new(k_max);
        let mut smp = FieldSamples::zeros(n, 2 * k_max + 1);
        let mut col = vec![Complex64::new(0.0, 0.0); 2 * k_max + 1];
        for i in 0..n {
            for (c, m) in col.iter_mut().zip(&self.modes) {
                *c = m.values()[i];
            }
            dft.inverse(&col, smp.row_mut(i));
        }
        smp
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn lambda(&self) -> f64 {
        self.order.value()
    }

    pub fn k_max(&self) -> usize {
        self.modes.len() / 2
    }

    pub fn grid(&self) -> &Arc<SGrid> {
        self.modes[0].grid()
    }

    /// Radial profile `h_k(s)`.
    pub fn mode(&self, k: i64) -> &SGridFunction {
        &self.modes[(k + self.k_max() as i64) as usize]
    }

    pub fn mode_mut(&mut self, k: i64) -> &mut SGridFunction {
        let k_max = self.k_max() as i64;
        &mut self.modes[(k + k_max) as usize]
    }

    pub fn modes(&self) -> &[SGridFunction] {
        &self.modes
    }

    /// Multiplication by `ψ^{halves/2}`: the smooth factor is untouched.
    pub fn shifted(&self, halves: i32) -> Self {
        BracketField {
            order: self.order.shifted(halves),
            modes: self.modes.clone(),
        }
    }

    /// Re-labels the field with a different leading order without touching `h`.
    pub fn with_order(mut self, order: Order) -> Self {
        self.order = order;
        self
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::InvalidArgument(alloc::format!(
                "cannot add fields of order {} and {}",
                self.lambda(),
                other.lambda()
            )));
        }
        if self.k_max() != other.k_max() || self.grid().len() != other.grid().len() {
            return Err(Error::GridMismatch(self.grid().len(), other.grid().len()));
        }
        Ok(())
    }

    /// `self + alpha·other`; both must share `λ`, `K` and the grid.
    pub fn axpy(&self, alpha: Complex64, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let modes = self
            .modes
            .iter()
            .zip(&other.modes)
            .map(|(a, b)| {
                let vals = a
                    .values()
                    .iter()
                    .zip(b.values())
                    .map(|(x, y)| x + alpha * y)
                    .collect();
                SGridFunction::new(a.grid().clone(), vals).expect("same grid")
            })
            .collect();
        Ok(BracketField {
            order: self.order,
            modes,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let modes = self.modes.iter().map(|m| m.map(|_, v| v * c)).collect();
        BracketField {
            order: self.order,
            modes,
        }
    }

    /// Leading coefficient `v(θ) = h(0, θ)`.
    pub fn leading(&self) -> ThetaSeries {
        ThetaSeries::from_coeffs(self.modes.iter().map(|m| m.at_origin()).collect())
            .expect("odd mode count")
    }

    /// Boundary trace `h(1, θ)`.
    pub fn trace(&self) -> ThetaSeries {
        ThetaSeries::from_coeffs(self.modes.iter().map(|m| m.at_boundary()).collect())
            .expect("odd mode count")
    }

    /// Splits into `v(θ)ψ^λ + w` with `w` vanishing to higher order.
    pub fn decompose_leading(&self) -> (ThetaSeries, BracketField) {
        let v = self.leading();
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let h0 = m.at_origin();
                m.map(|_, x| x - h0)
            })
            .collect();
        (
            v,
            BracketField {
                order: self.order,
                modes,
            },
        )
    }

    /// Inverse of [`decompose_leading`](Self::decompose_leading).
    pub fn compose_leading(v: &ThetaSeries, w: &BracketField) -> Self {
        let k_max = w.k_max();
        let v = v.resized(k_max);
        let modes = w
            .modes
            .iter()
            .enumerate()
            .map(|(idx, m)| {
                let c = v.coeffs()[idx];
                m.map(|_, x| x + c)
            })
            .collect();
        BracketField {
            order: w.order,
            modes,
        }
    }

    /// Angular series of `h(s, ·)` at an arbitrary radius.
    pub fn theta_series_at(&self, s: f64) -> ThetaSeries {
        let row = self.grid().lagrange_row(s);
        let coeffs = self
            .modes
            .iter()
            .map(|m| m.values().iter().zip(&row).map(|(v, l)| v * l).sum())
            .collect();
        ThetaSeries::from_coeffs(coeffs).expect("odd mode count")
    }

    /// Smooth factor `h(s, θ)` at an arbitrary point.
    pub fn h_at(&self, s: f64, theta: f64) -> Complex64 {
        self.theta_series_at(s).eval(theta)
    }

    /// Field value `ψ^λ h(s, θ)`.
    pub fn value_at(&self, s: f64, theta: f64) -> Complex64 {
        self.h_at(s, theta) * libm::pow(s, 2.0 * self.lambda())
    }

    /// Largest `|ĥ_k(s_i)|` over all modes and nodes.
    pub fn max_abs_h(&self) -> f64 {
        self.modes.iter().map(|m| m.sup_norm()).fold(0.0, f64::max)
    }

    /// Pads or truncates the angular band.
    pub fn resized(&self, k_max: usize) -> Self {
        let grid = self.grid().clone();
        let own = self.k_max() as i64;
        let modes = (-(k_max as i64)..=k_max as i64)
            .map(|k| {
                if k.abs() <= own {
                    self.mode(k).clone()
                } else {
                    SGridFunction::zeros(grid.clone())
                }
            })
            .collect();
        BracketField {
            order: self.order,
            modes,
        }
    }
}
