//! Chebyshev–Gauss–Lobatto collocation in `s = √ψ` on `[0, 1]`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Collocation grid `s_j = sin²(πj / (2(N-1)))`, `j = 0..N`, with its
/// spectral differentiation matrices.
#[derive(Debug)]
pub struct SGrid {
    nodes: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    bary: Vec<f64>,
    cc: Vec<f64>,
}

impl PartialEq for SGrid {
    fn eq(&self, other: &Self) -> bool {
        self.nodes.len() == other.nodes.len()
    }
}

impl SGrid {
    pub fn new(n: usize) -> Result<Arc<Self>> {
        if n < 3 {
            return Err(Error::InvalidArgument(alloc::format!(
                "an s-grid needs at least 3 nodes, got {n}"
            )));
        }
        let deg = n - 1;
        let half_angle: Vec<f64> = (0..n).map(|j| PI * j as f64 / (2 * deg) as f64).collect();
        let mut nodes: Vec<f64> = half_angle.iter().map(|a| libm::sin(*a) * libm::sin(*a)).collect();
        nodes[0] = 0.0;
        nodes[deg] = 1.0;
        // s_i - s_j = sin(a_i + a_j) sin(a_i - a_j), free of cancellation
        let diff = |i: usize, j: usize| {
            libm::sin(half_angle[i] + half_angle[j]) * libm::sin(half_angle[i] - half_angle[j])
        };
        let cw = |j: usize| if j == 0 || j == deg { 2.0 } else { 1.0 };
        let sign = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };

        let mut d1 = vec![0.0; n * n];
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                if i != j {
                    let v = cw(i) / cw(j) * sign(i + j) / diff(i, j);
                    d1[i * n + j] = v;
                    row += v;
                }
            }
            d1[i * n + i] = -row;
        }
        let mut d2 = vec![0.0; n * n];
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                if i != j {
                    let v = 2.0 * d1[i * n + j] * (d1[i * n + i] - 1.0 / diff(i, j));
                    d2[i * n + j] = v;
                    row += v;
                }
            }
            d2[i * n + i] = -row;
        }
        let bary = (0..n).map(|j| sign(j) / cw(j)).collect();

        let mut cc = vec![0.0; n];
        for (j, w) in cc.iter_mut().enumerate() {
            let theta = PI * j as f64 / deg as f64;
            let mut acc = 1.0;
            for k in 1..=deg / 2 {
                let b = if 2 * k == deg { 1.0 } else { 2.0 };
                acc -= b / (4.0 * (k * k) as f64 - 1.0) * libm::cos(2.0 * k as f64 * theta);
            }
            let c = if j == 0 || j == deg { 1.0 } else { 2.0 };
            *w = 0.5 * c / deg as f64 * acc;
        }
        Ok(Arc::new(SGrid {
            nodes,
            d1,
            d2,
            bary,
            cc,
        }))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Row-major `N×N` differentiation matrix of order 1 or 2.
    pub fn diff_matrix(&self, order: u32) -> &[f64] {
        match order {
            1 => &self.d1,
            2 => &self.d2,
            _ => panic!("differentiation order must be 1 or 2"),
        }
    }

    /// Clenshaw–Curtis weights for `∫₀¹ f ds`.
    pub fn cc_weights(&self) -> &[f64] {
        &self.cc
    }

    /// Applies a differentiation matrix in the form `Σ_{j≠i} D_ij (f_j - f_i)`,
    /// which annihilates constants exactly and keeps rounding proportional
    /// to the variation of `f`.
    pub(crate) fn apply_diff<T>(&self, order: u32, x: &[T]) -> Vec<T>
    where
        T: Copy + Default + core::ops::Add<Output = T> + core::ops::Sub<Output = T> + core::ops::Mul<f64, Output = T>,
    {
        let n = self.len();
        let mat = self.diff_matrix(order);
        (0..n)
            .map(|i| {
                let xi = x[i];
                let row = &mat[i * n..(i + 1) * n];
                let mut acc = T::default();
                for j in 0..n {
                    if j != i {
                        acc = acc + (x[j] - xi) * row[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Lagrange basis values `ℓ_j(s)` of the grid interpolant.
    pub fn lagrange_row(&self, s: f64) -> Vec<f64> {
        let n = self.len();
        let mut row = vec![0.0; n];
        if let Some(j) = self.nodes.iter().position(|x| *x == s) {
            row[j] = 1.0;
            return row;
        }
        let mut denom = 0.0;
        for j in 0..n {
            let t = self.bary[j] / (s - self.nodes[j]);
            row[j] = t;
            denom += t;
        }
        row.iter_mut().for_each(|r| *r /= denom);
        row
    }

    /// Barycentric evaluation of the grid interpolant at `s`.
    pub fn interpolate<T>(&self, values: &[T], s: f64) -> T
    where
        T: Copy + Default + core::ops::Add<Output = T> + core::ops::Mul<f64, Output = T>,
    {
        self.lagrange_row(s)
            .iter()
            .zip(values)
            .fold(T::default(), |acc, (l, v)| acc + *v * *l)
    }
}

/// Values of a smooth function of `s` at the grid nodes.
#[derive(Clone, Debug)]
pub struct SGridFunction {
    grid: Arc<SGrid>,
    values: Vec<Complex64>,
}

impl PartialEq for SGridFunction {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl SGridFunction {
    pub fn new(grid: Arc<SGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SampleCount {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(SGridFunction { grid, values })
    }

    pub fn zeros(grid: Arc<SGrid>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        SGridFunction { grid, values }
    }

    pub fn from_fn(grid: Arc<SGrid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|s| f(*s)).collect();
        SGridFunction { grid, values }
    }

    pub fn from_real_fn(grid: Arc<SGrid>, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |s| Complex64::new(f(s), 0.0))
    }

    pub fn grid(&self) -> &Arc<SGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn at_origin(&self) -> Complex64 {
        self.values[0]
    }

    pub fn at_boundary(&self) -> Complex64 {
        self.values[self.values.len() - 1]
    }

    /// Collocation derivative in `s`, order 1 or 2.
    pub fn diff_s(&self, order: u32) -> Result<Self> {
        if order == 0 || order > 2 {
            return Err(Error::InvalidArgument(alloc::format!(
                "s-derivative order must be 1 or 2, got {order}"
            )));
        }
        let values = self.grid.apply_diff(order, &self.values);
        Ok(SGridFunction {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        self.grid.interpolate(&self.values, s)
    }

    /// The same function sampled on another grid.
    pub fn interpolate_to(&self, grid: &Arc<SGrid>) -> Self {
        if Arc::ptr_eq(grid, &self.grid) || grid.nodes() == self.grid.nodes() {
            return SGridFunction {
                grid: grid.clone(),
                values: self.values.clone(),
            };
        }
        SGridFunction::from_fn(grid.clone(), |s| self.eval(s))
    }

    /// Clenshaw–Curtis approximation of `∫₀¹ f ds`.
    pub fn integrate(&self) -> Complex64 {
        self.values
            .iter()
            .zip(self.grid.cc_weights())
            .map(|(v, w)| v * w)
            .sum()
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(s, v)| f(*s, *v))
            .collect();
        SGridFunction {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
