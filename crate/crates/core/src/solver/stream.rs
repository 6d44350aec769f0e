use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::FlowLineFamily;

/// Uniform tensor grid of query points, inclusive of both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl CartesianGrid {
    pub fn new(x: [f64; 2], y: [f64; 2], nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(alloc::format!(
                "grid needs at least 2 points per axis, got {nx}x{ny}"
            )));
        }
        if !(x[1] > x[0] && y[1] > y[0]) {
            return Err(Error::InvalidArgument("grid bounds must be increasing".into()));
        }
        Ok(CartesianGrid {
            x_min: x[0],
            x_max: x[1],
            y_min: y[0],
            y_max: y[1],
            nx,
            ny,
        })
    }

    /// Symmetric box `[-L, L]²` with `L` the largest distance of the boundary
    /// curve from the origin.
    pub fn covering(sol: &FlowLineFamily, nx: usize, ny: usize) -> Result<Self> {
        let samples = 8 * (2 * sol.a.k_max() + 1);
        let l = (0..samples)
            .map(|j| {
                let t = 2.0 * core::f64::consts::PI * j as f64 / samples as f64;
                let q = sol.point(1.0, t);
                libm::hypot(q[0], q[1])
            })
            .fold(0.0, f64::max);
        Self::new([-l, l], [-l, l], nx, ny)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * j as f64 / (self.ny - 1) as f64
    }
}

/// `ψ` on a [`CartesianGrid`], row-major in `y` then `x`; `NaN` marks points
/// outside the boundary curve.
#[derive(Clone, Debug, PartialEq)]
pub struct StreamField {
    pub grid: CartesianGrid,
    pub psi: Vec<f64>,
}

impl StreamField {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let v = self.psi[j * self.grid.nx + i];
        (!v.is_nan()).then_some(v)
    }

    pub fn outside_count(&self) -> usize {
        self.psi.iter().filter(|v| v.is_nan()).count()
    }
}

/// `ψ` at one point, or `None` outside the boundary curve.
pub fn stream_at(sol: &FlowLineFamily, x: f64, y: f64) -> Option<f64> {
    let dx = x - sol.p[0];
    let dy = y - sol.p[1];
    let r = libm::hypot(dx, dy);
    if r == 0.0 {
        return Some(0.0);
    }
    let theta = libm::atan2(dy, dx);
    let grid = sol.a.grid();
    let step = Complex64::new(libm::cos(theta), libm::sin(theta));
    let k_max = sol.a.k_max() as i64;
    // h(s_i, θ) at every node
    let column: Vec<f64> = (0..grid.len())
        .map(|i| {
            let mut acc = sol.a.mode(0).values()[i];
            let mut up = Complex64::new(1.0, 0.0);
            for k in 1..=k_max {
                up *= step;
                acc += sol.a.mode(k).values()[i] * up + sol.a.mode(-k).values()[i] * up.conj();
            }
            acc.re
        })
        .collect();
    let radius = |s: f64| sol.r * s * grid.interpolate(&column, s);
    let outer = radius(1.0);
    if r > outer * (1.0 + 1e-12) {
        return None;
    }
    if r >= outer {
        return Some(1.0);
    }
    // the radius is increasing in s on admissible families
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-16 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if radius(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    Some(s * s)
}

/// `ψ` at every point of `grid`.
pub fn reconstruct_stream(sol: &FlowLineFamily, grid: &CartesianGrid) -> StreamField {
    let mut psi = Vec::with_capacity(grid.nx * grid.ny);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            psi.push(stream_at(sol, grid.x(i), grid.y(j)).unwrap_or(f64::NAN));
        }
    }
    StreamField { grid: *grid, psi }
}
