use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{sample_points, BracketField, ThetaSeries};

/// Domain boundary `ρ = b(φ)` in polar coordinates about the origin, with
/// the declared width `tau` of its strip of analyticity.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCurve {
    b: ThetaSeries,
    tau: f64,
}

impl BoundaryCurve {
    pub fn new(b: ThetaSeries, tau: f64) -> Result<Self> {
        if !b.is_real(1e-12 * b.max_coeff().max(1.0)) {
            return Err(Error::InvalidArgument("boundary radius must be real-valued".into()));
        }
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!("tau must be positive, got {tau}")));
        }
        let b = b.real_part();
        let dense = (8 * (2 * b.k_max() + 1)).max(512);
        let min = (0..dense)
            .map(|j| b.eval(2.0 * PI * j as f64 / dense as f64).re)
            .fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!(
                "boundary radius must stay positive, min b(φ) = {min}"
            )));
        }
        Ok(BoundaryCurve { b, tau })
    }

    /// Circle of radius `radius` about the origin.
    pub fn circle(k_max: usize, radius: f64, tau: f64) -> Result<Self> {
        Self::new(ThetaSeries::constant(k_max, radius), tau)
    }

    pub fn series(&self) -> &ThetaSeries {
        &self.b
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn radius(&self, phi: f64) -> f64 {
        self.b.eval(phi).re
    }

    /// The curve `c·b`.
    pub fn scaled(&self, c: f64) -> Self {
        BoundaryCurve {
            b: self.b.scale(Complex64::new(c, 0.0)),
            tau: self.tau,
        }
    }

    /// `(1 - t)·unit circle + t·self`.
    pub fn blend_from_unit(&self, t: f64) -> Self {
        let unit = ThetaSeries::constant(self.b.k_max(), 1.0 - t);
        BoundaryCurve {
            b: unit.axpy(Complex64::new(t, 0.0), &self.b),
            tau: self.tau,
        }
    }
}

/// Continuous polar angle `φ(θ)` of the mapped boundary point
/// `p + R a(1,θ) (cos θ, sin θ)`, sampled at the `2K+1` angles.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiAngle {
    /// `φ(θ_j)`.
    pub samples: Vec<f64>,
    /// Periodic part `φ(θ) - θ`.
    pub offset: ThetaSeries,
}

fn wrap(x: f64) -> f64 {
    let y = x - 2.0 * PI * libm::round(x / (2.0 * PI));
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

fn mapped_points(r: f64, p: [f64; 2], trace: &ThetaSeries) -> (Vec<f64>, Vec<[f64; 2]>) {
    let thetas = sample_points(trace.k_max());
    let t = trace.samples();
    let pts = thetas
        .iter()
        .zip(&t)
        .map(|(th, tv)| {
            let rad = r * tv.re;
            [p[0] + rad * libm::cos(*th), p[1] + rad * libm::sin(*th)]
        })
        .collect();
    (thetas, pts)
}

pub fn phi_angle(r: f64, p: [f64; 2], trace: &ThetaSeries) -> Result<PhiAngle> {
    let (thetas, pts) = mapped_points(r, p, trace);
    let raw: Vec<f64> = pts.iter().map(|q| libm::atan2(q[1], q[0])).collect();
    if pts.iter().any(|q| q[0] == 0.0 && q[1] == 0.0) {
        return Err(Error::Winding { winding: 0 });
    }
    let mut phi = Vec::with_capacity(raw.len());
    phi.push(raw[0]);
    for j in 1..raw.len() {
        let prev = phi[j - 1];
        phi.push(prev + wrap(raw[j] - raw[j - 1]));
    }
    let closing = phi[raw.len() - 1] + wrap(raw[0] - raw[raw.len() - 1]) - phi[0];
    let winding = libm::round(closing / (2.0 * PI)) as i64;
    if winding != 1 {
        return Err(Error::Winding { winding });
    }
    let offset: Vec<Complex64> = phi
        .iter()
        .zip(&thetas)
        .map(|(f, t)| Complex64::new(f - t, 0.0))
        .collect();
    Ok(PhiAngle {
        samples: phi,
        offset: ThetaSeries::from_samples(&offset)?,
    })
}

/// `B(θ) = -b(φ)² + R² a(1,θ)² + 2R a(1,θ)(p_x cos θ + p_y sin θ) + |p|²`.
pub fn boundary_op(b: &BoundaryCurve, r: f64, p: [f64; 2], a: &BracketField) -> Result<ThetaSeries> {
    let trace = a.trace();
    let phi = phi_angle(r, p, &trace)?;
    let thetas = sample_points(trace.k_max());
    let vals: Vec<Complex64> = thetas
        .iter()
        .zip(trace.samples())
        .zip(&phi.samples)
        .map(|((th, t), f)| {
            let t = t.re;
            let bb = b.radius(*f);
            let v = -bb * bb
                + r * r * t * t
                + 2.0 * r * t * (p[0] * libm::cos(*th) + p[1] * libm::sin(*th))
                + p[0] * p[0]
                + p[1] * p[1];
            Complex64::new(v, 0.0)
        })
        .collect();
    ThetaSeries::from_samples(&vals)
}

/// The same quantity written as `ρ(θ)² - b(φ(θ))²`, with `ρ` the distance of
/// the mapped boundary point from the origin.
pub fn boundary_op_rho_form(b: &BoundaryCurve, r: f64, p: [f64; 2], a: &BracketField) -> Result<ThetaSeries> {
    let trace = a.trace();
    let phi = phi_angle(r, p, &trace)?;
    let (_, pts) = mapped_points(r, p, &trace);
    let vals: Vec<Complex64> = pts
        .iter()
        .zip(&phi.samples)
        .map(|(q, f)| {
            let bb = b.radius(*f);
            Complex64::new(q[0] * q[0] + q[1] * q[1] - bb * bb, 0.0)
        })
        .collect();
    ThetaSeries::from_samples(&vals)
}

/// Bound on the imaginary excursion of `φ` over the strip of half-width
/// `sigma`: `Σ |(φ-θ)^_k| e^{σ|k|}`.
pub fn strip_excursion(offset: &ThetaSeries, sigma: f64) -> f64 {
    let k_max = offset.k_max() as i64;
    (-k_max..=k_max)
        .filter(|k| *k != 0)
        .map(|k| offset.coeff(k).norm() * libm::exp(sigma * libm::fabs(k as f64)))
        .sum()
}
