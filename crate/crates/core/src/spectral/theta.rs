//! Truncated Fourier series on the circle.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Discrete Fourier transform on `M = 2K + 1` equispaced samples
/// `θ_j = 2πj / M`. A direct O(M²) sum; `M` stays below a few hundred.
#[derive(Clone, Debug)]
pub(crate) struct Dft {
    k_max: usize,
    twiddle: Vec<Complex64>,
}

impl Dft {
    pub(crate) fn new(k_max: usize) -> Self {
        let m = 2 * k_max + 1;
        let twiddle = (0..m)
            .map(|n| {
                let t = 2.0 * PI * n as f64 / m as f64;
                Complex64::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        Dft { k_max, twiddle }
    }

    fn m(&self) -> usize {
        self.twiddle.len()
    }

    /// Samples to coefficients ordered `k = -K..=K`.
    pub(crate) fn forward(&self, samples: &[Complex64], out: &mut [Complex64]) {
        let m = self.m();
        let inv = 1.0 / m as f64;
        // non-constant modes are summed from deviations about the mean, so
        // constant data transforms without rounding noise
        let mean = samples.iter().sum::<Complex64>() * inv;
        for (idx, o) in out.iter_mut().enumerate() {
            let k = idx as i64 - self.k_max as i64;
            if k == 0 {
                *o = mean;
                continue;
            }
            let step = (-k).rem_euclid(m as i64) as usize;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut pos = 0usize;
            for f in samples {
                acc += (f - mean) * self.twiddle[pos];
                pos += step;
                if pos >= m {
                    pos -= m;
                }
            }
            *o = acc * inv;
        }
    }

    /// Coefficients ordered `k = -K..=K` to samples.
    pub(crate) fn inverse(&self, coeffs: &[Complex64], out: &mut [Complex64]) {
        let m = self.m();
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, c) in coeffs.iter().enumerate() {
                let k = idx as i64 - self.k_max as i64;
                let pos = (k * j as i64).rem_euclid(m as i64) as usize;
                acc += c * self.twiddle[pos];
            }
            *o = acc;
        }
    }
}

/// Complex Fourier series `Σ_{|k|≤K} ĉ_k e^{ikθ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSeries {
    k_max: usize,
    coeffs: Vec<Complex64>,
}

impl ThetaSeries {
    pub fn zeros(k_max: usize) -> Self {
        ThetaSeries {
            k_max,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * k_max + 1],
        }
    }

    pub fn constant(k_max: usize, c: f64) -> Self {
        let mut s = Self::zeros(k_max);
        s.set(0, Complex64::new(c, 0.0));
        s
    }

    /// A single exponential `c e^{ikθ}`.
    pub fn mode(k_max: usize, k: i64, c: Complex64) -> Self {
        let mut s = Self::zeros(k_max);
        s.set(k, c);
        s
    }

    /// Coefficients ordered `k = -K..=K`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::SampleCount {
                expected: coeffs.len() + 1,
                got: coeffs.len(),
            });
        }
        Ok(ThetaSeries {
            k_max: coeffs.len() / 2,
            coeffs,
        })
    }

    /// Real trigonometric form `a_0 + Σ a_n cos nθ + b_n sin nθ`; `sin[0]` is ignored.
    pub fn from_cos_sin(k_max: usize, cos: &[f64], sin: &[f64]) -> Self {
        let mut s = Self::zeros(k_max);
        for n in 0..=k_max {
            let a = cos.get(n).copied().unwrap_or(0.0);
            let b = if n == 0 { 0.0 } else { sin.get(n).copied().unwrap_or(0.0) };
            if n == 0 {
                s.set(0, Complex64::new(a, 0.0));
            } else {
                s.set(n as i64, Complex64::new(0.5 * a, -0.5 * b));
                s.set(-(n as i64), Complex64::new(0.5 * a, 0.5 * b));
            }
        }
        s
    }

    /// Transform of `2K + 1` equispaced samples starting at `θ = 0`.
    pub fn from_samples(samples: &[Complex64]) -> Result<Self> {
        if samples.is_empty() || samples.len().is_multiple_of(2) {
            return Err(Error::SampleCount {
                expected: samples.len() + 1,
                got: samples.len(),
            });
        }
        let k_max = samples.len() / 2;
        let mut out = Self::zeros(k_max);
        Dft::new(k_max).forward(samples, &mut out.coeffs);
        Ok(out)
    }

    pub fn from_fn(k_max: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let samples: Vec<Complex64> = sample_points(k_max).into_iter().map(f).collect();
        Self::from_samples(&samples).expect("odd sample count")
    }

    pub fn from_real_fn(k_max: usize, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(k_max, |t| Complex64::new(f(t), 0.0))
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Coefficients ordered `k = -K..=K`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// `ĉ_k`, zero outside the stored band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.k_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.k_max as i64) as usize]
        }
    }

    /// Sets `ĉ_k`; modes outside the band are ignored.
    pub fn set(&mut self, k: i64, c: Complex64) {
        if k.unsigned_abs() as usize <= self.k_max {
            self.coeffs[(k + self.k_max as i64) as usize] = c;
        }
    }

    pub fn samples(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * self.k_max + 1];
        Dft::new(self.k_max).inverse(&self.coeffs, &mut out);
        out
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let step = Complex64::new(libm::cos(theta), libm::sin(theta));
        let mut acc = self.coeff(0);
        let mut up = Complex64::new(1.0, 0.0);
        for k in 1..=self.k_max as i64 {
            up *= step;
            acc += self.coeff(k) * up + self.coeff(-k) * up.conj();
        }
        acc
    }

    /// `ĉ_k ← (ik)^order ĉ_k`.
    pub fn diff(&self, order: u32) -> Self {
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            let k = idx as f64 - self.k_max as f64;
            *c *= Complex64::new(0.0, k).powu(order);
        }
        out
    }

    /// Truncates or zero-pads to a new cutoff.
    pub fn resized(&self, k_max: usize) -> Self {
        let mut out = Self::zeros(k_max);
        let lim = k_max.min(self.k_max) as i64;
        for k in -lim..=lim {
            out.set(k, self.coeff(k));
        }
        out
    }

    pub fn is_real(&self, tol: f64) -> bool {
        (0..=self.k_max as i64).all(|k| (self.coeff(k) - self.coeff(-k).conj()).norm() <= tol)
    }

    /// Enforces `ĉ_{-k} = conj(ĉ_k)` by averaging.
    pub fn real_part(&self) -> Self {
        let mut out = self.clone();
        for k in 0..=self.k_max as i64 {
            let c = 0.5 * (self.coeff(k) + self.coeff(-k).conj());
            out.set(k, c);
            out.set(-k, c.conj());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// `self + alpha·other`, on the larger of the two bands.
    pub fn axpy(&self, alpha: Complex64, other: &Self) -> Self {
        let k_max = self.k_max.max(other.k_max);
        let mut out = self.resized(k_max);
        for k in -(k_max as i64)..=k_max as i64 {
            let c = out.coeff(k) + alpha * other.coeff(k);
            out.set(k, c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|x| *x *= c);
        out
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Sample angles `θ_j = 2πj / (2K + 1)`.
pub fn sample_points(k_max: usize) -> Vec<f64> {
    let m = 2 * k_max + 1;
    (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
}
