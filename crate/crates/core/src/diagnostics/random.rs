//! Random smooth test data with coefficients `e^{-|k|/2}·N(0,1)`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::spectral::{BracketField, Order, SGrid, ThetaSeries};

pub(crate) fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub(crate) fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Chebyshev series on `[0, 1]` with `e^{-n/2}`-decaying normal coefficients.
pub fn random_chebyshev(rng: &mut ChaCha8Rng, terms: usize) -> Vec<f64> {
    (0..terms).map(|n| libm::exp(-0.5 * n as f64) * normal(rng)).collect()
}

/// Evaluates a Chebyshev series on `[0, 1]`.
pub fn eval_chebyshev(coeffs: &[f64], x: f64) -> f64 {
    let t = 2.0 * x - 1.0;
    let (mut b1, mut b2) = (0.0, 0.0);
    for c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(0.0) + t * b1 - b2
}

/// Complex Fourier series with `e^{-|k|/2}`-decaying normal coefficients.
pub fn random_theta_series(rng: &mut ChaCha8Rng, k_max: usize) -> ThetaSeries {
    let mut s = ThetaSeries::zeros(k_max);
    for k in -(k_max as i64)..=k_max as i64 {
        s.set(k, complex_normal(rng) * libm::exp(-0.5 * libm::fabs(k as f64)));
    }
    s
}

/// Interior data of order 1/2 for the linear problem: per mode `k` a
/// polynomial in `s` with `e^{-(|k|+n)/2}`-decaying normal coefficients.
///
/// The power `s^{|k|-2}` is skipped for `|k| ≥ 3`: it resonates with the
/// homogeneous solution and would produce `log s` terms that a polynomial
/// grid cannot represent. Leading modes `k = ±2` are left zero.
pub fn random_interior_data(rng: &mut ChaCha8Rng, grid: &Arc<SGrid>, k_max: usize, degree: usize) -> BracketField {
    let coeffs: Vec<Vec<Complex64>> = (-(k_max as i64)..=k_max as i64)
        .map(|k| {
            (0..=degree)
                .map(|n| {
                    let c = complex_normal(rng) * libm::exp(-0.5 * (libm::fabs(k as f64) + n as f64));
                    let resonant = k.abs() >= 3 && n as i64 == k.abs() - 2;
                    let cokernel = n == 0 && k.abs() == 2;
                    if resonant || cokernel {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    BracketField::from_mode_fn(Order::HALF, grid, k_max, |k, s| {
        let cs = &coeffs[(k + k_max as i64) as usize];
        cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * s + c)
    })
}
