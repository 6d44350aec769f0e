//! Gauss rules built with the Golub–Welsch eigenvalue method.

use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of the `n`-point Gauss–Jacobi rule for the weight
/// `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`, nodes ascending.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && alpha > -1.0 && beta > -1.0);
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            let t = 2.0 * kf + ab;
            (beta * beta - alpha * alpha) / (t * (t + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let t = 2.0 * j + ab;
            let num = 4.0 * j * (j + alpha) * (j + beta) * (j + ab);
            let den = t * t * (t + 1.0) * (t - 1.0);
            let off = libm::sqrt(num / den);
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mu0 = libm::exp2(ab + 1.0) * libm::tgamma(alpha + 1.0) * libm::tgamma(beta + 1.0)
        / libm::tgamma(ab + 2.0);
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Gauss–Legendre rule on `[lo, hi]`.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = legendre_unit(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|t| half * t).collect(),
    )
}

fn legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, mut w) = gauss_jacobi(n, 0.0, 0.0);
    // symmetrize to remove eigen-solver noise
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let avg = 0.5 * (w[i] + w[j]);
        w[i] = avg;
        w[j] = avg;
    }
    let mut xs = x;
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let avg = 0.5 * (xs[j] - xs[i]);
        xs[i] = -avg;
        xs[j] = avg;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, w)
}

/// Rule on `[0, 1]` for integrals `∫ s^e g(s) ds` with `e > -1`.
pub fn power_weight_rule(n: usize, e: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi(n, 0.0, e);
    let scale = libm::exp2(-e - 1.0);
    (
        x.iter().map(|t| 0.5 * (1.0 + t)).collect(),
        w.iter().map(|t| t * scale).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10, 0.0, 1.0);
        for p in 0..20 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * libm::pow(*x, p as f64)).sum();
            assert!((q - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "degree {p}");
        }
    }

    #[test]
    fn power_weight_rule_matches_beta_integrals() {
        for &e in &[-0.5, 0.0, 0.6, 2.0, 3.5] {
            let (x, w) = power_weight_rule(12, e);
            for p in 0..16 {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * libm::pow(*x, p as f64)).sum();
                let exact = 1.0 / (p as f64 + e + 1.0);
                assert!((q - exact).abs() < 1e-13 * exact.max(1.0), "e={e} p={p}");
            }
        }
    }
}
