//! Unrestarted GMRES with modified Gram–Schmidt and Givens rotations.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Solves `A x = b` from `x = 0`; returns `(x, iterations, relative residual)`.
pub(crate) fn gmres(
    mut apply: impl FnMut(&[f64]) -> Result<Vec<f64>>,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize, f64)> {
    let n = b.len();
    let beta = norm2(b);
    if beta == 0.0 {
        return Ok((vec![0.0; n], 0, 0.0));
    }
    let mut basis: Vec<Vec<f64>> = vec![b.iter().map(|v| v / beta).collect()];
    let mut hess: Vec<Vec<f64>> = Vec::new(); // column j has j + 2 entries
    let mut cs: Vec<f64> = Vec::new();
    let mut sn: Vec<f64> = Vec::new();
    let mut g = vec![beta];
    let mut iters = 0;
    let mut rel = 1.0;
    for j in 0..max_iter {
        let mut w = apply(&basis[j])?;
        let mut col = vec![0.0; j + 2];
        for (i, q) in basis.iter().enumerate() {
            let hij = dot(&w, q);
            col[i] = hij;
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= hij * y);
        }
        let hn = norm2(&w);
        col[j + 1] = hn;
        for i in 0..j {
            let t = cs[i] * col[i] + sn[i] * col[i + 1];
            col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
            col[i] = t;
        }
        let r = libm::hypot(col[j], col[j + 1]);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (col[j] / r, col[j + 1] / r) };
        col[j] = r;
        col[j + 1] = 0.0;
        cs.push(c);
        sn.push(s);
        let gj = g[j];
        g[j] = c * gj;
        g.push(-s * gj);
        hess.push(col);
        iters = j + 1;
        rel = libm::fabs(g[j + 1]) / beta;
        if rel <= rel_tol || hn == 0.0 {
            break;
        }
        basis.push(w.iter().map(|v| v / hn).collect());
    }
    // back substitution on the triangular factor
    let m = iters;
    let mut y = vec![0.0; m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for k in i + 1..m {
            acc -= hess[k][i] * y[k];
        }
        y[i] = acc / hess[i][i];
    }
    let mut x = vec![0.0; n];
    for (k, yk) in y.iter().enumerate() {
        x.iter_mut().zip(&basis[k]).for_each(|(a, q)| *a += yk * q);
    }
    Ok((x, iters, rel))
}
