//! Spectral solver for stationary two-dimensional ideal flows with a single
//! elliptic stagnation point, written in flow-line coordinates `r = a(ψ, θ)`.
//!
//! The unknown is the triple `(R, p, a)`: a dilation factor, the stagnation
//! point and the polar radius of every flow line. Radial dependence is carried
//! in `s = √ψ` on a Chebyshev–Gauss–Lobatto grid, angular dependence as a
//! truncated Fourier series.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod error;
pub mod field_ops;
pub mod linear;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
