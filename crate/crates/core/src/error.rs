use alloc::string::String;
use thiserror::Error;

/// Everything that can go wrong inside the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("too few significant Fourier coefficients ({found}) to estimate a decay rate")]
    UndefinedWidth { found: usize },
    #[error("bracket degeneracy: |{bracket}| = {value:e} below tolerance {tol:e}")]
    Degenerate {
        bracket: &'static str,
        value: f64,
        tol: f64,
    },
    #[error("mapped boundary winds {winding} times around the origin")]
    Winding { winding: i64 },
    #[error("leading term carries cokernel modes of size {magnitude:e}")]
    Cokernel { magnitude: f64 },
    #[error("radial profile is not strictly increasing near s = {s}")]
    NotMonotone { s: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("continuation failed after t = {last_t}: {source}")]
    Continuation {
        last_t: f64,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
    #[error("compatibility scale left the search interval [0.5, 2] (c = {scale})")]
    Incompatible { scale: f64 },
    #[error("grids differ: {0} vs {1} nodes")]
    GridMismatch(usize, usize),
}

pub type Result<T> = core::result::Result<T, Error>;
