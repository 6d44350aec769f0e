use crate::error::{Error, Result};
use crate::field_ops::{BoundaryCurve, EvalOptions};

/// How the Newton step is linearized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JacobianMode {
    /// Fixed-point iteration with the exact inverse of the linearization at
    /// the circular flow.
    FrozenReference,
    /// GMRES on the Jacobian left-preconditioned by the reference inverse,
    /// with finite-difference Jacobian-vector products.
    NewtonKrylov,
    /// Dense finite-difference Jacobian of the preconditioned residual,
    /// solved by LU. Costs one residual per unknown.
    FiniteDifferenceFull,
}

/// Numerical parameters of a solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveConfig {
    /// Angular mode cutoff `K`.
    pub k_modes: usize,
    /// Radial node count `N`.
    pub n_radial: usize,
    /// Kondratev weight exponent, `1/2 < γ < 1`; diagnostics only.
    pub gamma: f64,
    /// Strip half-width `σ` of the angular analyticity.
    pub sigma: f64,
    /// Sobolev order of the diagnostic norms, `m > 3`.
    pub m: u32,
    pub tol_residual: f64,
    pub max_iter: usize,
    /// Initial step factor in `(0, 1]`.
    pub damping: f64,
    pub continuation_steps: usize,
    pub jacobian_mode: JacobianMode,
    pub degeneracy_tol: f64,
    pub dealias: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            k_modes: 32,
            n_radial: 48,
            gamma: 0.75,
            sigma: 0.2,
            m: 4,
            tol_residual: 1e-8,
            max_iter: 40,
            damping: 1.0,
            continuation_steps: 1,
            jacobian_mode: JacobianMode::NewtonKrylov,
            degeneracy_tol: 1e-3,
            dealias: false,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidArgument(msg));
        if !(self.gamma > 0.5 && self.gamma < 1.0) {
            return bad(alloc::format!("gamma must lie in (1/2, 1), got {}", self.gamma));
        }
        if self.m <= 3 || self.m > 4 {
            return bad(alloc::format!("m must be 4 (m > 3, norms implemented up to 4), got {}", self.m));
        }
        if self.k_modes < 8 {
            return bad(alloc::format!("K must be at least 8, got {}", self.k_modes));
        }
        if self.n_radial < 16 {
            return bad(alloc::format!("N must be at least 16, got {}", self.n_radial));
        }
        if !(self.sigma > 0.0) {
            return bad(alloc::format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return bad(alloc::format!("damping must lie in (0, 1], got {}", self.damping));
        }
        if self.continuation_steps == 0 {
            return bad("continuation_steps must be at least 1".into());
        }
        if !(self.tol_residual > 0.0) {
            return bad(alloc::format!("tol_residual must be positive, got {}", self.tol_residual));
        }
        Ok(())
    }

    /// Also checks the strip condition `τ > σ` of the boundary.
    pub fn validate_for(&self, b: &BoundaryCurve) -> Result<()> {
        self.validate()?;
        if !(b.tau() > self.sigma) {
            return Err(Error::InvalidArgument(alloc::format!(
                "boundary tau {} must exceed sigma {}",
                b.tau(),
                self.sigma
            )));
        }
        Ok(())
    }

    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            degeneracy_tol: self.degeneracy_tol,
            dealias: self.dealias,
            sigma: self.sigma,
        }
    }
}
