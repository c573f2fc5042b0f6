//! The inf-convolution `Q_t u(x) = inf_y [u(x + y) + ‖y‖₂²/2t]`.
//!
//! For `u ∈ 𝓔(0, C)` the minimizer is `x − tp` where `p = Du(x − tp)`, and then
//! `D Q_t u(x) = p`, `Q_t u(x) = u(x − tp) + (t/2)‖p‖₂²`.

use crate::error::{Error, Result};
use crate::matrix::HermTuple;

use super::FnHandle;

pub const Q_TOL: f64 = 1e-10;
pub const Q_MAX_ITER: usize = 1000;

#[derive(Clone, Debug)]
pub struct QResult {
    pub value: f64,
    pub gradient: HermTuple,
    /// Total fixed-point iterations over all substeps.
    pub iterations: usize,
}

/// Solves the fixed point by continuation in time: `n = ⌈2Ct⌉ + 1` substeps
/// `t_k = kt/n`, each warm-started from the previous solution and iterated as
/// `p ← (1 − θ)p + θ Du(x − t_k p)` with `θ = 1/(1 + C t_k)`, which contracts with factor at
/// most `C t_k / (1 + C t_k)`.
pub fn apply_q(u: &FnHandle, x: &HermTuple, t: f64) -> Result<QResult> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let mut p = u.grad(x)?;
    if t == 0.0 {
        return Ok(QResult { value: u.value(x)?, gradient: p, iterations: 0 });
    }
    let c = u.semiconcavity.ok_or_else(|| {
        Error::InvalidParameter("inf-convolution needs a semiconcavity bound C".into())
    })?;
    let n = (2.0 * c * t).ceil() as usize + 1;
    let mut iterations = 0;
    for k in 1..=n {
        let tk = t * k as f64 / n as f64;
        let theta = 1.0 / (1.0 + c * tk);
        let mut converged = false;
        let mut residual = f64::INFINITY;
        for _ in 0..Q_MAX_ITER {
            iterations += 1;
            let target = u.grad(&x.axpy(-tk, &p))?;
            let next = p.scale(1.0 - theta).axpy(theta, &target);
            residual = next.sub(&p).norm2();
            p = next;
            // the contraction factor ρ = Ct/(1+Ct) bounds the remaining error by residual·ρ/(1−ρ)
            if residual * (c * tk).max(1.0) <= Q_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { iterations: Q_MAX_ITER, residual });
        }
    }
    let value = u.value(&x.axpy(-t, &p))? + 0.5 * t * p.inner(&p);
    Ok(QResult { value, gradient: p, iterations })
}

/// `Q_t u` as a new function handle (gradient included), semiconcave with `C/(1 + Ct)`.
pub fn q_handle(u: &FnHandle, t: f64) -> FnHandle {
    let (a, b) = (u.clone(), u.clone());
    let c = u.semiconcavity;
    let mut h = FnHandle::new(
        move |x: &HermTuple| Ok(apply_q(&a, x, t)?.value),
        Some(move |x: &HermTuple| Ok(apply_q(&b, x, t)?.gradient)),
        super::Provenance::Composite(format!("Q_{t}")),
    );
    h.semiconcavity = c.map(|c| c / (1.0 + c * t));
    h.lipschitz = u.lipschitz;
    h
}
