//! The gradient flow `∂_t W = −½ DV(W)`, `W(x, 0) = x`.

use crate::error::{Error, Result};
use crate::matrix::HermTuple;

use super::PotentialSpec;

/// Default RK4 step count: `max(32, ⌈16Ct⌉)`.
pub fn default_flow_steps(v: &PotentialSpec, t: f64) -> usize {
    let c = v.convexity().map_or(1.0, |cv| cv.big_c);
    32usize.max((16.0 * c * t).ceil() as usize)
}

fn drift(v: &PotentialSpec, x: &HermTuple) -> Result<HermTuple> {
    Ok(v.grad(x)?.scale(-0.5))
}

/// Classical fourth-order Runge–Kutta with `steps` equal steps.
pub fn ode_flow(v: &PotentialSpec, x: &HermTuple, t: f64, steps: Option<usize>) -> Result<HermTuple> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("flow time must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(x.clone());
    }
    let steps = steps.unwrap_or_else(|| default_flow_steps(v, t)).max(1);
    let h = t / steps as f64;
    let mut w = x.clone();
    for _ in 0..steps {
        let k1 = drift(v, &w)?;
        let k2 = drift(v, &w.axpy(0.5 * h, &k1))?;
        let k3 = drift(v, &w.axpy(0.5 * h, &k2))?;
        let k4 = drift(v, &w.axpy(h, &k3))?;
        w = w
            .axpy(h / 6.0, &k1)
            .axpy(h / 3.0, &k2)
            .axpy(h / 3.0, &k3)
            .axpy(h / 6.0, &k4);
        if !w.is_finite() {
            return Err(Error::NonFinite("flow state diverged".into()));
        }
    }
    Ok(w)
}

/// Picard iteration `W_{k+1}(s) = x − ½∫₀^s DV(W_k(r)) dr` on a uniform grid with the
/// trapezoid rule; a slow cross-check for `ode_flow`.
pub fn ode_flow_picard(
    v: &PotentialSpec,
    x: &HermTuple,
    t: f64,
    grid: usize,
    iterations: usize,
) -> Result<HermTuple> {
    let h = t / grid as f64;
    let mut path = vec![x.clone(); grid + 1];
    for _ in 0..iterations {
        let d: Vec<HermTuple> = path.iter().map(|w| v.grad(w)).collect::<Result<_>>()?;
        let mut next = Vec::with_capacity(grid + 1);
        let mut acc = x.clone();
        next.push(acc.clone());
        for k in 1..=grid {
            acc = acc.axpy(-0.25 * h, &d[k - 1]).axpy(-0.25 * h, &d[k]);
            next.push(acc.clone());
        }
        path = next;
    }
    Ok(path.pop().expect("grid ≥ 0"))
}
