//! Trotter compositions `T_{t,ℓ}u = (P_δ S_δ)^{t/δ} u` with `δ = 2^{−ℓ}` and `S_δ u = u ∘ W(·, δ)`.

use rayon::prelude::*;

use crate::ensembles::{gue_draw, MomentEstimate};
use crate::error::{Error, Result};
use crate::matrix::HermTuple;
use crate::rng::stream_rng;

use super::{ode_flow, FnHandle, PotentialSpec};

/// `t = nδ + r` with `δ = 2^{−ℓ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub t: f64,
    pub level: u32,
    pub steps: usize,
    pub remainder: f64,
}

impl Schedule {
    /// Requires `t·2^ℓ` to be an integer.
    pub fn new(t: f64, level: u32) -> Result<Self> {
        let s = Schedule::with_remainder(t, level)?;
        let delta = s.delta();
        if s.remainder > 1e-9 * delta {
            return Err(Error::Schedule { t, level });
        }
        Ok(Schedule { remainder: 0.0, ..s })
    }

    /// Allows a final partial step of length `r < δ`.
    pub fn with_remainder(t: f64, level: u32) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
        }
        let delta = (-(level as f64)).exp2();
        let scaled = t / delta;
        let mut steps = scaled.floor() as usize;
        if scaled - steps as f64 > 1.0 - 1e-9 {
            steps += 1;
        }
        let remainder = (t - steps as f64 * delta).max(0.0);
        Ok(Schedule { t, level, steps, remainder: if remainder < 1e-12 { 0.0 } else { remainder } })
    }

    pub fn delta(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrotterConfig {
    pub paths: usize,
    pub seed: u64,
    /// RK4 steps per flow segment; `None` uses `max(1, ⌈16Cδ⌉)`.
    pub flow_steps: Option<usize>,
}

impl TrotterConfig {
    pub fn new(paths: usize, seed: u64) -> Self {
        TrotterConfig { paths, seed, flow_steps: None }
    }
}

fn segment_steps(v: &PotentialSpec, delta: f64, cfg: &TrotterConfig) -> usize {
    cfg.flow_steps.unwrap_or_else(|| {
        let c = v.convexity().map_or(1.0, |cv| cv.big_c);
        ((16.0 * c * delta).ceil() as usize).max(1)
    })
}

/// One path of `(P_δ S_δ)^n`: `z ← W(z + Y, δ)` repeated, returning the end point.
fn trotter_path(
    v: &PotentialSpec,
    x: &HermTuple,
    sched: &Schedule,
    steps: usize,
    seed: u64,
    path: u64,
) -> Result<HermTuple> {
    let delta = sched.delta();
    let mut rng = stream_rng(seed, path);
    let mut z = x.clone();
    for _ in 0..sched.steps {
        let y = gue_draw(x.n(), x.m(), delta, &mut rng);
        z = ode_flow(v, &z.add(&y), delta, Some(steps))?;
    }
    Ok(z)
}

/// `T_{t,ℓ}u(x)` by Monte Carlo over independent paths; identical seeds give common random
/// numbers across evaluation points.
pub fn trotter_t(
    v: &PotentialSpec,
    u: &FnHandle,
    x: &HermTuple,
    t: f64,
    level: u32,
    cfg: &TrotterConfig,
) -> Result<MomentEstimate> {
    let sched = Schedule::new(t, level)?;
    if sched.steps == 0 {
        return Ok(MomentEstimate::exact(u.value(x)?));
    }
    if cfg.paths == 0 {
        return Err(Error::InvalidParameter("path count must be positive".into()));
    }
    let steps = segment_steps(v, sched.delta(), cfg);
    let vals: Vec<f64> = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|i| u.value(&trotter_path(v, x, &sched, steps, cfg.seed, i)?))
        .collect::<Result<_>>()?;
    Ok(MomentEstimate::from_real_samples(&vals))
}

#[derive(Clone, Debug)]
pub struct ExpectationReport {
    pub estimate: MomentEstimate,
    /// Distance-to-equilibrium envelope at `t_max`; needs `‖u‖_Lip`.
    pub envelope: Option<f64>,
    /// Splitting error bound `Cm^{1/2}/(c(2 − √2))·2^{−ℓ/2}‖u‖_Lip`.
    pub trotter_bound: Option<f64>,
}

/// `T_{t,ℓ}u(x₀) ≈ ∫u dμ` for large `t`, with the equilibrium and splitting envelopes.
pub fn expectation_via_t(
    v: &PotentialSpec,
    u: &FnHandle,
    x0: &HermTuple,
    t_max: f64,
    level: u32,
    cfg: &TrotterConfig,
) -> Result<ExpectationReport> {
    let c = v.lower_convexity()?;
    let big_c = v.upper_convexity()?;
    if !(c > 0.0) {
        return Err(Error::InvalidParameter("expectation via T needs c > 0".into()));
    }
    let estimate = trotter_t(v, u, x0, t_max, level, cfg)?;
    let m = x0.m() as f64;
    let dv = v.grad(x0)?.norm2();
    let (envelope, trotter_bound) = match u.lipschitz {
        Some(lip) => {
            let env = if t_max > 0.0 {
                (-c * t_max / 4.0).exp()
                    * ((4.0 * big_c * m.sqrt() / (c * c))
                        * (6.0 + 5.0 * std::f64::consts::SQRT_2)
                        * t_max.powf(-0.5)
                        + (2.0 / c) * dv)
                    * lip
            } else {
                f64::INFINITY
            };
            (Some(env), Some(lipschitz_trotter_bound(c, big_c, m, level) * lip))
        }
        None => (None, None),
    };
    Ok(ExpectationReport { estimate, envelope, trotter_bound })
}

/// `Cm^{1/2}/(c(2 − √2))·2^{−ℓ/2}`.
pub fn lipschitz_trotter_bound(c: f64, big_c: f64, m: f64, level: u32) -> f64 {
    big_c * m.sqrt() / (c * (2.0 - std::f64::consts::SQRT_2)) * (-(level as f64) / 2.0).exp2()
}
