//! Heat smoothing `P_t u(x) = E u(x + Y)`, `Y ~ σ_{t,N}`.

use rayon::prelude::*;

use crate::ensembles::gue_draw;
use crate::error::{Error, Result};
use crate::matrix::HermTuple;
use crate::rng::stream_rng;

use super::quadrature::gauss_hermite;
use super::FnHandle;

/// How to average over the Gaussian increment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PRule {
    MonteCarlo { count: usize, seed: u64 },
    /// Tensor Gauss–Hermite; only for `N = 1`, `m ≤ 3`.
    Quadrature { order: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0 }
    }
}

/// Increments and weights for one application of the rule at `(m, N)`.
pub(crate) fn increments(m: usize, n: usize, t: f64, rule: PRule) -> Result<Vec<(HermTuple, f64)>> {
    match rule {
        PRule::MonteCarlo { count, seed } => {
            if count == 0 {
                return Err(Error::InvalidParameter("Monte-Carlo count must be positive".into()));
            }
            let w = 1.0 / count as f64;
            Ok((0..count)
                .into_par_iter()
                .map(|i| (gue_draw(n, m, t, &mut stream_rng(seed, i as u64)), w))
                .collect())
        }
        PRule::Quadrature { order } => {
            if n != 1 || m > 3 {
                return Err(Error::InvalidParameter(
                    "quadrature smoothing needs N = 1 and m ≤ 3".into(),
                ));
            }
            let (z, w) = gauss_hermite(order);
            let s = t.sqrt();
            let mut out = Vec::with_capacity(order.pow(m as u32));
            let mut idx = vec![0usize; m];
            loop {
                let point: Vec<f64> = idx.iter().map(|&k| s * z[k]).collect();
                let weight: f64 = idx.iter().map(|&k| w[k]).product();
                out.push((HermTuple::from_reals(&point), weight));
                let mut d = 0;
                loop {
                    if d == m {
                        return Ok(out);
                    }
                    idx[d] += 1;
                    if idx[d] < order {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
            }
        }
    }
}

fn weighted_mean(vals: &[(f64, f64)], mc: bool) -> Estimate {
    let value: f64 = vals.iter().map(|(v, w)| v * w).sum();
    if !mc || vals.len() < 2 {
        return Estimate { value, stderr: 0.0 };
    }
    let n = vals.len() as f64;
    let var = vals.iter().map(|(v, _)| (v - value).powi(2)).sum::<f64>() / (n - 1.0);
    Estimate { value, stderr: (var / n).sqrt() }
}

pub fn apply_p(u: &FnHandle, x: &HermTuple, t: f64, rule: PRule) -> Result<Estimate> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(Estimate::exact(u.value(x)?));
    }
    let inc = increments(x.m(), x.n(), t, rule)?;
    let vals: Vec<(f64, f64)> = inc
        .par_iter()
        .map(|(y, w)| Ok((u.value(&x.add(y))?, *w)))
        .collect::<Result<_>>()?;
    Ok(weighted_mean(&vals, matches!(rule, PRule::MonteCarlo { .. })))
}

/// Value and gradient `D P_t u = P_t Du` from the same increments.
pub fn apply_p_with_grad(
    u: &FnHandle,
    x: &HermTuple,
    t: f64,
    rule: PRule,
) -> Result<(Estimate, HermTuple)> {
    if t == 0.0 {
        return Ok((Estimate::exact(u.value(x)?), u.grad(x)?));
    }
    let inc = increments(x.m(), x.n(), t, rule)?;
    let vals: Vec<(f64, HermTuple, f64)> = inc
        .par_iter()
        .map(|(y, w)| {
            let z = x.add(y);
            Ok((u.value(&z)?, u.grad(&z)?, *w))
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(f64, f64)> = vals.iter().map(|(v, _, w)| (*v, *w)).collect();
    let est = weighted_mean(&pairs, matches!(rule, PRule::MonteCarlo { .. }));
    let mut g = HermTuple::zeros(x.m(), x.n());
    for (_, d, w) in &vals {
        g = g.axpy(*w, d);
    }
    Ok((est, g))
}

/// `P_t u` as a function handle. Monte-Carlo rules reuse the same increments at every point,
/// so the result is a deterministic function of `x`.
pub fn p_handle(u: &FnHandle, t: f64, rule: PRule) -> FnHandle {
    let (a, b) = (u.clone(), u.clone());
    let mut h = FnHandle::new(
        move |x: &HermTuple| Ok(apply_p(&a, x, t, rule)?.value),
        Some(move |x: &HermTuple| Ok(apply_p_with_grad(&b, x, t, rule)?.1)),
        super::Provenance::Composite(format!("P_{t}")),
    );
    h.semiconcavity = u.semiconcavity;
    h.lipschitz = u.lipschitz;
    h
}
