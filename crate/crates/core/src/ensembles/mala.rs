//! Metropolis-adjusted Langevin sampling of `exp(−N² U(x)) dx`.
//!
//! In normalized units the proposal is `x' = x − (h/2) DU(x) + ξ` with `ξ ~ σ_{h,N}`, whose
//! log density is `−(N²/2h)‖x' − x + (h/2)DU(x)‖₂²` up to a constant.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::HermTuple;
use crate::rng::{stream_rng, StreamRng};

use super::{gue_draw, BatchSource, SampleBatch};

pub const TARGET_ACCEPTANCE: f64 = 0.57;

/// A normalized potential `U` on `m`-tuples: the target density is `exp(−N² U)`.
pub trait GibbsTarget: Sync {
    fn m(&self) -> usize;
    fn value(&self, x: &HermTuple) -> Result<f64>;
    fn grad(&self, x: &HermTuple) -> Result<HermTuple>;
}

#[derive(Clone, Debug)]
pub struct MalaConfig {
    pub count: usize,
    pub step: f64,
    pub burnin: usize,
    pub thinning: usize,
    pub chains: usize,
    pub seed: u64,
}

impl MalaConfig {
    pub fn new(count: usize, seed: u64) -> Self {
        MalaConfig { count, step: 0.1, burnin: 2000, thinning: 10, chains: 8, seed }
    }
}

/// A single chain: state, cached potential and gradient, step and acceptance counters.
pub struct MalaChain {
    x: HermTuple,
    u: f64,
    du: HermTuple,
    step: f64,
    n2: f64,
    rng: StreamRng,
    accepted: u64,
    proposed: u64,
}

fn check(v: f64, x: &HermTuple) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!(
            "potential is {v} at a state with ‖x‖₂ = {:.3e}, ‖x‖∞ = {:.3e}; reduce the step",
            x.norm2(),
            x.opnorm()
        )))
    }
}

impl MalaChain {
    pub fn new(target: &impl GibbsTarget, x0: HermTuple, step: f64, rng: StreamRng) -> Result<Self> {
        let u = check(target.value(&x0)?, &x0)?;
        let du = target.grad(&x0)?;
        let n = x0.n() as f64;
        Ok(MalaChain { x: x0, u, du, step, n2: n * n, rng, accepted: 0, proposed: 0 })
    }

    pub fn state(&self) -> &HermTuple {
        &self.x
    }

    pub fn grad(&self) -> &HermTuple {
        &self.du
    }

    pub fn step_size(&self) -> f64 {
        self.step
    }

    pub fn set_step_size(&mut self, h: f64) {
        self.step = h;
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn reset_counters(&mut self) {
        self.accepted = 0;
        self.proposed = 0;
    }

    /// One Metropolis–Hastings transition; returns whether the proposal was accepted.
    pub fn advance(&mut self, target: &impl GibbsTarget) -> Result<bool> {
        let h = self.step;
        let noise = gue_draw(self.x.n(), self.x.m(), h, &mut self.rng);
        let y = self.x.axpy(-0.5 * h, &self.du).add(&noise);
        let uy = check(target.value(&y)?, &y)?;
        let duy = target.grad(&y)?;
        // forward residual is the noise itself
        let fwd = noise.inner(&noise);
        let back = self.x.sub(&y).axpy(0.5 * h, &duy);
        let bwd = back.inner(&back);
        let log_alpha = -self.n2 * (uy - self.u) - self.n2 / (2.0 * h) * (bwd - fwd);
        self.proposed += 1;
        let accept = log_alpha >= 0.0 || self.rng.random::<f64>().ln() < log_alpha;
        if accept {
            self.x = y;
            self.u = uy;
            self.du = duy;
            self.accepted += 1;
        }
        Ok(accept)
    }

    /// Burn-in with step adaptation: after each window the step is multiplied by
    /// `2^((rate − 0.57)/0.25)`, clamped to a doubling or halving.
    pub fn tune(&mut self, target: &impl GibbsTarget, steps: usize) -> Result<()> {
        const WINDOW: usize = 50;
        let mut done = 0;
        while done < steps {
            let w = WINDOW.min(steps - done);
            let mut acc = 0;
            for _ in 0..w {
                acc += self.advance(target)? as usize;
            }
            done += w;
            let rate = acc as f64 / w as f64;
            let factor = 2f64.powf(((rate - TARGET_ACCEPTANCE) / 0.25).clamp(-1.0, 1.0));
            self.step *= factor;
        }
        self.reset_counters();
        Ok(())
    }
}

/// Runs `cfg.chains` independent chains from the origin, each tuned during its burn-in, and
/// collects `cfg.count` thinned states in chain order.
pub fn sample_gibbs_mala(target: &impl GibbsTarget, n: usize, cfg: &MalaConfig) -> Result<SampleBatch> {
    if cfg.count == 0 || cfg.chains == 0 || cfg.thinning == 0 || !(cfg.step > 0.0) {
        return Err(Error::InvalidParameter(
            "count, chains, thinning and step must be positive".into(),
        ));
    }
    let m = target.m();
    let chains = cfg.chains.min(cfg.count);
    let per_chain = cfg.count.div_ceil(chains);
    let results: Vec<Result<(Vec<HermTuple>, f64, f64)>> = (0..chains)
        .into_par_iter()
        .map(|c| {
            let rng = stream_rng(cfg.seed, (1u64 << 40) + c as u64);
            let mut chain = MalaChain::new(target, HermTuple::zeros(m, n), cfg.step, rng)?;
            chain.tune(target, cfg.burnin)?;
            let mut out = Vec::with_capacity(per_chain);
            for _ in 0..per_chain {
                for _ in 0..cfg.thinning {
                    chain.advance(target)?;
                }
                out.push(chain.state().clone());
            }
            Ok((out, chain.acceptance_rate(), chain.step_size()))
        })
        .collect();
    let mut samples = Vec::with_capacity(chains * per_chain);
    let (mut rate, mut step) = (0.0, 0.0);
    for r in results {
        let (s, a, h) = r?;
        samples.extend(s);
        rate += a / chains as f64;
        step += h / chains as f64;
    }
    samples.truncate(cfg.count);
    Ok(SampleBatch {
        n,
        m,
        seed: cfg.seed,
        source: BatchSource::Mala {
            step,
            acceptance_rate: rate,
            chains,
            burnin: cfg.burnin,
            thinning: cfg.thinning,
        },
        samples,
    })
}
