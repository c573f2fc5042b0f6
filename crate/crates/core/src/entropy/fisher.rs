//! Normalized Fisher information `(1/N³)𝓘(μ_N * σ_{t,N}) = E‖Ξ_t(Z)‖₂²`.
//!
//! For `t > 0` the score `Ξ_t(z) = E[DV(X) | Z = z]` is estimated by a MALA chain on the
//! posterior `exp(−N²(V(x) + ‖x − z‖₂²/2t))`, started at the latent `X` that produced `z`
//! (an exact posterior draw, so no burn-in is needed). Two disjoint stretches of the chain
//! give two estimates of `Ξ_t(z)`, and their inner product estimates `‖Ξ_t(z)‖₂²` without the
//! squared-noise bias.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{gue_draw, sample_gibbs_mala, GibbsTarget, MalaChain, MalaConfig, MomentEstimate, SampleBatch};
use crate::error::{Error, Result};
use crate::matrix::HermTuple;
use crate::rng::{derive_seed, stream_rng};
use crate::semigroups::PotentialSpec;

#[derive(Clone, Debug)]
pub struct FisherConfig {
    /// Sampler for the outer `X ~ μ_N` batch.
    pub outer: MalaConfig,
    /// Posterior steps averaged per score estimate (two such stretches per outer sample).
    pub inner_steps: usize,
    /// Steps discarded between the two stretches; `None` uses `⌈12/(hκα)⌉` for the tuned step
    /// `h`, its acceptance rate `α` and the posterior's lower curvature `κ = c + 1/t`.
    pub gap: Option<usize>,
    /// Pilot steps used to tune the posterior step size at each `t`.
    pub tune_steps: usize,
    /// Use `E⟨Ξ_t(Z), Z⟩₂ = m` as a control variate.
    pub control_variate: bool,
}

impl FisherConfig {
    pub fn new(count: usize, seed: u64) -> Self {
        FisherConfig { outer: MalaConfig::new(count, seed), inner_steps: 40, gap: None, tune_steps: 400, control_variate: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FisherPoint {
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FisherCurve {
    pub n: usize,
    pub m: usize,
    pub points: Vec<FisherPoint>,
    /// `a = (1/m) E‖X‖₂²` from the outer batch, with its standard error.
    pub a: f64,
    pub a_stderr: f64,
}

impl FisherCurve {
    /// Lower sandwich bound `m/(a + t)`.
    pub fn lower_bound(&self, t: f64) -> f64 {
        self.m as f64 / (self.a + t)
    }

    /// Upper sandwich bound `min(m/t, F(0))`, using the `t = 0` point when present.
    pub fn upper_bound(&self, t: f64) -> f64 {
        let at_zero = self.points.iter().find(|p| p.t == 0.0).map_or(f64::INFINITY, |p| p.value);
        let cap = if t > 0.0 { self.m as f64 / t } else { f64::INFINITY };
        cap.min(at_zero)
    }

    /// Largest violation of the sandwich in units of the combined standard error
    /// (nonpositive when every point is inside).
    pub fn sandwich_violation(&self) -> f64 {
        let m = self.m as f64;
        let zero = self.points.iter().find(|p| p.t == 0.0);
        let mut worst = f64::NEG_INFINITY;
        for p in &self.points {
            let lo = self.lower_bound(p.t);
            let lo_se = m / (self.a + p.t).powi(2) * self.a_stderr;
            let se = (p.stderr.powi(2) + lo_se.powi(2)).sqrt().max(1e-300);
            worst = worst.max((lo - p.value) / se);
            if p.t > 0.0 {
                worst = worst.max((p.value - m / p.t) / p.stderr.max(1e-300));
                if let Some(z) = zero {
                    let se = (p.stderr.powi(2) + z.stderr.powi(2)).sqrt().max(1e-300);
                    worst = worst.max((p.value - z.value) / se);
                }
            }
        }
        worst
    }
}

struct Posterior<'a> {
    v: &'a PotentialSpec,
    z: &'a HermTuple,
    t: f64,
}

impl GibbsTarget for Posterior<'_> {
    fn m(&self) -> usize {
        self.v.m()
    }

    fn value(&self, x: &HermTuple) -> Result<f64> {
        let d = x.sub(self.z);
        Ok(self.v.value(x)? + d.inner(&d) / (2.0 * self.t))
    }

    fn grad(&self, x: &HermTuple) -> Result<HermTuple> {
        Ok(self.v.grad(x)?.axpy(1.0 / self.t, &x.sub(self.z)))
    }
}

/// Mean with optional control variate `g` (known mean zero), jackknife standard error.
pub(crate) fn control_variate_mean(f: &[f64], g: &[f64], use_cv: bool) -> (f64, f64) {
    let n = f.len();
    if n < 2 {
        return (f.first().copied().unwrap_or(f64::NAN), f64::INFINITY);
    }
    let nf = n as f64;
    if !use_cv {
        let mean = f.iter().sum::<f64>() / nf;
        let var = f.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        return (mean, (var / nf).sqrt());
    }
    let sf: f64 = f.iter().sum();
    let sg: f64 = g.iter().sum();
    let sfg: f64 = f.iter().zip(g).map(|(a, b)| a * b).sum();
    let sgg: f64 = g.iter().map(|b| b * b).sum();
    let est = |k: f64, sf: f64, sg: f64, sfg: f64, sgg: f64| {
        let (mf, mg) = (sf / k, sg / k);
        let var = sgg / k - mg * mg;
        let beta = if var > 1e-300 { (sfg / k - mf * mg) / var } else { 0.0 };
        mf - beta * mg
    };
    let full = est(nf, sf, sg, sfg, sgg);
    let loo: Vec<f64> = (0..n)
        .map(|i| est(nf - 1.0, sf - f[i], sg - g[i], sfg - f[i] * g[i], sgg - g[i] * g[i]))
        .collect();
    let mean_loo = loo.iter().sum::<f64>() / nf;
    let var = (nf - 1.0) / nf * loo.iter().map(|x| (x - mean_loo).powi(2)).sum::<f64>();
    (full, var.sqrt())
}

/// Fisher information of `μ_N * σ_{t,N}` from an outer batch of `X ~ μ_N`. The tag selects
/// the random streams for the Gaussian increments and posterior chains.
pub fn fisher_from_batch(
    v: &PotentialSpec,
    batch: &SampleBatch,
    t: f64,
    cfg: &FisherConfig,
    tag: u64,
) -> Result<MomentEstimate> {
    if batch.is_empty() {
        return Err(Error::InvalidParameter("empty batch".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let m = v.m() as f64;
    let pairs: Vec<(f64, f64)> = if t == 0.0 {
        batch
            .samples
            .par_iter()
            .map(|x| {
                let d = v.grad(x)?;
                Ok((d.inner(&d), d.inner(x) - m))
            })
            .collect::<Result<_>>()?
    } else {
        if cfg.inner_steps == 0 {
            return Err(Error::InvalidParameter("inner_steps must be positive".into()));
        }
        let seed = derive_seed(batch.seed ^ cfg.outer.seed, tag);
        let (n, mm) = (batch.n, batch.m);
        let latent = |i: usize| -> HermTuple {
            let y = gue_draw(n, mm, t, &mut stream_rng(seed, 2 * i as u64));
            batch.samples[i].add(&y)
        };
        // pilot tuning on the first outer sample
        let z0 = latent(0);
        let target0 = Posterior { v, z: &z0, t };
        let h0 = 0.5 / (v.upper_convexity().unwrap_or(1.0) + 1.0 / t);
        let mut pilot = MalaChain::new(&target0, batch.samples[0].clone(), h0, stream_rng(seed, u64::MAX))?;
        pilot.tune(&target0, cfg.tune_steps)?;
        let h = pilot.step_size();
        for _ in 0..200 {
            pilot.advance(&target0)?;
        }
        let rate = pilot.acceptance_rate().max(0.05);
        let kappa = v.lower_convexity().unwrap_or(0.0) + 1.0 / t;
        let gap = cfg.gap.unwrap_or_else(|| (12.0 / (h * kappa * rate)).ceil() as usize);
        batch
            .samples
            .par_iter()
            .enumerate()
            .map(|(i, x)| {
                let z = latent(i);
                let target = Posterior { v, z: &z, t };
                let mut chain = MalaChain::new(&target, x.clone(), h, stream_rng(seed, 2 * i as u64 + 1))?;
                let stretch = |chain: &mut MalaChain| -> Result<HermTuple> {
                    let mut acc = HermTuple::zeros(mm, n);
                    for _ in 0..cfg.inner_steps {
                        chain.advance(&target)?;
                        acc = acc.add(&v.grad(chain.state())?);
                    }
                    Ok(acc.scale(1.0 / cfg.inner_steps as f64))
                };
                let a = stretch(&mut chain)?;
                for _ in 0..gap {
                    chain.advance(&target)?;
                }
                let b = stretch(&mut chain)?;
                Ok((a.inner(&b), 0.5 * (a.inner(&z) + b.inner(&z)) - m))
            })
            .collect::<Result<_>>()?
    };
    let (f, g): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let (value, stderr) = control_variate_mean(&f, &g, cfg.control_variate);
    Ok(MomentEstimate { value: value.into(), stderr, n_samples: f.len() })
}

/// `(1/N³)𝓘(μ_N * σ_{t,N})` with a fresh outer batch.
pub fn fisher_info(v: &PotentialSpec, n: usize, t: f64, cfg: &FisherConfig) -> Result<MomentEstimate> {
    let batch = sample_gibbs_mala(v, n, &cfg.outer)?;
    fisher_from_batch(v, &batch, t, cfg, 0)
}

/// The Fisher curve over `grid` from one outer batch.
pub fn fisher_curve(v: &PotentialSpec, n: usize, grid: &[f64], cfg: &FisherConfig) -> Result<FisherCurve> {
    let batch = sample_gibbs_mala(v, n, &cfg.outer)?;
    fisher_curve_from_batch(v, &batch, grid, cfg)
}

pub fn fisher_curve_from_batch(
    v: &PotentialSpec,
    batch: &SampleBatch,
    grid: &[f64],
    cfg: &FisherConfig,
) -> Result<FisherCurve> {
    let m = v.m();
    let sq: Vec<f64> = batch.samples.iter().map(|x| x.inner(x) / m as f64).collect();
    let (a, a_stderr) = control_variate_mean(&sq, &sq, false);
    let points = grid
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let e = fisher_from_batch(v, batch, t, cfg, k as u64 + 1)?;
            Ok(FisherPoint { t, value: e.re(), stderr: e.stderr })
        })
        .collect::<Result<_>>()?;
    Ok(FisherCurve { n: batch.n, m, points, a, a_stderr })
}
