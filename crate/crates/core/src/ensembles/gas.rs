//! Metropolis sampling of the one-matrix eigenvalue gas
//! `Π_{i<j} |λ_i − λ_j|² exp(−N Σ_i v(λ_i))`, the spectral law of `exp(−N² τ_N(v(x)))`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

use super::MomentEstimate;

#[derive(Clone, Debug)]
pub struct GasConfig {
    pub n: usize,
    pub sweeps: usize,
    pub burnin: usize,
    pub batches: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct GasReport {
    /// `moments[k-1]` estimates `E (1/N) Σ λ_i^k`.
    pub moments: Vec<MomentEstimate>,
    pub acceptance_rate: f64,
}

/// Sweep-averaged power moments with batch-means standard errors.
pub fn gas_moments(v: impl Fn(f64) -> f64, max_power: usize, cfg: &GasConfig) -> Result<GasReport> {
    let n = cfg.n;
    if n < 2 || cfg.sweeps < cfg.batches || cfg.batches < 2 {
        return Err(Error::InvalidParameter("gas needs N ≥ 2 and sweeps ≥ batches ≥ 2".into()));
    }
    let nf = n as f64;
    let mut rng = stream_rng(cfg.seed, 0);
    let mut lam: Vec<f64> = (0..n).map(|i| -2.0 + 4.0 * (i as f64 + 0.5) / nf).collect();
    let mut s = 1.0 / nf;

    let sweep = |lam: &mut Vec<f64>, s: f64, rng: &mut crate::rng::StreamRng| -> usize {
        let mut acc = 0;
        for i in 0..n {
            let old = lam[i];
            let new = old + s * rng.sample::<f64, _>(StandardNormal);
            let mut d = -nf * (v(new) - v(old));
            for (k, &l) in lam.iter().enumerate() {
                if k != i {
                    d += 2.0 * ((new - l).abs().ln() - (old - l).abs().ln());
                }
            }
            if d >= 0.0 || rng.random::<f64>().ln() < d {
                lam[i] = new;
                acc += 1;
            }
        }
        acc
    };

    for b in 0..cfg.burnin {
        let acc = sweep(&mut lam, s, &mut rng) as f64 / nf;
        if b % 10 == 9 || b < 50 {
            s *= 2f64.powf(((acc - 0.5) / 0.25).clamp(-1.0, 1.0) * 0.25);
        }
    }

    let per_batch = cfg.sweeps / cfg.batches;
    let mut batch_means = vec![vec![0.0; cfg.batches]; max_power];
    let mut accepted = 0usize;
    for b in 0..cfg.batches {
        for _ in 0..per_batch {
            accepted += sweep(&mut lam, s, &mut rng);
            for (k, bm) in batch_means.iter_mut().enumerate() {
                bm[b] += lam.iter().map(|l| l.powi(k as i32 + 1)).sum::<f64>() / nf;
            }
        }
        for bm in batch_means.iter_mut() {
            bm[b] /= per_batch as f64;
        }
    }
    let moments = batch_means
        .iter()
        .map(|bm| {
            let mut e = MomentEstimate::from_real_samples(bm);
            e.n_samples = per_batch * cfg.batches;
            e
        })
        .collect();
    Ok(GasReport {
        moments,
        acceptance_rate: accepted as f64 / (per_batch * cfg.batches * n) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_gas_is_semicircle() {
        let cfg = GasConfig { n: 64, sweeps: 2000, burnin: 500, batches: 20, seed: 1 };
        let r = gas_moments(|l| 0.5 * l * l, 4, &cfg).unwrap();
        let m2 = r.moments[1];
        let m4 = r.moments[3];
        assert!((m2.re() - 1.0).abs() < 4.0 * m2.stderr + 0.01, "{m2:?}");
        assert!((m4.re() - 2.0).abs() < 4.0 * m4.stderr + 0.03, "{m4:?}");
        assert!(r.moments[0].re().abs() < 4.0 * r.moments[0].stderr + 0.01);
    }
}
