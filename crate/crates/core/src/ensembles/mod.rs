//! Samplers for the GUE and for Gibbs measures `exp(−N² V)`, with moment estimators.

mod export;
mod gas;
mod mala;
mod moments;
mod tails;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{random_hermitian, HermTuple};
use crate::rng::stream_rng;

pub use export::{read_batch_jsonl, write_batch_jsonl, BatchHeader};
pub use gas::{gas_moments, GasConfig, GasReport};
pub use mala::{sample_gibbs_mala, GibbsTarget, MalaChain, MalaConfig, TARGET_ACCEPTANCE};
pub use moments::{estimate_moments, MomentEstimate};
pub use tails::{tail_statistics, TailStats};

/// How a batch was produced.
#[derive(Clone, Debug, PartialEq)]
pub enum BatchSource {
    Gue { t: f64 },
    Mala { step: f64, acceptance_rate: f64, chains: usize, burnin: usize, thinning: usize },
    Imported,
}

#[derive(Clone, Debug)]
pub struct SampleBatch {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub source: BatchSource,
    pub samples: Vec<HermTuple>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn acceptance_rate(&self) -> Option<f64> {
        match self.source {
            BatchSource::Mala { acceptance_rate, .. } => Some(acceptance_rate),
            _ => None,
        }
    }
}

/// One draw from `σ_{t,N}`: diagonal entries `N(0, t/N)`, off-diagonal real and imaginary
/// parts `N(0, t/2N)`.
pub fn gue_draw<R: Rng + ?Sized>(n: usize, m: usize, t: f64, rng: &mut R) -> HermTuple {
    let s = (t / n as f64).sqrt();
    HermTuple::from_hermitized((0..m).map(|_| random_hermitian(n, s, rng)).collect())
}

/// `count` independent draws; draw `i` uses stream `i` of `seed`.
pub fn sample_gue(n: usize, m: usize, t: f64, count: usize, seed: u64) -> Result<SampleBatch> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("GUE variance must be positive, got {t}")));
    }
    if count == 0 || n == 0 || m == 0 {
        return Err(Error::InvalidParameter("N, m and count must be positive".into()));
    }
    let samples = (0..count)
        .into_par_iter()
        .map(|i| gue_draw(n, m, t, &mut stream_rng(seed, i as u64)))
        .collect();
    Ok(SampleBatch { n, m, seed, source: BatchSource::Gue { t }, samples })
}

pub(crate) fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub(crate) fn complex_mean_and_stderr(values: &[Complex64]) -> (Complex64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<Complex64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
