use rayon::prelude::*;

use crate::matrix::HermTuple;

use super::SampleBatch;

#[derive(Clone, Debug, PartialEq)]
pub struct TailStats {
    pub mean: f64,
    /// Unbiased sample variance of `f`.
    pub variance: f64,
    /// `(r, fraction of samples with ‖x‖∞ ≥ r)`.
    pub tail_frequencies: Vec<(f64, f64)>,
    /// Mean of `‖x‖∞ = max_j ‖x_j‖`.
    pub mean_opnorm: f64,
}

pub fn tail_statistics(
    batch: &SampleBatch,
    f: impl Fn(&HermTuple) -> f64 + Sync,
    thresholds: &[f64],
) -> TailStats {
    let rows: Vec<(f64, f64)> = batch.samples.par_iter().map(|x| (f(x), x.opnorm())).collect();
    let n = rows.len() as f64;
    let mean = rows.iter().map(|r| r.0).sum::<f64>() / n;
    let variance = if rows.len() > 1 {
        rows.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let tail_frequencies = thresholds
        .iter()
        .map(|&r| (r, rows.iter().filter(|row| row.1 >= r).count() as f64 / n))
        .collect();
    let mean_opnorm = rows.iter().map(|r| r.1).sum::<f64>() / n;
    TailStats { mean, variance, tail_frequencies, mean_opnorm }
}
