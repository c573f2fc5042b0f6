use num_complex::Complex64;
use rayon::prelude::*;

use crate::matrix::Evaluator;
use crate::tracepoly::{LawTable, MomentEntry, Necklace};

use super::{complex_mean_and_stderr, SampleBatch};

/// A sample mean with `stderr = sd/√n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentEstimate {
    pub value: Complex64,
    pub stderr: f64,
    pub n_samples: usize,
}

impl MomentEstimate {
    pub fn from_samples(values: &[Complex64]) -> Self {
        let (value, stderr) = complex_mean_and_stderr(values);
        MomentEstimate { value, stderr, n_samples: values.len() }
    }

    pub fn from_real_samples(values: &[f64]) -> Self {
        let (value, stderr) = super::mean_and_stderr(values);
        MomentEstimate { value: Complex64::from(value), stderr, n_samples: values.len() }
    }

    pub fn exact(value: f64) -> Self {
        MomentEstimate { value: Complex64::from(value), stderr: 0.0, n_samples: 0 }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// Per-necklace sample means of `τ_N(w(x))`. The empty necklace is exactly 1.
pub fn estimate_moments(batch: &SampleBatch, words: &[Necklace]) -> LawTable {
    let per_sample: Vec<Vec<Complex64>> = batch
        .samples
        .par_iter()
        .map(|x| {
            let mut ev = Evaluator::new(x);
            words.iter().map(|n| ev.trace(n)).collect()
        })
        .collect();
    let mut table = LawTable::new(batch.m);
    for (k, n) in words.iter().enumerate() {
        if n.is_empty() {
            continue;
        }
        let vals: Vec<Complex64> = per_sample.iter().map(|v| v[k]).collect();
        let est = MomentEstimate::from_samples(&vals);
        table.insert_entry(
            n.clone(),
            MomentEntry { value: est.value, stderr: Some(est.stderr), n_samples: Some(vals.len()) },
        );
    }
    table
}
