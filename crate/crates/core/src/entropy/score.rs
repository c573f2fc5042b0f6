use crate::ensembles::SampleBatch;
use crate::error::{Error, Result};
use crate::matrix::HermTuple;
use crate::semigroups::PotentialSpec;

pub const ESS_FLOOR: f64 = 30.0;

#[derive(Clone, Debug)]
pub struct ScoreEstimate {
    pub score: HermTuple,
    /// Kish effective sample size of the importance weights.
    pub ess: f64,
    pub low_ess: bool,
}

/// `Ξ_t(z) = E[DV(X) | X + Y = z]` by self-normalized importance sampling over a batch of
/// `X ~ μ_N`, with weights `exp(−N²‖z − x_i‖₂²/2t)`.
pub fn conjugate_score(batch: &SampleBatch, v: &PotentialSpec, z: &HermTuple, t: f64) -> Result<ScoreEstimate> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(ScoreEstimate { score: v.grad(z)?, ess: f64::INFINITY, low_ess: false });
    }
    if batch.is_empty() {
        return Err(Error::InvalidParameter("empty batch".into()));
    }
    let n2 = (z.n() * z.n()) as f64;
    let logw: Vec<f64> = batch
        .samples
        .iter()
        .map(|x| {
            z.same_shape(x)?;
            let d = z.sub(x);
            Ok(-n2 * d.inner(&d) / (2.0 * t))
        })
        .collect::<Result<_>>()?;
    let top = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logw.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    let mut score = HermTuple::zeros(z.m(), z.n());
    for (x, wi) in batch.samples.iter().zip(&w) {
        if *wi > 0.0 {
            score = score.axpy(wi / total, &v.grad(x)?);
        }
    }
    let ess = total * total / w.iter().map(|a| a * a).sum::<f64>();
    Ok(ScoreEstimate { score, ess, low_ess: ess < ESS_FLOOR })
}
