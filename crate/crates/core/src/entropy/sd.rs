use num_complex::Complex64;
use rayon::prelude::*;

use crate::ensembles::{MomentEstimate, SampleBatch};
use crate::error::{Error, Result};
use crate::matrix::{tau, Evaluator};
use crate::ncpoly::NCPoly;
use crate::semigroups::PotentialSpec;

/// Schwinger–Dyson residual `E τ_N(D_jV(x) p(x)) − E (τ_N⊗τ_N)(𝒟_j p(x))`, which vanishes for
/// `x ~ μ_N` at every `N`.
pub fn sd_residual(batch: &SampleBatch, v: &PotentialSpec, p: &NCPoly, j: usize) -> Result<MomentEstimate> {
    if batch.is_empty() {
        return Err(Error::InvalidParameter("empty batch".into()));
    }
    let dq = p.diff_quotient(j)?;
    let vals: Vec<Complex64> = batch
        .samples
        .par_iter()
        .map(|x| {
            let dv = v.grad(x)?;
            let mut ev = Evaluator::new(x);
            let lhs = tau(&(dv.mat(j) * ev.ncpoly(p)?));
            let mut rhs = Complex64::from(0.0);
            for (words, c) in dq.terms() {
                rhs += c * tau(&ev.word(&words[0])) * tau(&ev.word(&words[1]));
            }
            Ok(lhs - rhs)
        })
        .collect::<Result<_>>()?;
    Ok(MomentEstimate::from_samples(&vals))
}
