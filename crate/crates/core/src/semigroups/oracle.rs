//! Direct evaluation of `−log P_t[e^{−V}](x)` at `N = 1` by adaptive quadrature.

use crate::error::{Error, Result};
use crate::matrix::HermTuple;

use super::quadrature::integrate;
use super::PotentialSpec;

const ORACLE_TOL: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct OracleValue {
    pub value: f64,
    pub gradient: Vec<f64>,
}

/// `∫ g(y) φ_t(y) dy` over `ℝ^k` (`k ≤ 2`) for a standard product Gaussian of variance `t`,
/// truncated at 12 standard deviations.
fn gaussian_integral(k: usize, t: f64, g: &dyn Fn(&[f64]) -> Result<Vec<f64>>, outputs: usize) -> Result<Vec<f64>> {
    let s = t.sqrt();
    let lim = 12.0 * s;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * t).sqrt();
    let phi = |y: f64| norm * (-0.5 * y * y / t).exp();
    let mut out = vec![0.0; outputs];
    for (o, slot) in out.iter_mut().enumerate() {
        let err = std::cell::Cell::new(None);
        let inner = |y: &[f64]| -> f64 {
            match g(y) {
                Ok(v) => v[o],
                Err(e) => {
                    err.set(Some(e.to_string()));
                    f64::NAN
                }
            }
        };
        let r = match k {
            1 => integrate(|a| inner(&[a]) * phi(a), -lim, lim, ORACLE_TOL),
            2 => integrate(
                |a| {
                    integrate(|b| inner(&[a, b]) * phi(b), -lim, lim, ORACLE_TOL)
                        .map(|v| v * phi(a))
                        .unwrap_or(f64::NAN)
                },
                -lim,
                lim,
                ORACLE_TOL,
            ),
            _ => return Err(Error::InvalidParameter("oracle supports m ≤ 2".into())),
        };
        if let Some(msg) = err.take() {
            return Err(Error::Quadrature(msg));
        }
        *slot = r?;
    }
    Ok(out)
}

/// `R_tV(x) = −log ∫ e^{−V(x + y)} dσ_{t,1}(y)` and its gradient
/// `E[DV(x + Y) e^{−V(x+Y)}] / E[e^{−V(x+Y)}]`, for `N = 1`, `m ≤ 2`.
pub fn heat_potential_oracle(v: &PotentialSpec, x: &HermTuple, t: f64) -> Result<OracleValue> {
    let xs = x
        .to_reals()
        .ok_or_else(|| Error::InvalidParameter("oracle needs N = 1".into()))?;
    let m = xs.len();
    if m > 2 {
        return Err(Error::InvalidParameter("oracle supports m ≤ 2".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(OracleValue { value: v.value(x)?, gradient: v.grad(x)?.to_reals().expect("N = 1") });
    }
    let shift = v.value(x)?;
    let g = |y: &[f64]| -> Result<Vec<f64>> {
        let z: Vec<f64> = xs.iter().zip(y).map(|(a, b)| a + b).collect();
        let zt = HermTuple::from_reals(&z);
        let e = (-(v.value(&zt)? - shift)).exp();
        let d = v.grad(&zt)?.to_reals().expect("N = 1");
        let mut out = vec![e];
        out.extend(d.iter().map(|di| di * e));
        Ok(out)
    };
    let r = gaussian_integral(m, t, &g, m + 1)?;
    if !(r[0] > 0.0) {
        return Err(Error::Quadrature("vanishing partition function".into()));
    }
    Ok(OracleValue {
        value: shift - r[0].ln(),
        gradient: r[1..].iter().map(|d| d / r[0]).collect(),
    })
}
