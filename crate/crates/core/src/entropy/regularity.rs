use serde::Serialize;

use crate::error::{Error, Result};

use super::fisher::FisherCurve;

#[derive(Clone, Debug, Serialize)]
pub struct SlopeCheck {
    pub t_left: f64,
    pub t_right: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    /// `C²m(1 + Ct_left)^{−2}`, the largest bound on the interval.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub monotone: bool,
    /// Largest increase between consecutive points, in combined standard errors.
    pub worst_increase_sigma: f64,
    pub slopes_ok: bool,
    pub slopes: Vec<SlopeCheck>,
    pub passed: bool,
}

/// Monotone decrease of the Fisher curve and the slope bound `|F′(t)| ≤ C²m(1+Ct)^{−2}`, each
/// at 3 standard errors.
pub fn fisher_regularity_check(curve: &FisherCurve, big_c: f64) -> Result<RegularityReport> {
    let pts = &curve.points;
    if pts.len() < 4 {
        return Err(Error::InvalidParameter("need at least four grid points".into()));
    }
    let m = curve.m as f64;
    let mut worst = f64::NEG_INFINITY;
    let mut slopes = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let se = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        worst = worst.max((b.value - a.value) / se.max(1e-300));
        let h = b.t - a.t;
        slopes.push(SlopeCheck {
            t_left: a.t,
            t_right: b.t,
            slope: (b.value - a.value) / h,
            slope_stderr: se / h,
            bound: big_c * big_c * m / (1.0 + big_c * a.t).powi(2),
        });
    }
    let monotone = worst <= 3.0;
    let slopes_ok = slopes.iter().all(|s| s.slope.abs() <= s.bound + 3.0 * s.slope_stderr);
    Ok(RegularityReport { monotone, worst_increase_sigma: worst, slopes_ok, slopes, passed: monotone && slopes_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::FisherPoint;

    fn curve(f: impl Fn(f64) -> f64) -> FisherCurve {
        let points = [0.0, 0.25, 0.5, 1.0, 2.0]
            .iter()
            .map(|&t| FisherPoint { t, value: f(t), stderr: 1e-3 })
            .collect();
        FisherCurve { n: 8, m: 2, points, a: 1.0, a_stderr: 0.0 }
    }

    #[test]
    fn gaussian_and_constant_curves_pass() {
        assert!(fisher_regularity_check(&curve(|t| 2.0 / (1.0 + t)), 1.0).unwrap().passed);
        assert!(fisher_regularity_check(&curve(|_| 1.0), 1.0).unwrap().passed);
        assert!(!fisher_regularity_check(&curve(|t| t), 1.0).unwrap().monotone);
    }
}
