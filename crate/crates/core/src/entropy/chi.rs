use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroups::PotentialSpec;

use super::fisher::FisherConfig;
use super::integral::{entropy_via_fisher, EntropyReport};

#[derive(Clone, Debug, Serialize)]
pub struct ChiStarReport {
    pub reports: Vec<EntropyReport>,
    /// Fit `h(N) ≈ h_∞ + b/N²`.
    pub limit: f64,
    pub limit_stderr: f64,
    pub slope: f64,
    /// `h(N) − fit(N)` per `N`; zero when only two sizes are given.
    pub residuals: Vec<f64>,
}

/// Weighted least squares of `y` on `(1, x)`; returns intercept, slope, intercept stderr.
fn linear_fit(x: &[f64], y: &[f64], se: &[f64]) -> (f64, f64, f64) {
    let w: Vec<f64> = if se.iter().all(|s| *s > 0.0) {
        se.iter().map(|s| 1.0 / (s * s)).collect()
    } else {
        vec![1.0; x.len()]
    };
    let sw: f64 = w.iter().sum();
    let sx: f64 = w.iter().zip(x).map(|(w, x)| w * x).sum();
    let sy: f64 = w.iter().zip(y).map(|(w, y)| w * y).sum();
    let sxx: f64 = w.iter().zip(x).map(|(w, x)| w * x * x).sum();
    let sxy: f64 = w.iter().zip(x).zip(y).map(|((w, x), y)| w * x * y).sum();
    let det = sw * sxx - sx * sx;
    let b = (sw * sxy - sx * sy) / det;
    let a = (sy - b * sx) / sw;
    // intercept variance from the weights; inflate by the propagated errors when unweighted
    let var_a = if se.iter().all(|s| *s > 0.0) {
        sxx / det
    } else {
        let s2 = se.iter().map(|s| s * s).fold(0.0, f64::max);
        s2 * sxx / det
    };
    (a, b, var_a.max(0.0).sqrt())
}

/// Entropy at each `N` and its extrapolation in `1/N²`.
pub fn chi_star_estimate(
    v: &PotentialSpec,
    n_list: &[usize],
    grid: &[f64],
    cfg: &FisherConfig,
) -> Result<ChiStarReport> {
    if n_list.len() < 2 {
        return Err(Error::InvalidParameter("need at least two matrix sizes".into()));
    }
    let reports: Vec<EntropyReport> =
        n_list.iter().map(|&n| entropy_via_fisher(v, n, grid, cfg)).collect::<Result<_>>()?;
    let x: Vec<f64> = n_list.iter().map(|&n| 1.0 / (n * n) as f64).collect();
    let y: Vec<f64> = reports.iter().map(|r| r.total).collect();
    let se: Vec<f64> = reports.iter().map(|r| r.grid_stderr).collect();
    let (limit, slope, limit_stderr) = linear_fit(&x, &y, &se);
    let residuals = x.iter().zip(&y).map(|(x, y)| y - (limit + slope * x)).collect();
    Ok(ChiStarReport { reports, limit, limit_stderr, slope, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_line() {
        let x = [1.0 / 64.0, 1.0 / 256.0, 1.0 / 1024.0];
        let y: Vec<f64> = x.iter().map(|x| 1.5 - 2.0 * x).collect();
        let (a, b, _) = linear_fit(&x, &y, &[0.01, 0.01, 0.01]);
        assert!((a - 1.5).abs() < 1e-12 && (b + 2.0).abs() < 1e-10);
    }
}
