//! `(1/N²)h(μ_N) + (m/2)log N = ½∫₀^∞ (m/(1+s) − F(s)) ds + (m/2)log 2πe`, with `F` the
//! normalized Fisher information of `μ_N * σ_{s,N}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroups::PotentialSpec;

use super::fisher::{fisher_curve, FisherConfig, FisherCurve};

#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub m: usize,
    pub curve: FisherCurve,
    /// Trapezoid integral of `½(m/(1+s) − F(s))` over the grid.
    pub grid_part: f64,
    pub grid_stderr: f64,
    pub t_cut: f64,
    /// Tail `∫_T^∞` using `F(s) ≈ m/(a + s)`.
    pub tail_point: f64,
    /// Bracket of the tail from `m/(a+s) ≤ F(s) ≤ m/s`, with `a` inflated by 3 standard errors.
    pub tail_interval: (f64, f64),
    pub constant: f64,
    pub total: f64,
    /// `total` with the tail replaced by its bracket and the grid part widened by 3 standard errors.
    pub total_interval: (f64, f64),
}

/// Log-spaced grid `0, t_min, …, t_max` with `points` positive nodes.
pub fn log_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    let mut g = vec![0.0];
    let (a, b) = (t_min.ln(), t_max.ln());
    for k in 0..points {
        let s = if points == 1 { 1.0 } else { k as f64 / (points - 1) as f64 };
        g.push((a + s * (b - a)).exp());
    }
    g
}

/// `[−(m/2)log(1 + 1/T), (m/2)log((a + T)/(1 + T))]`.
pub fn tail_bracket(m: usize, a: f64, t_cut: f64) -> (f64, f64) {
    let m = m as f64;
    (-0.5 * m * (1.0 + 1.0 / t_cut).ln(), 0.5 * m * ((a + t_cut) / (1.0 + t_cut)).ln())
}

pub fn report_from_curve(curve: FisherCurve) -> Result<EntropyReport> {
    let pts = &curve.points;
    if pts.len() < 2 || pts[0].t != 0.0 {
        return Err(Error::InvalidParameter("grid must start at 0 and have at least two points".into()));
    }
    if pts.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(Error::InvalidParameter("grid must be increasing".into()));
    }
    let m = curve.m as f64;
    let integrand = |k: usize| 0.5 * (m / (1.0 + pts[k].t) - pts[k].value);
    let mut grid_part = 0.0;
    let mut grid_stderr = 0.0;
    for k in 0..pts.len() - 1 {
        let h = pts[k + 1].t - pts[k].t;
        grid_part += 0.5 * h * (integrand(k) + integrand(k + 1));
        // the per-t estimates share one outer batch, so errors are added linearly
        grid_stderr += 0.25 * h * (pts[k].stderr + pts[k + 1].stderr);
    }
    let t_cut = pts.last().expect("nonempty").t;
    let tail_point = 0.5 * m * ((curve.a + t_cut) / (1.0 + t_cut)).ln();
    let tail_interval = tail_bracket(curve.m, curve.a + 3.0 * curve.a_stderr, t_cut);
    let constant = 0.5 * m * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    let total = constant + grid_part + tail_point;
    let total_interval = (
        constant + grid_part - 3.0 * grid_stderr + tail_interval.0,
        constant + grid_part + 3.0 * grid_stderr + tail_interval.1,
    );
    Ok(EntropyReport {
        n: curve.n,
        m: curve.m,
        grid_part,
        grid_stderr,
        t_cut,
        tail_point,
        tail_interval,
        constant,
        total,
        total_interval,
        curve,
    })
}

pub fn entropy_via_fisher(v: &PotentialSpec, n: usize, grid: &[f64], cfg: &FisherConfig) -> Result<EntropyReport> {
    let mut g = grid.to_vec();
    if g.first() != Some(&0.0) {
        g.insert(0, 0.0);
    }
    report_from_curve(fisher_curve(v, n, &g, cfg)?)
}
