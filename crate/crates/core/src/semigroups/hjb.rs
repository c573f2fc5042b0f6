//! Trotter compositions `R_{t,ℓ}u = (P_δ Q_δ)^{t/δ} u` for the viscous Hamilton–Jacobi flow.
//!
//! For `N = m = 1` the iterates are carried on a uniform grid (value, first and second
//! derivative), with Newton solves for the `Q` steps and Gauss–Hermite `P` steps. Otherwise the
//! composition is evaluated by nested function handles, which costs exponentially in `t/δ`.

use crate::error::{Error, Result};
use crate::matrix::HermTuple;
use crate::rng::derive_seed;

use super::heat::{apply_p_with_grad, p_handle, PRule};
use super::hopf_lax::q_handle;
use super::quadrature::gauss_hermite;
use super::trotter::Schedule;
use super::{FnHandle, PotentialSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    pub half_width: f64,
    pub spacing: f64,
    pub hermite_order: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { half_width: 10.0, spacing: 0.005, hermite_order: 40 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RConfig {
    pub grid: GridConfig,
    /// Outer Monte-Carlo width for the nested engine; level `k` uses `paths·2^{−k/2}`.
    pub paths: usize,
    pub seed: u64,
}

impl Default for RConfig {
    fn default() -> Self {
        RConfig { grid: GridConfig::default(), paths: 64, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct RResult {
    pub value: f64,
    pub gradient: HermTuple,
    /// Outer-level Monte-Carlo error; `None` on the deterministic grid path.
    pub stderr: Option<f64>,
}

/// Value, slope and curvature of one iterate on a uniform grid.
#[derive(Clone, Debug)]
pub struct GridSolution {
    x0: f64,
    h: f64,
    w: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

fn hermite(y0: f64, y1: f64, d0: f64, d1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * d1
}

impl GridSolution {
    fn from_fn(v: &PotentialSpec, g: &GridConfig) -> Result<Self> {
        let n = (2.0 * g.half_width / g.spacing).round() as usize + 1;
        let x0 = -g.half_width;
        let h = g.spacing;
        let mut w = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        let eps = 1e-4;
        for i in 0..n {
            let x = x0 + i as f64 * h;
            let at = |y: f64| HermTuple::from_reals(&[y]);
            w.push(v.value(&at(x))?);
            d1.push(v.grad(&at(x))?.to_reals().expect("N = 1")[0]);
            let gp = v.grad(&at(x + eps))?.to_reals().expect("N = 1")[0];
            let gm = v.grad(&at(x - eps))?.to_reals().expect("N = 1")[0];
            d2.push((gp - gm) / (2.0 * eps));
        }
        Ok(GridSolution { x0, h, w, d1, d2 })
    }

    fn locate(&self, y: f64) -> Option<(usize, f64)> {
        let u = (y - self.x0) / self.h;
        let last = self.w.len() - 1;
        if u < 0.0 || u > last as f64 {
            return None;
        }
        let i = (u.floor() as usize).min(last - 1);
        Some((i, u - i as f64))
    }

    fn edge(&self, y: f64) -> (usize, f64) {
        if y < self.x0 {
            (0, y - self.x0)
        } else {
            let last = self.w.len() - 1;
            (last, y - (self.x0 + last as f64 * self.h))
        }
    }

    pub fn value(&self, y: f64) -> f64 {
        match self.locate(y) {
            Some((i, s)) => hermite(self.w[i], self.w[i + 1], self.d1[i], self.d1[i + 1], self.h, s),
            None => {
                let (i, d) = self.edge(y);
                self.w[i] + self.d1[i] * d + 0.5 * self.d2[i] * d * d
            }
        }
    }

    pub fn grad(&self, y: f64) -> f64 {
        match self.locate(y) {
            Some((i, s)) => hermite(self.d1[i], self.d1[i + 1], self.d2[i], self.d2[i + 1], self.h, s),
            None => {
                let (i, d) = self.edge(y);
                self.d1[i] + self.d2[i] * d
            }
        }
    }

    pub fn curvature(&self, y: f64) -> f64 {
        match self.locate(y) {
            Some((i, s)) => (1.0 - s) * self.d2[i] + s * self.d2[i + 1],
            None => self.d2[self.edge(y).0],
        }
    }

    fn node(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    /// Minimizer `y = z − δ w′(y)` by safeguarded Newton.
    fn argmin(&self, z: f64, delta: f64) -> Result<f64> {
        let a = z - delta * self.grad(z);
        let (mut lo, mut hi) = if a <= z { (a, z) } else { (z, a) };
        let mut y = a;
        for _ in 0..100 {
            let f = y - z + delta * self.grad(y);
            if f.abs() < 1e-14 * (1.0 + z.abs()) {
                return Ok(y);
            }
            if f > 0.0 {
                hi = hi.min(y);
            } else {
                lo = lo.max(y);
            }
            let fp = 1.0 + delta * self.curvature(y);
            let mut next = y - f / fp;
            if !(next > lo && next < hi) || fp <= 0.0 {
                next = 0.5 * (lo + hi);
            }
            if (next - y).abs() < 1e-15 * (1.0 + y.abs()) {
                return Ok(next);
            }
            y = next;
        }
        Err(Error::NoConvergence { iterations: 100, residual: (y - z + delta * self.grad(y)).abs() })
    }

    fn q_step(&self, delta: f64) -> Result<Self> {
        let n = self.w.len();
        let mut out = GridSolution { x0: self.x0, h: self.h, w: vec![0.0; n], d1: vec![0.0; n], d2: vec![0.0; n] };
        for i in 0..n {
            let z = self.node(i);
            let y = self.argmin(z, delta)?;
            let k = self.curvature(y);
            out.w[i] = self.value(y) + (z - y).powi(2) / (2.0 * delta);
            out.d1[i] = self.grad(y);
            out.d2[i] = k / (1.0 + delta * k);
        }
        Ok(out)
    }

    fn p_step(&self, delta: f64, nodes: &[f64], weights: &[f64]) -> Self {
        let n = self.w.len();
        let s = delta.sqrt();
        let mut out = GridSolution { x0: self.x0, h: self.h, w: vec![0.0; n], d1: vec![0.0; n], d2: vec![0.0; n] };
        for i in 0..n {
            let z = self.node(i);
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for (xi, om) in nodes.iter().zip(weights) {
                let y = z + s * xi;
                a += om * self.value(y);
                b += om * self.grad(y);
                c += om * self.curvature(y);
            }
            out.w[i] = a;
            out.d1[i] = b;
            out.d2[i] = c;
        }
        out
    }
}

/// `R_{t,ℓ}V` on a grid for `N = m = 1`. A schedule remainder `r` is applied first as
/// `P_r Q_r`, followed by the full steps.
pub fn trotter_r_grid(v: &PotentialSpec, sched: &Schedule, grid: &GridConfig) -> Result<GridSolution> {
    if v.m() != 1 {
        return Err(Error::InvalidParameter("grid engine needs m = 1".into()));
    }
    let (nodes, weights) = gauss_hermite(grid.hermite_order);
    let mut sol = GridSolution::from_fn(v, grid)?;
    if sched.remainder > 0.0 {
        sol = sol.q_step(sched.remainder)?.p_step(sched.remainder, &nodes, &weights);
    }
    let delta = sched.delta();
    for _ in 0..sched.steps {
        sol = sol.q_step(delta)?.p_step(delta, &nodes, &weights);
    }
    Ok(sol)
}

fn level_rule(cfg: &RConfig, n: usize, m: usize, level: usize) -> PRule {
    if n == 1 && m <= 3 {
        PRule::Quadrature { order: 8 }
    } else {
        let width = (cfg.paths as f64 * (-(level as f64) / 2.0).exp2()).round().max(2.0);
        PRule::MonteCarlo { count: width as usize, seed: derive_seed(cfg.seed, level as u64) }
    }
}

/// Value and gradient of `R_{t,ℓ}V` at `x`. Off the grid path, each level is a function
/// handle over the next; level `k` from the outside gets its own frozen increments.
pub fn trotter_r(v: &PotentialSpec, x: &HermTuple, sched: &Schedule, cfg: &RConfig) -> Result<RResult> {
    v.upper_convexity()?;
    if x.n() == 1 && x.m() == 1 {
        let sol = trotter_r_grid(v, sched, &cfg.grid)?;
        let y = x.to_reals().expect("N = 1")[0];
        return Ok(RResult {
            value: sol.value(y),
            gradient: HermTuple::from_reals(&[sol.grad(y)]),
            stderr: None,
        });
    }
    let mut lengths: Vec<f64> = Vec::new();
    if sched.remainder > 0.0 {
        lengths.push(sched.remainder);
    }
    lengths.extend(std::iter::repeat(sched.delta()).take(sched.steps));
    let Some(outer) = lengths.pop() else {
        return Ok(RResult { value: v.value(x)?, gradient: v.grad(x)?, stderr: None });
    };
    let depth = lengths.len();
    let mut w = FnHandle::from_potential(v);
    for (k, &len) in lengths.iter().enumerate() {
        w = p_handle(&q_handle(&w, len), len, level_rule(cfg, x.n(), x.m(), depth - k));
    }
    let rule = level_rule(cfg, x.n(), x.m(), 0);
    let (est, gradient) = apply_p_with_grad(&q_handle(&w, outer), x, outer, rule)?;
    let stderr = matches!(rule, PRule::MonteCarlo { .. }).then_some(est.stderr);
    Ok(RResult { value: est.value, gradient, stderr })
}
