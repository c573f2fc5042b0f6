//! The invariant and acceptance suite behind `freegibbs check`.
//!
//! The fast tier runs the symbolic identities and the deterministic `N = 1` semigroup checks; the
//! full tier adds the Monte-Carlo items at larger `N`.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::emit::CheckResult;
use crate::ensembles::{gas_moments, sample_gibbs_mala, GasConfig, MalaConfig, MomentEstimate};
use crate::entropy::{entropy_via_fisher, fisher_curve, fisher_regularity_check, log_grid, sd_residual, FisherConfig};
use crate::error::Result;
use crate::expr::{parse_expression, parse_operator_expression, parse_word};
use crate::matrix::{eval_operator, eval_scalar, fd_gradient, fd_laplacian, random_tuple, tau};
use crate::randpoly::random_trace_poly;
use crate::semigroups::{
    apply_p, apply_q, expectation_via_t, heat_potential_oracle, p_handle, poly_eval, q_handle, trotter_r_grid,
    FnHandle, GridConfig, PRule, PotentialSpec, Provenance, Schedule, TrotterConfig,
};
use crate::{compose, GenWord, HermTuple, LaplaceMode, NCPoly, ScalarTracePoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Fast,
    Full,
}

type Check = fn() -> Result<CheckResult>;

const FAST: &[(&str, Check)] = &[
    ("symbolic_golden_vectors", symbolic_golden_vectors),
    ("heat_flow_squared_norm", heat_flow_squared_norm),
    ("gradient_identity", gradient_identity),
    ("laplacian_identity", laplacian_identity),
    ("q_closed_forms", q_closed_forms),
    ("q_semigroup_law", q_semigroup_law),
    ("commutation_pq_le_qp", commutation),
    ("r_monotone_in_level", r_monotone_and_value_bound),
    ("r_gradient_order", r_gradient_order),
    ("r_time_continuity", r_time_continuity),
    ("r_convexity_profile", r_convexity_profile),
    ("heat_potential_identity", heat_potential_identity),
];

const FULL: &[(&str, Check)] = &[
    ("heat_equivalence_mc", heat_equivalence_mc),
    ("gaussian_fisher_curve", gaussian_fisher_curve),
    ("gaussian_entropy", gaussian_entropy),
    ("quartic_model", quartic_model),
    ("quartic_fisher_regularity", quartic_fisher_regularity),
    ("trotter_expectation_vs_mala", trotter_expectation_vs_mala),
    ("stationarity", stationarity),
];

/// Names of the checks a tier runs, in order.
pub fn check_names(tier: Tier) -> Vec<&'static str> {
    checks(tier).map(|(name, _)| *name).collect()
}

fn checks(tier: Tier) -> impl Iterator<Item = &'static (&'static str, Check)> {
    let full: &[(&str, Check)] = if tier == Tier::Full { FULL } else { &[] };
    FAST.iter().chain(full.iter())
}

/// Runs every check of the tier; an error inside a check becomes a failed row.
pub fn verify_suite(tier: Tier) -> Vec<CheckResult> {
    checks(tier).map(|(name, f)| run_one(name, *f)).collect()
}

/// Runs one check by name.
pub fn run_check(name: &str) -> Option<CheckResult> {
    checks(Tier::Full).find(|(n, _)| *n == name).map(|(n, f)| run_one(n, *f))
}

fn run_one(name: &str, f: Check) -> CheckResult {
    let start = Instant::now();
    let mut r = f().unwrap_or_else(|e| row(false, f64::NAN, f64::NAN, format!("error: {e}")));
    r.name = name.to_string();
    r.detail = format!("{}; {:.2}s", r.detail, start.elapsed().as_secs_f64());
    r
}

fn row(passed: bool, measured: f64, threshold: f64, detail: String) -> CheckResult {
    CheckResult { name: String::new(), passed, measured, threshold, detail }
}

/// `measured ≤ threshold`.
fn at_most(measured: f64, threshold: f64, detail: String) -> CheckResult {
    row(measured <= threshold, measured, threshold, detail)
}

fn word(s: &str) -> Result<GenWord> {
    parse_word(s, 9)
}

fn quartic() -> PotentialSpec {
    PotentialSpec::quartic(1, 0.1, 5.0)
}

fn log2_slope(x: &[f64], y: &[f64]) -> f64 {
    let ly: Vec<f64> = y.iter().map(|v| v.log2()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn combined(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

fn symbolic_golden_vectors() -> Result<CheckResult> {
    let mut bad = Vec::new();
    let f = NCPoly::monomial(3, word("X1*X2*X1^2*X3*X2")?, 1.0)?;
    let d1 = f.diff_quotient(0)?;
    let want = ["1 ⊗ X2*X1^2*X3*X2", "X1*X2 ⊗ X1*X3*X2", "X1*X2*X1 ⊗ X3*X2"];
    if d1.terms().len() != 3 {
        bad.push("D1 f");
    }
    for (ws, _) in d1.terms() {
        let txt = ws.iter().map(|w| if w.is_empty() { "1".to_string() } else { w.to_string() }).collect::<Vec<_>>();
        if !want.contains(&txt.join(" ⊗ ").as_str()) {
            bad.push("D1 f");
        }
    }
    let cyc = crate::OperatorTracePoly::from_ncpoly(&f.cyclic_derivative(0)?);
    if cyc != parse_operator_expression("X2*X1^2*X3*X2 + X1*X3*X2*X1*X2 + X3*X2*X1*X2*X1", 3)? {
        bad.push("cyclic D1 f");
    }
    let hash = d1.embed(4)?.hash(&NCPoly::generator(4, 3)?)?;
    if crate::OperatorTracePoly::from_ncpoly(&hash)
        != parse_operator_expression("X4*X2*X1^2*X3*X2 + X1*X2*X4*X1*X3*X2 + X1*X2*X1*X4*X3*X2", 4)?
    {
        bad.push("hash");
    }
    let d2 = d1.diff_quotient(0)?;
    if d2.terms().len() != 3 || d2.terms().values().any(|c| *c != Complex64::from(2.0)) {
        bad.push("D1^2 f");
    }
    let g = parse_expression("tr(X1*X2*X1*X3)*tr(X2^2*X1)", 3)?;
    let l1 = parse_expression("2*tr(X3)*tr(X2)*tr(X2^2*X1)", 3)?;
    if !g.laplacian_j(0, LaplaceMode::Limit)?.approx_eq(&l1, 1e-15) {
        bad.push("L1 f");
    }
    let cross = parse_expression("tr(X2*X1*X3*X2^2) + tr(X3*X1*X2^3)", 3)?;
    for n in [2usize, 5] {
        let want = l1.try_add(&cross.scale(2.0 / (n * n) as f64))?;
        if !g.laplacian_j(0, LaplaceMode::Finite(n))?.approx_eq(&want, 1e-15) {
            bad.push("L_{N,1} f");
        }
    }
    let z = compose(
        &[parse_operator_expression("tr(X1*X2)*X2", 2)?, parse_operator_expression("X1 + tr(X1^2)*X2", 2)?],
        &[parse_operator_expression("tr(X1)*X2 + X1", 2)?, parse_operator_expression("X1", 2)?],
    )?;
    let z1 = parse_operator_expression("tr(X1)*tr(X2*X1)*X1 + tr(X1^2)*X1", 2)?;
    let z2 = parse_operator_expression(
        "tr(X1)*X2 + X1 + tr(X1)^2*tr(X2^2)*X1 + 2*tr(X1)*tr(X2*X1)*X1 + tr(X1^2)*X1",
        2,
    )?;
    if !z[0].approx_eq(&z1, 1e-15) || !z[1].approx_eq(&z2, 1e-15) {
        bad.push("composition");
    }
    bad.dedup();
    let detail = if bad.is_empty() { "all vectors match".to_string() } else { format!("mismatch: {}", bad.join(", ")) };
    Ok(at_most(bad.len() as f64, 0.0, detail))
}

fn heat_flow_squared_norm() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for m in 1..=3usize {
        let src: Vec<String> = (1..=m).map(|j| format!("tr(X{j}^2)")).collect();
        let f = parse_expression(&src.join(" + "), m)?;
        let f2 = f.try_mul(&f)?;
        let mf = m as f64;
        for t in [0.3, 1.0, 2.0] {
            for (mode, e) in [(LaplaceMode::Limit, 0.0), (LaplaceMode::Finite(3), 1.0 / 9.0)] {
                let want = f2
                    .try_add(&f.scale((2.0 * mf + 4.0 * e) * t))?
                    .try_add(&ScalarTracePoly::constant(m, mf * (mf + 2.0 * e) * t * t))?;
                worst = worst.max(f2.heat_propagate(t, mode).try_sub(&want)?.max_coeff());
            }
        }
    }
    Ok(at_most(worst, 1e-12, format!("max coefficient error {worst:.2e}")))
}

fn gradient_identity() -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let (m, n) = (1 + case % 3, 1 + (case * 7) % 6);
        let f = random_trace_poly(m, 6, 4, &mut rng);
        let x = random_tuple(m, n, 0.7, &mut rng);
        let fd = fd_gradient(|y: &HermTuple| eval_scalar(&f, y).unwrap(), &x, 1e-5);
        for (j, fdj) in fd.iter().enumerate() {
            let sym = eval_operator(&f.grad(j)?, &x)? / Complex64::from(n as f64);
            worst = worst.max((fdj - &sym).norm() / sym.norm().max(1.0));
        }
    }
    Ok(at_most(worst, 1e-6, format!("50 random cases, max relative error {worst:.2e}")))
}

fn laplacian_identity() -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let (m, n) = (1 + case % 3, 1 + (case * 3) % 5);
        let f = random_trace_poly(m, 6, 4, &mut rng);
        let x = random_tuple(m, n, 0.7, &mut rng);
        let fd = fd_laplacian(|y: &HermTuple| eval_scalar(&f, y).unwrap(), &x, 1e-4);
        let sym = eval_scalar(&f.laplacian(LaplaceMode::Finite(n)), &x)? * n as f64;
        worst = worst.max((fd - sym).norm() / sym.norm().max(1.0));
    }
    Ok(at_most(worst, 1e-4, format!("20 random cases, max relative error {worst:.2e}")))
}

/// `a + ⟨p,x⟩ + (κ/2)‖x‖²` at `m = 1`.
fn isotropic_quadratic(a: f64, p: HermTuple, kappa: f64) -> FnHandle {
    let p2 = p.clone();
    FnHandle::new(
        move |x: &HermTuple| Ok(a + p.inner(x) + 0.5 * kappa * x.inner(x)),
        Some(move |x: &HermTuple| Ok(p2.axpy(kappa, x))),
        Provenance::Composite("quadratic".into()),
    )
    .with_semiconcavity(kappa)
}

fn q_closed_forms() -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst: f64 = 0.0;
    for kappa in [0.0, 0.5, 1.0, 3.0] {
        for t in [0.1, 1.0, 4.0] {
            let p = random_tuple(1, 3, 1.0, &mut rng);
            let x = random_tuple(1, 3, 1.0, &mut rng);
            let got = apply_q(&isotropic_quadratic(0.3, p.clone(), kappa), &x, t)?;
            let w = x.axpy(-t, &p);
            let want = 0.3 - 0.5 * t * p.inner(&p) + p.inner(&x) + 0.5 * kappa / (1.0 + t * kappa) * w.inner(&w);
            worst = worst.max((got.value - want).abs());
        }
    }
    Ok(at_most(worst, 1e-10, format!("max error {worst:.2e}")))
}

/// `½x² + sin x` at `N = 1`, which has curvature in `[0, 2]`.
fn wavy() -> FnHandle {
    let scalar = |x: &HermTuple| x.to_reals().map(|v| v[0]).unwrap_or(f64::NAN);
    FnHandle::new(
        move |x: &HermTuple| {
            let s = scalar(x);
            Ok(0.5 * s * s + s.sin())
        },
        Some(move |x: &HermTuple| {
            let s = scalar(x);
            Ok(HermTuple::from_reals(&[s + s.cos()]))
        }),
        Provenance::Composite("x^2/2 + sin x".into()),
    )
    .with_semiconcavity(2.0)
}

fn q_semigroup_law() -> Result<CheckResult> {
    let u = wavy();
    let mut worst: f64 = 0.0;
    for (s, t) in [(0.2, 0.3), (0.5, 1.0), (1.0, 2.0)] {
        let qs = q_handle(&u, s);
        for x in [-2.0, -0.4, 0.0, 1.3, 3.0] {
            let x = HermTuple::from_reals(&[x]);
            let once = apply_q(&u, &x, s + t)?.value;
            let twice = apply_q(&qs, &x, t)?.value;
            worst = worst.max((once - twice).abs());
        }
    }
    Ok(at_most(worst, 1e-8, format!("max |Q_(s+t)u - Q_t Q_s u| = {worst:.2e}")))
}

fn commutation() -> Result<CheckResult> {
    let u = wavy();
    let rule = PRule::Quadrature { order: 40 };
    // largest value of P_tQ_tu − Q_tP_tu; it should not be positive
    let mut worst = f64::NEG_INFINITY;
    for t in [0.25, 1.0] {
        let qu = q_handle(&u, t);
        let pu = p_handle(&u, t, rule);
        for x in [-2.0, -0.5, 0.0, 0.7, 2.5] {
            let x = HermTuple::from_reals(&[x]);
            let pq = apply_p(&qu, &x, t, rule)?.value;
            let qp = apply_q(&pu, &x, t)?.value;
            worst = worst.max(pq - qp);
        }
    }
    Ok(at_most(worst, 1e-9, format!("max (P_tQ_tu - Q_tP_tu) = {worst:.2e}")))
}

/// Dyadic time for the `R_{t,ℓ}` checks.
const R_TIME: f64 = 0.75;
const R_POINTS: [f64; 3] = [-1.0, 0.0, 1.5];

fn r_monotone_and_value_bound() -> Result<CheckResult> {
    let v = quartic();
    let big_c = v.upper_convexity()?;
    let t = R_TIME;
    let oracle: Vec<f64> =
        R_POINTS.iter().map(|&x| heat_potential_oracle(&v, &HermTuple::from_reals(&[x]), t).map(|o| o.value)).collect::<Result<_>>()?;
    let mut prev: Option<Vec<f64>> = None;
    let mut decrease: f64 = 0.0;
    let mut above: f64 = 0.0;
    let mut ratio: f64 = 0.0;
    for l in 3..=7u32 {
        let sol = trotter_r_grid(&v, &Schedule::new(t, l)?, &GridConfig::default())?;
        let vals: Vec<f64> = R_POINTS.iter().map(|&x| sol.value(x)).collect();
        for ((x, r), o) in R_POINTS.iter().zip(&vals).zip(&oracle) {
            above = above.max(r - o);
            if (2.0f64).powi(-(l as i32) - 1) * big_c <= 1.0 {
                let dv = v.grad(&HermTuple::from_reals(&[*x]))?.norm2();
                let bound = (1.5 * big_c * big_c * t / (1.0 + big_c * t)
                    + (1.0 + big_c * t).ln() * (1.0 + big_c + dv * dv))
                    * (2.0f64).powi(-(l as i32));
                ratio = ratio.max((o - r).abs() / bound);
            }
        }
        if let Some(p) = &prev {
            for (a, b) in p.iter().zip(&vals) {
                decrease = decrease.max(a - b);
            }
        }
        prev = Some(vals);
    }
    let passed = decrease <= 1e-9 && above <= 1e-6 && ratio <= 1.0;
    Ok(row(
        passed,
        ratio,
        1.0,
        format!(
            "levels 3..7: largest drop between levels {decrease:.1e}, largest excess over R_t {above:.1e}, \
             largest gap/bound {ratio:.3}"
        ),
    ))
}

/// Measured `ℓ`-order of the gradient error against the band `0.5 ± 0.2`.
fn r_gradient_order() -> Result<CheckResult> {
    let v = quartic();
    let t = R_TIME;
    let pts = [-1.0, 1.5];
    let oracle: Vec<f64> = pts
        .iter()
        .map(|&x| heat_potential_oracle(&v, &HermTuple::from_reals(&[x]), t).map(|o| o.gradient[0]))
        .collect::<Result<_>>()?;
    let levels: Vec<u32> = (3..=8).collect();
    let mut errs = Vec::new();
    for &l in &levels {
        let sol = trotter_r_grid(&v, &Schedule::new(t, l)?, &GridConfig::default())?;
        errs.push(pts.iter().zip(&oracle).map(|(x, o)| (sol.grad(*x) - o).abs()).fold(0.0, f64::max));
    }
    let x: Vec<f64> = levels.iter().map(|&l| l as f64).collect();
    let order = -log2_slope(&x, &errs);
    Ok(row(
        (order - 0.5).abs() <= 0.2,
        order,
        0.5,
        format!("gradient error order {order:.2} over levels 3..8, band 0.5 ± 0.2; error at level 8 {:.2e}", errs[5]),
    ))
}

fn r_time_continuity() -> Result<CheckResult> {
    let v = quartic();
    let big_c = v.upper_convexity()?;
    let times = [0.0, 0.25, 0.5, 1.0, 2.0];
    let mut worst = f64::NEG_INFINITY;
    for x in [-1.0, 0.0, 0.8] {
        let xt = HermTuple::from_reals(&[x]);
        let dv = v.grad(&xt)?.norm2();
        let vals: Vec<f64> = times.iter().map(|&t| heat_potential_oracle(&v, &xt, t).map(|o| o.value)).collect::<Result<_>>()?;
        for i in 0..times.len() {
            for k in i + 1..times.len() {
                let (s, t) = (times[i], times[k]);
                let up = vals[i] + 0.5 * ((1.0 + big_c * t).ln() - (1.0 + big_c * s).ln());
                let down = vals[i] - 0.5 * (t - s) * (big_c + dv * dv);
                worst = worst.max(vals[k] - up).max(down - vals[k]);
            }
        }
    }
    Ok(at_most(worst, 1e-9, format!("largest violation of the two-sided bound {worst:.2e}")))
}

fn r_convexity_profile() -> Result<CheckResult> {
    let v = quartic();
    let (c, big_c) = (v.lower_convexity()?, v.upper_convexity()?);
    let t = R_TIME;
    let sol = trotter_r_grid(&v, &Schedule::new(t, 7)?, &GridConfig::default())?;
    let (lo, hi) = (c / (1.0 + c * t), big_c / (1.0 + big_c * t));
    let (mut kmin, mut kmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=30 {
        let k = sol.curvature(-1.5 + 0.1 * i as f64);
        kmin = kmin.min(k);
        kmax = kmax.max(k);
    }
    let tol = 1e-3;
    let passed = kmin >= lo - tol && kmax <= hi + tol;
    let violation = (lo - kmin).max(kmax - hi);
    Ok(row(
        passed,
        violation,
        tol,
        format!("curvature on [-1.5, 1.5] in [{kmin:.4}, {kmax:.4}], allowed [{lo:.4}, {hi:.4}]"),
    ))
}

fn heat_potential_identity() -> Result<CheckResult> {
    let v = quartic();
    let t = 0.7;
    let mut gap: f64 = 0.0;
    let mut errs = Vec::new();
    let levels: Vec<u32> = (3..=8).collect();
    for &l in &levels {
        let sol = trotter_r_grid(&v, &Schedule::with_remainder(t, l)?, &GridConfig::default())?;
        let mut e: f64 = 0.0;
        for x in R_POINTS {
            let o = heat_potential_oracle(&v, &HermTuple::from_reals(&[x]), t)?;
            e = e.max((sol.value(x) - o.value).abs());
        }
        gap = e;
        errs.push(e);
    }
    let x: Vec<f64> = levels.iter().map(|&l| l as f64).collect();
    let order = -log2_slope(&x, &errs);
    Ok(row(
        gap <= 1e-2 && (order - 1.0).abs() <= 0.3,
        gap,
        1e-2,
        format!("|R_(t,8)V - R_tV| = {gap:.2e}, value order {order:.2}"),
    ))
}

fn heat_equivalence_mc() -> Result<CheckResult> {
    let f = parse_expression("tr(X1^2*X2^2) + 0.5*tr(X1*X2)^2 + tr(X1^4) - tr(X1*X2*X1*X2) + tr(X2)*tr(X1^2*X2)", 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let x = random_tuple(2, 8, 0.6, &mut rng);
    let mc = apply_p(&FnHandle::from_trace_poly(&f), &x, 0.5, PRule::MonteCarlo { count: 100_000, seed: 55 })?;
    let exact = eval_scalar(&f.heat_propagate(0.5, LaplaceMode::Finite(8)), &x)?.re;
    let z = (mc.value - exact).abs() / mc.stderr;
    Ok(at_most(z, 3.0, format!("N=8: {:.5} ± {:.5} vs {exact:.5}", mc.value, mc.stderr)))
}

fn gaussian_fisher_curve() -> Result<CheckResult> {
    let mut cfg = FisherConfig::new(400, 808);
    cfg.control_variate = false;
    let curve = fisher_curve(&PotentialSpec::quadratic(2, 1.0), 16, &[0.0, 0.5, 1.0], &cfg)?;
    let worst = curve.points.iter().map(|p| (p.value - 2.0 / (1.0 + p.t)).abs() * (1.0 + p.t) / 2.0).fold(0.0, f64::max);
    let sandwich = curve.sandwich_violation();
    Ok(row(
        worst <= 0.02 && sandwich <= 3.0,
        worst,
        0.02,
        format!("N=16, m=2: max relative error {worst:.2e}, sandwich {sandwich:.2} sigma"),
    ))
}

fn gaussian_entropy() -> Result<CheckResult> {
    let r = entropy_via_fisher(&PotentialSpec::quadratic(1, 1.0), 8, &log_grid(0.02, 20.0, 12), &FisherConfig::new(400, 909))?;
    let want = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    let rel = (r.total - want).abs() / want;
    let (lo, hi) = r.tail_interval;
    Ok(row(
        rel <= 0.01 && lo <= 0.0 && 0.0 <= hi,
        rel,
        0.01,
        format!("{:.5} vs {want:.5}, tail interval [{lo:.4}, {hi:.4}]", r.total),
    ))
}

fn quartic_model() -> Result<CheckResult> {
    let v = quartic();
    let profile = v.one_matrix_profile().expect("single-trace quartic");
    let gas = gas_moments(|l| poly_eval(&profile, l), 2, &GasConfig { n: 256, sweeps: 2000, burnin: 500, batches: 20, seed: 3 })?;
    let oracle = &gas.moments[1];
    let mut worst: f64 = 0.0;
    let mut parts = vec![format!("gas {:.5} ± {:.5}", oracle.re(), oracle.stderr)];
    let mut sd_ok = true;
    for n in [16usize, 32] {
        let b = sample_gibbs_mala(&v, n, &MalaConfig::new(400, 7))?;
        let vals: Vec<f64> = b.samples.iter().map(|x| tau(&(x.mat(0) * x.mat(0))).re).collect();
        let e = MomentEstimate::from_real_samples(&vals);
        let tol = 0.02 * oracle.re() + 3.0 * combined(e.stderr, oracle.stderr);
        worst = worst.max((e.re() - oracle.re()).abs() / tol);
        parts.push(format!("N={n} {:.5} ± {:.5}", e.re(), e.stderr));
        let r = sd_residual(&b, &v, &NCPoly::from_terms(1, [(word("X1^3")?, Complex64::from(1.0))])?, 0)?;
        sd_ok &= r.value.norm() <= 3.0 * r.stderr + 0.02;
    }
    Ok(row(worst <= 1.0 && sd_ok, worst, 1.0, format!("{}; SD residuals ok: {sd_ok}", parts.join(", "))))
}

fn quartic_fisher_regularity() -> Result<CheckResult> {
    let v = quartic();
    let curve = fisher_curve(&v, 16, &log_grid(0.05, 5.0, 7), &FisherConfig::new(400, 1111))?;
    let r = fisher_regularity_check(&curve, v.upper_convexity()?)?;
    let steepest = r.slopes.iter().map(|s| s.slope.abs() / s.bound).fold(0.0, f64::max);
    Ok(row(
        r.passed,
        steepest,
        1.0,
        format!("monotone {} (worst increase {:.2} sigma), slopes within bound {}", r.monotone, r.worst_increase_sigma, r.slopes_ok),
    ))
}

fn trotter_expectation_vs_mala() -> Result<CheckResult> {
    let v = quartic();
    let u = FnHandle::from_trace_poly(&parse_expression("tr(X1^2)", 1)?);
    let r = expectation_via_t(&v, &u, &HermTuple::zeros(1, 4), 8.0, 8, &TrotterConfig::new(4000, 1212))?;
    let b = sample_gibbs_mala(&v, 4, &MalaConfig::new(4000, 12))?;
    let vals: Vec<f64> = b.samples.iter().map(|x| tau(&(x.mat(0) * x.mat(0))).re).collect();
    let direct = MomentEstimate::from_real_samples(&vals);
    let z = (r.estimate.re() - direct.re()).abs() / combined(r.estimate.stderr, direct.stderr);
    Ok(at_most(z, 3.0, format!("N=4: T {:.5} vs MALA {:.5}", r.estimate.re(), direct.re())))
}

/// `∫T_s u dμ = ∫u dμ`: running the Trotter chain for an extra time `s` before the long-time
/// average leaves the estimate unchanged.
fn stationarity() -> Result<CheckResult> {
    let v = quartic();
    let u = FnHandle::from_trace_poly(&parse_expression("tr(X1^2)", 1)?);
    let x0 = HermTuple::zeros(1, 4);
    let mut est = Vec::new();
    for s in [0.0, 0.5, 1.0] {
        est.push(expectation_via_t(&v, &u, &x0, 8.0 + s, 6, &TrotterConfig::new(2000, 77))?.estimate);
    }
    let mut z: f64 = 0.0;
    for a in &est {
        for b in &est {
            z = z.max((a.re() - b.re()).abs() / combined(a.stderr, b.stderr));
        }
    }
    let vals: Vec<String> = est.iter().map(|e| format!("{:.5}", e.re())).collect();
    Ok(at_most(z, 3.0, format!("s = 0, 0.5, 1: {}", vals.join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names = check_names(Tier::Full);
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
        assert!(check_names(Tier::Fast).len() < n);
    }

    #[test]
    fn unknown_check_is_none() {
        assert!(run_check("nope").is_none());
    }
}
