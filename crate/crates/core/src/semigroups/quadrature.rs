//! Gauss–Hermite rules and adaptive Gauss–Kronrod integration.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Nodes and weights with `Σ w_k f(z_k) ≈ E f(Z)`, `Z ~ N(0, 1)`, exact for polynomials of
/// degree below `2·order`. Computed by the Golub–Welsch eigenvalue method.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    // Jacobi matrix of the probabilists' Hermite polynomials
    let mut j = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let b = (k as f64).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let e = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| (e.eigenvalues[k], e.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    (pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1 / total).collect())
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive bisection with the 7/15-point Gauss–Kronrod pair, to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut stack = vec![(a, b, tol)];
    let mut total = 0.0;
    let mut evals = 0usize;
    while let Some((lo, hi, tl)) = stack.pop() {
        let (v, err) = gk15(&f, lo, hi);
        evals += 1;
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        if err <= tl || (hi - lo) < 1e-12 * (b - a).abs().max(1.0) {
            total += v;
        } else if evals > 200_000 {
            return Err(Error::Quadrature(format!("no convergence (last error {err:e})")));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * tl));
            stack.push((mid, hi, 0.5 * tl));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        let (z, w) = gauss_hermite(40);
        let m = |k: i32| z.iter().zip(&w).map(|(z, w)| w * z.powi(k)).sum::<f64>();
        assert!((m(0) - 1.0).abs() < 1e-13);
        assert!(m(1).abs() < 1e-13);
        assert!((m(2) - 1.0).abs() < 1e-12);
        assert!((m(4) - 3.0).abs() < 1e-11);
        assert!((m(8) - 105.0).abs() < 1e-9);
    }

    #[test]
    fn kronrod_gaussian() {
        let v = integrate(|x| (-0.5 * x * x).exp(), -12.0, 12.0, 1e-13).unwrap();
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }
}
