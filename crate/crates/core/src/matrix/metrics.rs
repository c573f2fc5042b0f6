use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::CMat;

/// `τ_N(a) = Tr(a)/N`.
pub fn tau(a: &CMat) -> Complex64 {
    a.trace() / a.nrows() as f64
}

/// `⟨a, b⟩_Tr = Tr(ab)`.
pub fn inner_tr(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::from(0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// `‖a‖₂ = τ_N(a* a)^{1/2}`.
pub fn norm2(a: &CMat) -> f64 {
    (a.iter().map(|z| z.norm_sqr()).sum::<f64>() / a.nrows() as f64).sqrt()
}

fn singular_values(a: &CMat) -> Vec<f64> {
    let g = a.adjoint() * a;
    SymmetricEigen::new(g)
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect()
}

/// Operator norm: the largest singular value.
pub fn opnorm(a: &CMat) -> f64 {
    singular_values(a).into_iter().fold(0.0, f64::max)
}

/// `‖a‖_α = τ_N(|a|^α)^{1/α}`; `α = ∞` gives the operator norm.
pub fn norm_alpha(a: &CMat, alpha: f64) -> f64 {
    if alpha.is_infinite() {
        return opnorm(a);
    }
    let s = singular_values(a);
    let n = s.len() as f64;
    (s.iter().map(|v| v.powf(alpha)).sum::<f64>() / n).powf(1.0 / alpha)
}
