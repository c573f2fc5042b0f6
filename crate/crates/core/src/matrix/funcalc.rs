//! Functional calculus on Hermitian matrices.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::{check_finite, hermitian_deviation, hermitize, CMat, HERM_TOL};

/// Eigenvalues and a unitary of eigenvectors (columns) of a Hermitian matrix.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    check_finite(a)?;
    let dev = hermitian_deviation(a);
    if dev > HERM_TOL * a.nrows().max(1) as f64 {
        return Err(Error::NotHermitian(dev));
    }
    let e = SymmetricEigen::new(hermitize(a));
    Ok((e.eigenvalues.iter().copied().collect(), e.eigenvectors))
}

fn reconstruct(u: &CMat, d: impl Iterator<Item = f64>) -> CMat {
    let n = u.nrows();
    let d = nalgebra::DVector::from_iterator(n, d.map(Complex64::from));
    hermitize(&(u * CMat::from_diagonal(&d) * u.adjoint()))
}

/// `φ(a) = U φ(Λ) U*`.
pub fn functional_calculus(phi: impl Fn(f64) -> f64, a: &CMat) -> Result<CMat> {
    let (lam, u) = eigh(a)?;
    Ok(reconstruct(&u, lam.iter().map(|&l| phi(l))))
}

/// The derivative of `a ↦ φ(a)` applied to a Hermitian direction `h`, via divided
/// differences in the eigenbasis of `a`. The map is self-adjoint for `⟨·,·⟩_Tr`.
pub fn frechet(
    phi: impl Fn(f64) -> f64,
    dphi: impl Fn(f64) -> f64,
    a: &CMat,
    h: &CMat,
) -> Result<CMat> {
    let (lam, u) = eigh(a)?;
    let n = lam.len();
    let mut g = u.adjoint() * h * &u;
    for i in 0..n {
        for k in 0..n {
            let (li, lk) = (lam[i], lam[k]);
            let dd = if (li - lk).abs() > 1e-9 * (1.0 + li.abs().max(lk.abs())) {
                (phi(li) - phi(lk)) / (li - lk)
            } else {
                dphi(0.5 * (li + lk))
            };
            g[(i, k)] *= dd;
        }
    }
    Ok(hermitize(&(&u * g * u.adjoint())))
}

/// A smooth clipping function: the identity on `[-R, R]`, then `±(R + tanh(|t| − R))`.
/// It is `C²`, odd, and bounded by `R + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothClip {
    pub radius: f64,
}

impl SmoothClip {
    pub fn value(&self, t: f64) -> f64 {
        let r = self.radius;
        if t.abs() <= r {
            t
        } else {
            t.signum() * (r + (t.abs() - r).tanh())
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let r = self.radius;
        if t.abs() <= r {
            1.0
        } else {
            let c = (t.abs() - r).cosh();
            1.0 / (c * c)
        }
    }

    pub fn sup(&self) -> f64 {
        self.radius + 1.0
    }
}
