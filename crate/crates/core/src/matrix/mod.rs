//! Hermitian matrix tuples and their numerics.

mod basis;
mod eval;
mod fd;
mod funcalc;
mod metrics;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub use basis::{herm_basis, BasisSet};
pub use eval::{eval_hash, eval_ncpoly, eval_operator, eval_scalar, eval_grad, eval_word, Evaluator};
pub use fd::{fd_gradient, fd_laplacian, fd_oracle, FdResult, FD_GRAD_STEP, FD_LAPLACE_STEP};
pub use funcalc::{eigh, frechet, functional_calculus, SmoothClip};
pub use metrics::{inner_tr, norm2, norm_alpha, opnorm, tau};

pub type CMat = DMatrix<Complex64>;

/// Entrywise tolerance for the Hermitian check.
pub const HERM_TOL: f64 = 1e-10;

pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()).unscale(2.0)
}

pub fn hermitian_deviation(a: &CMat) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn check_finite(a: &CMat) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("matrix entry".into()))
    }
}

/// An `m`-tuple of Hermitian `N×N` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct HermTuple {
    mats: Vec<CMat>,
}

impl HermTuple {
    /// Checks shapes and Hermitian symmetry, then stores the exactly Hermitian parts.
    pub fn new(mats: Vec<CMat>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::Shape("empty tuple".into()));
        };
        let n = first.nrows();
        for a in &mats {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::Shape(format!(
                    "expected {n}×{n}, found {}×{}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            check_finite(a)?;
            let dev = hermitian_deviation(a);
            if dev > HERM_TOL {
                return Err(Error::NotHermitian(dev));
            }
        }
        Ok(HermTuple { mats: mats.iter().map(hermitize).collect() })
    }

    /// Takes the Hermitian parts without checking.
    pub fn from_hermitized(mats: Vec<CMat>) -> Self {
        HermTuple { mats: mats.iter().map(hermitize).collect() }
    }

    pub(crate) fn from_raw(mats: Vec<CMat>) -> Self {
        HermTuple { mats }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        HermTuple { mats: vec![CMat::zeros(n, n); m] }
    }

    /// Real diagonal matrices.
    pub fn from_diagonals(diags: &[Vec<f64>]) -> Result<Self> {
        Self::new(
            diags
                .iter()
                .map(|d| CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                    d.len(),
                    d.iter().map(|&v| Complex64::from(v)),
                )))
                .collect(),
        )
    }

    /// `N = 1` tuples are points of `R^m`.
    pub fn from_reals(v: &[f64]) -> Self {
        HermTuple { mats: v.iter().map(|&x| CMat::from_element(1, 1, Complex64::from(x))).collect() }
    }

    pub fn to_reals(&self) -> Option<Vec<f64>> {
        (self.n() == 1).then(|| self.mats.iter().map(|a| a[(0, 0)].re).collect())
    }

    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn n(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    pub fn mat(&self, j: usize) -> &CMat {
        &self.mats[j]
    }

    pub fn into_mats(self) -> Vec<CMat> {
        self.mats
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.m() == other.m() && self.n() == other.n() {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "(m, N) = ({}, {}) vs ({}, {})",
                self.m(),
                self.n(),
                other.m(),
                other.n()
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        HermTuple { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermTuple { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        HermTuple { mats: self.mats.iter().map(|a| a * Complex64::from(s)).collect() }
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        let s = Complex64::from(s);
        HermTuple { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a + b * s).collect() }
    }

    /// `⟨x, y⟩₂ = Σ_j τ_N(x_j y_j)`.
    pub fn inner(&self, other: &Self) -> f64 {
        let n = self.n() as f64;
        self.mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum::<f64>())
            .sum::<f64>()
            / n
    }

    pub fn norm2(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Largest operator norm over the components.
    pub fn opnorm(&self) -> f64 {
        self.mats.iter().map(opnorm).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.mats.iter().all(|a| a.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// Simultaneous conjugation `u x_j u*`.
    pub fn conjugate_by(&self, u: &CMat) -> Self {
        HermTuple::from_hermitized(self.mats.iter().map(|a| u * a * u.adjoint()).collect())
    }
}

/// A Hermitian matrix with independent standard Gaussian coordinates in the trace basis,
/// scaled by `s`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, s: f64, rng: &mut R) -> CMat {
    let mut a = CMat::zeros(n, n);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..n {
        a[(k, k)] = Complex64::from(s * rng.sample::<f64, _>(StandardNormal));
        for l in k + 1..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(s * r * re, s * r * im);
            a[(k, l)] = z;
            a[(l, k)] = z.conj();
        }
    }
    a
}

pub fn random_tuple<R: Rng + ?Sized>(m: usize, n: usize, s: f64, rng: &mut R) -> HermTuple {
    HermTuple::from_raw((0..m).map(|_| random_hermitian(n, s, rng)).collect())
}

/// A Haar-ish random unitary from the QR factorization of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = qr.unpack();
    let phases = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 { d / d.norm() } else { Complex64::from(1.0) }
        }),
    ));
    q * phases
}
