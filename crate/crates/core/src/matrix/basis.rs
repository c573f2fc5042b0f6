use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;

use super::CMat;

/// The trace-orthonormal basis of `N×N` Hermitian matrices: `E_kk`, then
/// `(E_kl + E_lk)/√2` for `k < l` row-major, then `i(E_kl − E_lk)/√2` in the same order.
#[derive(Clone, Debug)]
pub struct BasisSet {
    n: usize,
    elements: Vec<CMat>,
}

pub fn herm_basis(n: usize) -> BasisSet {
    let mut elements = Vec::with_capacity(n * n);
    for k in 0..n {
        let mut e = CMat::zeros(n, n);
        e[(k, k)] = Complex64::from(1.0);
        elements.push(e);
    }
    for (k, l) in off_diagonal(n) {
        let mut e = CMat::zeros(n, n);
        e[(k, l)] = Complex64::from(FRAC_1_SQRT_2);
        e[(l, k)] = Complex64::from(FRAC_1_SQRT_2);
        elements.push(e);
    }
    for (k, l) in off_diagonal(n) {
        let mut e = CMat::zeros(n, n);
        e[(k, l)] = Complex64::new(0.0, FRAC_1_SQRT_2);
        e[(l, k)] = Complex64::new(0.0, -FRAC_1_SQRT_2);
        elements.push(e);
    }
    BasisSet { n, elements }
}

fn off_diagonal(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |k| (k + 1..n).map(move |l| (k, l)))
}

impl BasisSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coordinates `Tr(a b)` of a Hermitian `a`, in basis order.
    pub fn coords(&self, a: &CMat) -> Vec<f64> {
        let n = self.n;
        let mut v = Vec::with_capacity(n * n);
        v.extend((0..n).map(|k| a[(k, k)].re));
        v.extend(off_diagonal(n).map(|(k, l)| SQRT_2 * a[(k, l)].re));
        v.extend(off_diagonal(n).map(|(k, l)| SQRT_2 * a[(k, l)].im));
        v
    }

    pub fn from_coords(&self, c: &[f64]) -> CMat {
        let n = self.n;
        let mut a = CMat::zeros(n, n);
        for k in 0..n {
            a[(k, k)] = Complex64::from(c[k]);
        }
        let off = n * (n - 1) / 2;
        for (i, (k, l)) in off_diagonal(n).enumerate() {
            let z = Complex64::new(c[n + i], c[n + off + i]) * FRAC_1_SQRT_2;
            a[(k, l)] = z;
            a[(l, k)] = z.conj();
        }
        a
    }
}
