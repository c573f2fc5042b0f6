//! Central finite differences along the trace basis, as an independent check on the calculus.

use num_complex::Complex64;

use super::{herm_basis, CMat, HermTuple};

pub const FD_GRAD_STEP: f64 = 1e-5;
pub const FD_LAPLACE_STEP: f64 = 1e-4;

/// Raw (unnormalized) gradient `∇g` and Laplacian `Δg`. For complex-valued `g` the gradient
/// components are `∇Re g + i ∇Im g` and need not be Hermitian.
#[derive(Clone, Debug)]
pub struct FdResult {
    pub gradient: Vec<CMat>,
    pub laplacian: Complex64,
}

fn shifted(x: &HermTuple, j: usize, b: &CMat, h: f64) -> HermTuple {
    let mut mats = x.mats().to_vec();
    mats[j] += b * Complex64::from(h);
    HermTuple::from_raw(mats)
}

pub fn fd_gradient<G>(g: G, x: &HermTuple, h: f64) -> Vec<CMat>
where
    G: Fn(&HermTuple) -> Complex64,
{
    let basis = herm_basis(x.n());
    (0..x.m())
        .map(|j| {
            let mut grad = CMat::zeros(x.n(), x.n());
            for b in basis.elements() {
                let d = (g(&shifted(x, j, b, h)) - g(&shifted(x, j, b, -h))) / (2.0 * h);
                grad += b * d;
            }
            grad
        })
        .collect()
}

pub fn fd_laplacian<G>(g: G, x: &HermTuple, h: f64) -> Complex64
where
    G: Fn(&HermTuple) -> Complex64,
{
    let basis = herm_basis(x.n());
    let g0 = g(x);
    let mut sum = Complex64::from(0.0);
    for j in 0..x.m() {
        for b in basis.elements() {
            sum += g(&shifted(x, j, b, h)) - g0 * 2.0 + g(&shifted(x, j, b, -h));
        }
    }
    sum / (h * h)
}

/// Both differences with the default steps.
pub fn fd_oracle<G>(g: G, x: &HermTuple) -> FdResult
where
    G: Fn(&HermTuple) -> Complex64,
{
    FdResult {
        gradient: fd_gradient(&g, x, FD_GRAD_STEP),
        laplacian: fd_laplacian(&g, x, FD_LAPLACE_STEP),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random_tuple;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn squared_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_tuple(1, 2, 1.0, &mut rng);
        let r = fd_oracle(|y: &HermTuple| Complex64::from(y.inner(y)), &x);
        let want = x.mat(0) * Complex64::from(2.0 / 2.0);
        assert!((&r.gradient[0] - want).iter().all(|z| z.norm() < 1e-8));
        // Δ of (1/N)Tr(x²) is 2N
        assert!((r.laplacian - 4.0).norm() < 1e-5);
    }

    #[test]
    fn constant() {
        let x = HermTuple::zeros(2, 3);
        let r = fd_oracle(|_: &HermTuple| Complex64::from(7.0), &x);
        assert!(r.gradient.iter().all(|g| g.iter().all(|z| z.norm() == 0.0)));
        assert_eq!(r.laplacian, Complex64::from(0.0));
    }
}
