use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freegibbs::matrix::{eval_hash, eval_ncpoly, random_hermitian, random_tuple};
use freegibbs::randpoly::{random_ncpoly, random_word};
use freegibbs::{trace_of, GenWord, HermTuple, NCPoly, OperatorTracePoly, TensorPoly};

fn poly(seed: u64, m: usize) -> NCPoly {
    random_ncpoly(m, 4, 4, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn unit() -> Complex64 {
    Complex64::from(1.0)
}

/// Rotations of `w` that start right after each occurrence of `X_j`, summed.
fn rotation_sum(w: &GenWord, j: usize, m: usize) -> NCPoly {
    let letters = w.letters();
    let terms = (0..letters.len()).filter(|&k| letters[k] as usize == j).map(|k| {
        let mut v = letters[k + 1..].to_vec();
        v.extend_from_slice(&letters[..k]);
        (GenWord::new(v), unit())
    });
    NCPoly::from_terms(m, terms.collect::<Vec<_>>()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn difference_quotient_is_a_derivation(s1 in any::<u64>(), s2 in any::<u64>(), m in 1usize..=3, j in 0usize..3) {
        let j = j % m;
        let (p, q) = (poly(s1, m), poly(s2, m));
        let lhs = p.try_mul(&q).unwrap().diff_quotient(j).unwrap();
        let rhs = p.diff_quotient(j).unwrap().right_mul(&q).unwrap()
            .try_add(&q.diff_quotient(j).unwrap().left_mul(&p).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn adjoint_reverses_products(s1 in any::<u64>(), s2 in any::<u64>(), m in 1usize..=3) {
        let (p, q) = (poly(s1, m), poly(s2, m));
        let pq = p.try_mul(&q).unwrap();
        prop_assert!(pq.adjoint().approx_eq(&q.adjoint().try_mul(&p.adjoint()).unwrap(), 1e-12));
        prop_assert_eq!(p.adjoint().adjoint(), p);
    }

    #[test]
    fn cyclic_derivative_of_word_sums_rotations(seed in any::<u64>(), len in 0usize..7, m in 1usize..=3, j in 0usize..3) {
        let j = j % m;
        let w = random_word(m, len, &mut ChaCha8Rng::seed_from_u64(seed));
        let got = NCPoly::monomial(m, w.clone(), 1.0).unwrap().cyclic_derivative(j).unwrap();
        prop_assert_eq!(got, rotation_sum(&w, j, m));
    }

    #[test]
    fn cyclic_derivative_ignores_rotation(seed in any::<u64>(), len in 1usize..7, k in 0usize..7, m in 1usize..=3, j in 0usize..3) {
        let j = j % m;
        let w = random_word(m, len, &mut ChaCha8Rng::seed_from_u64(seed));
        let a = NCPoly::monomial(m, w.clone(), 1.0).unwrap().cyclic_derivative(j).unwrap();
        let b = NCPoly::monomial(m, w.rotated(k % len), 1.0).unwrap().cyclic_derivative(j).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn trace_gradient_is_cyclic_derivative(seed in any::<u64>(), m in 1usize..=3, j in 0usize..3) {
        let j = j % m;
        let p = poly(seed, m);
        let grad = trace_of(&p).grad(j).unwrap();
        prop_assert!(grad.approx_eq(&OperatorTracePoly::from_ncpoly(&p.cyclic_derivative(j).unwrap()), 1e-12));
    }

    #[test]
    fn hash_is_a_directional_derivative(seed in any::<u64>(), m in 1usize..=2, n in 1usize..=4, j in 0usize..2) {
        let j = j % m;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_ncpoly(m, 4, 3, &mut rng);
        let x = random_tuple(m, n, 0.7, &mut rng);
        let b = random_hermitian(n, 0.7, &mut rng);
        let h = 1e-5;
        let shifted = |s: f64| {
            let mut mats = x.mats().to_vec();
            mats[j] += &b * Complex64::from(s);
            eval_ncpoly(&p, &HermTuple::from_hermitized(mats)).unwrap()
        };
        let fd = (shifted(h) - shifted(-h)) / Complex64::from(2.0 * h);
        let sym = eval_hash(&p.diff_quotient(j).unwrap(), &x, &b).unwrap();
        prop_assert!((&fd - &sym).norm() <= 1e-6 * sym.norm().max(1.0), "{}", (&fd - &sym).norm());
    }
}

#[test]
fn small_golden_derivatives() {
    let x1 = NCPoly::generator(2, 0).unwrap();
    let x2 = NCPoly::generator(2, 1).unwrap();
    // 𝒟₁(X₁X₂X₁) = 1 ⊗ X₂X₁ + X₁X₂ ⊗ 1
    let p = x1.try_mul(&x2).unwrap().try_mul(&x1).unwrap();
    let want = TensorPoly::from_terms(
        2,
        2,
        [
            (vec![GenWord::empty(), GenWord::new(vec![1, 0])], unit()),
            (vec![GenWord::new(vec![0, 1]), GenWord::empty()], unit()),
        ],
    )
    .unwrap();
    assert_eq!(p.diff_quotient(0).unwrap(), want);
    // 𝒟°₁(X₁³) = 3X₁²
    let cube = NCPoly::monomial(1, GenWord::new(vec![0, 0, 0]), 1.0).unwrap();
    assert_eq!(cube.cyclic_derivative(0).unwrap(), NCPoly::monomial(1, GenWord::new(vec![0, 0]), 3.0).unwrap());
    // constants have no derivative
    assert!(NCPoly::constant(2, 4.0).diff_quotient(1).unwrap().is_zero());
    let _ = x2;
}
