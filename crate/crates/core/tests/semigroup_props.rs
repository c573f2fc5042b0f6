use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freegibbs::matrix::random_tuple;
use freegibbs::semigroups::{
    apply_p, apply_q, heat_potential_oracle, p_handle, q_handle, trotter_r_grid, FnHandle, GridConfig, PRule,
    PotentialSpec, Provenance, Schedule,
};
use freegibbs::HermTuple;

fn real(x: &HermTuple) -> f64 {
    x.to_reals().expect("1×1")[0]
}

/// `(a/2)x² + b sin(kx)` at `N = 1`, semiconcave with constant `a + bk²`.
fn wavy(a: f64, b: f64, k: f64) -> FnHandle {
    FnHandle::new(
        move |x: &HermTuple| {
            let s = real(x);
            Ok(0.5 * a * s * s + b * (k * s).sin())
        },
        Some(move |x: &HermTuple| {
            let s = real(x);
            Ok(HermTuple::from_reals(&[a * s + b * k * (k * s).cos()]))
        }),
        Provenance::Composite("wavy".into()),
    )
    .with_semiconcavity(a + b * k * k)
}

fn convex_wavy() -> impl Strategy<Value = (f64, f64, f64)> {
    // a ≥ bk² keeps the function convex
    (0.5f64..3.0, 0.0f64..1.0, 0.2f64..1.5).prop_map(|(a, b, k)| (a, b.min(a / (k * k)), k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn q_of_isotropic_quadratic(seed in any::<u64>(), kappa in 0.0f64..4.0, t in 0.01f64..5.0, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_tuple(2, n, 1.0, &mut rng);
        let x = random_tuple(2, n, 1.0, &mut rng);
        let (p2, pp) = (p.clone(), p.clone());
        let u = FnHandle::new(
            move |y: &HermTuple| Ok(0.25 + p.inner(y) + 0.5 * kappa * y.inner(y)),
            Some(move |y: &HermTuple| Ok(p2.axpy(kappa, y))),
            Provenance::Composite("quadratic".into()),
        )
        .with_semiconcavity(kappa);
        let got = apply_q(&u, &x, t).unwrap().value;
        let w = x.axpy(-t, &pp);
        let want = 0.25 - 0.5 * t * pp.inner(&pp) + pp.inner(&x) + 0.5 * kappa / (1.0 + t * kappa) * w.inner(&w);
        prop_assert!((got - want).abs() <= 1e-10, "{got} vs {want}");
    }

    #[test]
    fn q_is_a_semigroup((a, b, k) in convex_wavy(), s in 0.05f64..1.5, t in 0.05f64..1.5, x in -3.0f64..3.0) {
        let u = wavy(a, b, k);
        let x = HermTuple::from_reals(&[x]);
        let once = apply_q(&u, &x, s + t).unwrap().value;
        let twice = apply_q(&q_handle(&u, s), &x, t).unwrap().value;
        prop_assert!((once - twice).abs() <= 1e-8);
    }

    #[test]
    fn q_contracts_gradients((a, b, k) in convex_wavy(), t in 0.05f64..3.0, x in -3.0f64..3.0) {
        let u = wavy(a, b, k);
        let c = a - b * k * k;
        let x = HermTuple::from_reals(&[x]);
        let dq = apply_q(&u, &x, t).unwrap().gradient.norm2();
        prop_assert!(dq <= u.grad(&x).unwrap().norm2() / (1.0 + c * t) + 1e-9);
    }

    #[test]
    fn heat_then_hopf_lax_is_below((a, b, k) in convex_wavy(), t in 0.05f64..2.0, x in -3.0f64..3.0) {
        let u = wavy(a, b, k);
        let rule = PRule::Quadrature { order: 40 };
        let x = HermTuple::from_reals(&[x]);
        let pq = apply_p(&q_handle(&u, t), &x, t, rule).unwrap().value;
        let qp = apply_q(&p_handle(&u, t, rule), &x, t).unwrap().value;
        prop_assert!(pq <= qp + 1e-9, "{pq} > {qp}");
    }
}

/// Both steps keep `(a/2)x² + b` quadratic: `Q_δ` sends `a ↦ a/(1 + aδ)`, `P_δ` adds `aδ/2`.
fn gaussian_iterate(t: f64, level: u32) -> (f64, f64) {
    let steps = (t * f64::from(1u32 << level)).round() as usize;
    let delta = t / steps as f64;
    let (mut a, mut b) = (1.0, 0.0);
    for _ in 0..steps {
        a /= 1.0 + a * delta;
        b += 0.5 * a * delta;
    }
    (a, b)
}

#[test]
fn gaussian_trotter_iterates_are_exact() {
    let v = PotentialSpec::quadratic(1, 1.0);
    for (t, level) in [(0.5, 3u32), (1.0, 5), (2.0, 2)] {
        let sol = trotter_r_grid(&v, &Schedule::new(t, level).unwrap(), &GridConfig::default()).unwrap();
        let (a, b) = gaussian_iterate(t, level);
        for x in [-2.0, 0.0, 0.7, 1.9] {
            let want = 0.5 * a * x * x + b;
            assert!((sol.value(x) - want).abs() <= 1e-6, "t {t} l {level} x {x}: {} vs {want}", sol.value(x));
            assert!((sol.grad(x) - a * x).abs() <= 1e-5);
        }
        // the iterates stay below the limit R_tV = x²/(2(1+t)) + ½log(1+t)
        let lim = heat_potential_oracle(&v, &HermTuple::from_reals(&[0.0]), t).unwrap().value;
        assert!((lim - 0.5 * (1.0 + t).ln()).abs() <= 1e-9);
        assert!(b <= lim);
    }
}

#[test]
fn constant_and_zero_time() {
    let u = FnHandle::constant(2.5);
    let x = HermTuple::from_reals(&[0.3]);
    assert_eq!(apply_q(&u, &x, 1.0).unwrap().value, 2.5);
    assert_eq!(apply_p(&u, &x, 1.0, PRule::Quadrature { order: 10 }).unwrap().value, 2.5);
    let w = wavy(1.0, 0.5, 1.0);
    assert_eq!(apply_q(&w, &x, 0.0).unwrap().value, w.value(&x).unwrap());
}
