//! Random polynomials for property checks.

use rand::Rng;

use crate::ncpoly::{Coeff, GenWord, NCPoly};
use crate::tracepoly::{ScalarTracePoly, TraceMonomial};

pub fn random_word<R: Rng + ?Sized>(m: usize, len: usize, rng: &mut R) -> GenWord {
    GenWord::new((0..len).map(|_| rng.random_range(0..m) as u8).collect::<Vec<_>>())
}

fn random_coeff<R: Rng + ?Sized>(rng: &mut R, complex: bool) -> Coeff {
    let re = rng.random_range(-1.0..1.0);
    let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
    Coeff::new(re, im)
}

/// Up to `terms` words of length at most `max_deg`.
pub fn random_ncpoly<R: Rng + ?Sized>(m: usize, max_deg: usize, terms: usize, rng: &mut R) -> NCPoly {
    let items: Vec<_> = (0..terms)
        .map(|_| {
            let len = rng.random_range(0..=max_deg);
            (random_word(m, len, rng), random_coeff(rng, true))
        })
        .collect();
    NCPoly::from_terms(m, items).expect("letters below m")
}

/// Up to `terms` products of traces, each of total degree at most `max_deg`, with complex
/// coefficients.
pub fn random_trace_poly<R: Rng + ?Sized>(
    m: usize,
    max_deg: usize,
    terms: usize,
    rng: &mut R,
) -> ScalarTracePoly {
    let mut f = ScalarTracePoly::zero(m);
    for _ in 0..terms {
        let mut budget = rng.random_range(1..=max_deg);
        let mut words = Vec::new();
        while budget > 0 {
            let len = rng.random_range(1..=budget);
            words.push(random_word(m, len, rng));
            budget -= len;
            if rng.random_bool(0.3) {
                break;
            }
        }
        f.add_term(TraceMonomial::from_words(words.iter()), random_coeff(rng, true));
    }
    f
}

/// `(f + f*)/2`: real-valued on Hermitian tuples.
pub fn random_real_trace_poly<R: Rng + ?Sized>(
    m: usize,
    max_deg: usize,
    terms: usize,
    rng: &mut R,
) -> ScalarTracePoly {
    let f = random_trace_poly(m, max_deg, terms, rng);
    f.try_add(&f.adjoint()).expect("same m").scale(0.5)
}
