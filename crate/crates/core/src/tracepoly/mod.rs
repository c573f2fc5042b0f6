//! Scalar- and operator-valued trace polynomials.
//!
//! A scalar trace polynomial is a combination of products `τ(p1)…τ(pk)` of traced words;
//! an operator trace polynomial additionally carries one untraced word in front.

mod calculus;
mod compose;
mod law;

use std::collections::BTreeMap;
use std::fmt;

pub use calculus::LaplaceMode;
pub use compose::compose;
pub use law::{
    evaluate_law, free_convolve_semicircular, Law, LawTable, MomentEntry, PointMassZero,
    SemicircularLaw,
};

use crate::error::{check_same_m, Error, Result};
use crate::ncpoly::{add_coeff, fmt_sum, maps_approx_eq, Coeff, GenWord, NCPoly, TensorPoly};

/// A word up to cyclic rotation, stored as its lexicographically least rotation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace(GenWord);

impl Necklace {
    pub fn new(w: &GenWord) -> Self {
        Necklace(canonical_rotation(w))
    }

    pub fn word(&self) -> &GenWord {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `τ(w)* = τ(w reversed)` for self-adjoint generators.
    pub fn adjoint(&self) -> Self {
        Necklace::new(&self.0.reversed())
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tr({})", self.0)
    }
}

fn canonical_rotation(w: &GenWord) -> GenWord {
    let letters = w.letters();
    let n = letters.len();
    let mut best = 0;
    for k in 1..n {
        let better = (0..n)
            .map(|i| letters[(k + i) % n].cmp(&letters[(best + i) % n]))
            .find(|o| o.is_ne())
            .is_some_and(|o| o.is_lt());
        if better {
            best = k;
        }
    }
    w.rotated(best)
}

/// A multiset of necklaces, read as the product of their traces. Never contains `τ(1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TraceMonomial(Vec<Necklace>);

impl TraceMonomial {
    pub fn one() -> Self {
        TraceMonomial(Vec::new())
    }

    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a GenWord>) -> Self {
        let mut v: Vec<Necklace> =
            words.into_iter().filter(|w| !w.is_empty()).map(Necklace::new).collect();
        v.sort();
        TraceMonomial(v)
    }

    pub fn factors(&self) -> &[Necklace] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(Necklace::len).sum()
    }

    pub fn mul(&self, other: &TraceMonomial) -> TraceMonomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort();
        TraceMonomial(v)
    }

    pub fn with_word(&self, w: &GenWord) -> TraceMonomial {
        if w.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.push(Necklace::new(w));
        v.sort();
        TraceMonomial(v)
    }

    /// The monomial with factors at the given positions removed.
    pub(crate) fn without(&self, skip: &[usize]) -> TraceMonomial {
        TraceMonomial(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| !skip.contains(i))
                .map(|(_, n)| n.clone())
                .collect(),
        )
    }

    pub fn adjoint(&self) -> TraceMonomial {
        let mut v: Vec<Necklace> = self.0.iter().map(Necklace::adjoint).collect();
        v.sort();
        TraceMonomial(v)
    }

    fn min_generators(&self) -> usize {
        self.0.iter().map(|n| n.0.min_generators()).max().unwrap_or(0)
    }
}

impl fmt::Display for TraceMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == self.0[i] {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "tr({})", self.0[i])?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for TraceMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of the scalar trace-polynomial algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarTracePoly {
    m: usize,
    terms: BTreeMap<TraceMonomial, Coeff>,
}

impl ScalarTracePoly {
    pub fn zero(m: usize) -> Self {
        ScalarTracePoly { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: impl Into<Coeff>) -> Self {
        let mut f = Self::zero(m);
        add_coeff(&mut f.terms, TraceMonomial::one(), c.into());
        f
    }

    /// `τ(w)`.
    pub fn trace_word(m: usize, w: &GenWord) -> Result<Self> {
        Self::from_terms(m, [(TraceMonomial::from_words([w]), Coeff::from(1.0))])
    }

    pub fn from_terms<I>(m: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TraceMonomial, Coeff)>,
    {
        let mut f = Self::zero(m);
        for (mono, c) in terms {
            if mono.min_generators() > m {
                return Err(Error::GeneratorOutOfRange { index: mono.min_generators() - 1, m });
            }
            add_coeff(&mut f.terms, mono, c);
        }
        Ok(f)
    }

    pub(crate) fn add_term(&mut self, mono: TraceMonomial, c: Coeff) {
        add_coeff(&mut self.terms, mono, c);
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<TraceMonomial, Coeff> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TraceMonomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &TraceMonomial) -> Coeff {
        self.terms.get(mono).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Additive total degree: the largest sum of word lengths over terms.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(TraceMonomial::degree).max().unwrap_or(0)
    }

    /// Every necklace appearing in some term.
    pub fn necklaces(&self) -> Vec<Necklace> {
        let mut v: Vec<Necklace> =
            self.terms.keys().flat_map(|m| m.factors().iter().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn scale(&self, c: impl Into<Coeff>) -> Self {
        let c = c.into();
        let mut f = Self::zero(self.m);
        for (mono, &a) in &self.terms {
            add_coeff(&mut f.terms, mono.clone(), a * c);
        }
        f
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_same_m(self.m, other.m)?;
        let mut f = self.clone();
        for (mono, &c) in &other.terms {
            add_coeff(&mut f.terms, mono.clone(), c);
        }
        Ok(f)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_same_m(self.m, other.m)?;
        let mut f = Self::zero(self.m);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                add_coeff(&mut f.terms, a.mul(b), ca * cb);
            }
        }
        Ok(f)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.m, 1.0);
        for _ in 0..k {
            out = out.try_mul(self).expect("same m");
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut f = Self::zero(self.m);
        for (mono, &c) in &self.terms {
            add_coeff(&mut f.terms, mono.adjoint(), c.conj());
        }
        f
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.m == other.m && maps_approx_eq(&self.terms, &other.terms, tol)
    }

    /// Largest absolute coefficient.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn embed(&self, m_new: usize) -> Result<Self> {
        if m_new < self.m {
            return Err(Error::InvalidParameter(format!(
                "cannot embed m = {} into m = {m_new}",
                self.m
            )));
        }
        Ok(ScalarTracePoly { m: m_new, terms: self.terms.clone() })
    }
}

impl fmt::Display for ScalarTracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(f, self.terms.iter().map(|(mono, c)| (mono.to_string(), c)))
    }
}

/// Maps each word to its necklace; linear.
pub fn trace_of(p: &NCPoly) -> ScalarTracePoly {
    let mut f = ScalarTracePoly::zero(p.m());
    for (w, &c) in p.iter() {
        add_coeff(&mut f.terms, TraceMonomial::from_words([w]), c);
    }
    f
}

/// An element of the operator trace-polynomial module: `Σ c · word · Π τ(...)`.
#[derive(Clone, PartialEq, Debug)]
pub struct OperatorTracePoly {
    m: usize,
    terms: BTreeMap<(GenWord, TraceMonomial), Coeff>,
}

impl OperatorTracePoly {
    pub fn zero(m: usize) -> Self {
        OperatorTracePoly { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: impl Into<Coeff>) -> Self {
        let mut f = Self::zero(m);
        add_coeff(&mut f.terms, (GenWord::empty(), TraceMonomial::one()), c.into());
        f
    }

    pub fn generator(m: usize, j: usize) -> Result<Self> {
        Ok(Self::from_ncpoly(&NCPoly::generator(m, j)?))
    }

    pub fn from_terms<I>(m: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((GenWord, TraceMonomial), Coeff)>,
    {
        let mut f = Self::zero(m);
        for ((w, mono), c) in terms {
            let need = w.min_generators().max(mono.min_generators());
            if need > m {
                return Err(Error::GeneratorOutOfRange { index: need - 1, m });
            }
            add_coeff(&mut f.terms, (w, mono), c);
        }
        Ok(f)
    }

    pub fn from_ncpoly(p: &NCPoly) -> Self {
        let mut f = Self::zero(p.m());
        for (w, &c) in p.iter() {
            add_coeff(&mut f.terms, (w.clone(), TraceMonomial::one()), c);
        }
        f
    }

    /// A scalar trace polynomial times the identity.
    pub fn from_scalar(s: &ScalarTracePoly) -> Self {
        let mut f = Self::zero(s.m);
        for (mono, &c) in &s.terms {
            add_coeff(&mut f.terms, (GenWord::empty(), mono.clone()), c);
        }
        f
    }

    pub(crate) fn add_term(&mut self, w: GenWord, mono: TraceMonomial, c: Coeff) {
        add_coeff(&mut self.terms, (w, mono), c);
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<(GenWord, TraceMonomial), Coeff> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(GenWord, TraceMonomial), &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|(w, mono)| w.len() + mono.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: impl Into<Coeff>) -> Self {
        let c = c.into();
        let mut f = Self::zero(self.m);
        for (k, &a) in &self.terms {
            add_coeff(&mut f.terms, k.clone(), a * c);
        }
        f
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_same_m(self.m, other.m)?;
        let mut f = self.clone();
        for (k, &c) in &other.terms {
            add_coeff(&mut f.terms, k.clone(), c);
        }
        Ok(f)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    /// Product in the algebra: words concatenate, trace factors commute.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_same_m(self.m, other.m)?;
        let mut f = Self::zero(self.m);
        for ((wa, ma), &ca) in &self.terms {
            for ((wb, mb), &cb) in &other.terms {
                add_coeff(&mut f.terms, (wa.concat(wb), ma.mul(mb)), ca * cb);
            }
        }
        Ok(f)
    }

    pub fn mul_scalar(&self, s: &ScalarTracePoly) -> Result<Self> {
        check_same_m(self.m, s.m)?;
        let mut f = Self::zero(self.m);
        for ((w, ma), &ca) in &self.terms {
            for (mb, &cb) in &s.terms {
                add_coeff(&mut f.terms, (w.clone(), ma.mul(mb)), ca * cb);
            }
        }
        Ok(f)
    }

    /// `τ(w · Π τ(...)) = τ(w) Π τ(...)`.
    pub fn trace(&self) -> ScalarTracePoly {
        let mut s = ScalarTracePoly::zero(self.m);
        for ((w, mono), &c) in &self.terms {
            add_coeff(&mut s.terms, mono.with_word(w), c);
        }
        s
    }

    pub fn adjoint(&self) -> Self {
        let mut f = Self::zero(self.m);
        for ((w, mono), &c) in &self.terms {
            add_coeff(&mut f.terms, (w.reversed(), mono.adjoint()), c.conj());
        }
        f
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.m == other.m && maps_approx_eq(&self.terms, &other.terms, tol)
    }

    pub fn embed(&self, m_new: usize) -> Result<Self> {
        if m_new < self.m {
            return Err(Error::InvalidParameter(format!(
                "cannot embed m = {} into m = {m_new}",
                self.m
            )));
        }
        Ok(OperatorTracePoly { m: m_new, terms: self.terms.clone() })
    }
}

impl fmt::Display for OperatorTracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(
            f,
            self.terms.iter().map(|((w, mono), c)| {
                let s = match (w.is_empty(), mono.is_one()) {
                    (true, _) => mono.to_string(),
                    (false, true) => w.to_string(),
                    (false, false) => format!("{w}*{mono}"),
                };
                (s, c)
            }),
        )
    }
}

/// `η(p1 ⊗ p2 ⊗ p3) = p1 p3 · τ(p2)`.
pub fn eta(t: &TensorPoly) -> Result<OperatorTracePoly> {
    if t.arity() != 3 {
        return Err(Error::ArityMismatch { expected: 3, found: t.arity() });
    }
    let mut f = OperatorTracePoly::zero(t.m());
    for (ws, &c) in t.terms() {
        add_coeff(
            &mut f.terms,
            (ws[0].concat(&ws[2]), TraceMonomial::from_words([&ws[1]])),
            c,
        );
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn w(letters: &[u8]) -> GenWord {
        GenWord::new(letters.iter().map(|l| l - 1).collect::<Vec<_>>())
    }

    #[test]
    fn canonical_rotation_is_least() {
        assert_eq!(Necklace::new(&w(&[2, 1, 1])).word(), &w(&[1, 1, 2]));
        assert_eq!(Necklace::new(&w(&[2, 1, 2, 1])).word(), &w(&[1, 2, 1, 2]));
        assert_eq!(Necklace::new(&w(&[3, 1, 2, 1, 1])).word(), &w(&[1, 1, 3, 1, 2]));
        assert_eq!(Necklace::new(&GenWord::empty()).word(), &GenWord::empty());
    }

    #[test]
    fn trace_of_examples() {
        let comm = NCPoly::from_terms(
            2,
            [(w(&[1, 2]), Coeff::from(1.0)), (w(&[2, 1]), Coeff::from(-1.0))],
        )
        .unwrap();
        assert!(trace_of(&comm).is_zero());
        let p = NCPoly::monomial(2, w(&[2, 1, 1]), 1.0).unwrap();
        assert_eq!(trace_of(&p).to_string(), "tr(X1^2*X2)");
        let p = NCPoly::monomial(1, w(&[1]), 3.0).unwrap();
        assert_eq!(trace_of(&p).to_string(), "3*tr(X1)");
    }

    #[test]
    fn trace_of_unit_is_constant() {
        let f = trace_of(&NCPoly::one(2));
        assert_eq!(f, ScalarTracePoly::constant(2, 1.0));
    }

    #[test]
    fn eta_examples() {
        let t = TensorPoly::from_terms(
            3,
            3,
            [(vec![GenWord::empty(), w(&[2]), w(&[3])], Coeff::from(1.0))],
        )
        .unwrap();
        assert_eq!(eta(&t).unwrap().to_string(), "X3*tr(X2)");
        let t = TensorPoly::from_terms(
            1,
            3,
            [(vec![GenWord::empty(), GenWord::empty(), GenWord::empty()], Coeff::from(1.0))],
        )
        .unwrap();
        assert_eq!(eta(&t).unwrap(), OperatorTracePoly::constant(1, 1.0));
        let t = TensorPoly::from_terms(
            3,
            3,
            [
                (vec![w(&[1]), w(&[2]), w(&[3])], Coeff::from(1.0)),
                (vec![w(&[3]), w(&[2]), w(&[1])], Coeff::from(1.0)),
            ],
        )
        .unwrap();
        assert_eq!(eta(&t).unwrap().to_string(), "X1*X3*tr(X2) + X3*X1*tr(X2)");
    }

    #[test]
    fn display_of_products() {
        let f = ScalarTracePoly::trace_word(2, &w(&[1]))
            .unwrap()
            .pow(2)
            .try_mul(&ScalarTracePoly::trace_word(2, &w(&[2, 2])).unwrap())
            .unwrap();
        assert_eq!(f.to_string(), "tr(X1)^2*tr(X2^2)");
    }

    #[test]
    fn adjoint_reverses_necklaces() {
        let f = ScalarTracePoly::trace_word(3, &w(&[1, 2, 3])).unwrap().scale(Coeff::new(0.0, 1.0));
        let g = ScalarTracePoly::trace_word(3, &w(&[3, 2, 1])).unwrap().scale(Coeff::new(0.0, -1.0));
        assert_eq!(f.adjoint(), g);
    }
}
