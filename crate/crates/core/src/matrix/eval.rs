//! Evaluation of polynomials and trace polynomials on matrix tuples.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{check_same_m, Error, Result};
use crate::ncpoly::{GenWord, NCPoly, TensorPoly};
use crate::tracepoly::{Necklace, OperatorTracePoly, ScalarTracePoly, TraceMonomial};

use super::{hermitize, tau, CMat, HermTuple};

/// Memoizes word products and normalized traces at a fixed point `x`.
pub struct Evaluator<'a> {
    x: &'a HermTuple,
    words: HashMap<GenWord, CMat>,
    traces: HashMap<Necklace, Complex64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(x: &'a HermTuple) -> Self {
        Evaluator { x, words: HashMap::new(), traces: HashMap::new() }
    }

    pub fn word(&mut self, w: &GenWord) -> CMat {
        if w.is_empty() {
            return CMat::identity(self.x.n(), self.x.n());
        }
        if let Some(a) = self.words.get(w) {
            return a.clone();
        }
        let head = w.prefix(w.len() - 1);
        let last = w.letters()[w.len() - 1] as usize;
        let a = if head.is_empty() {
            self.x.mat(last).clone()
        } else {
            self.word(&head) * self.x.mat(last)
        };
        self.words.insert(w.clone(), a.clone());
        a
    }

    pub fn trace(&mut self, n: &Necklace) -> Complex64 {
        if n.is_empty() {
            return Complex64::from(1.0);
        }
        if let Some(&v) = self.traces.get(n) {
            return v;
        }
        let v = tau(&self.word(n.word()));
        self.traces.insert(n.clone(), v);
        v
    }

    pub fn monomial(&mut self, mono: &TraceMonomial) -> Complex64 {
        mono.factors().iter().map(|n| self.trace(n)).product()
    }

    pub fn scalar(&mut self, f: &ScalarTracePoly) -> Result<Complex64> {
        check_same_m(f.m(), self.x.m())?;
        Ok(f.iter().map(|(mono, &c)| c * self.monomial(mono)).sum())
    }

    pub fn operator(&mut self, f: &OperatorTracePoly) -> Result<CMat> {
        check_same_m(f.m(), self.x.m())?;
        let n = self.x.n();
        let mut out = CMat::zeros(n, n);
        for ((w, mono), &c) in f.iter() {
            let s = c * self.monomial(mono);
            out += self.word(w) * s;
        }
        Ok(out)
    }

    pub fn ncpoly(&mut self, p: &NCPoly) -> Result<CMat> {
        check_same_m(p.m(), self.x.m())?;
        let n = self.x.n();
        let mut out = CMat::zeros(n, n);
        for (w, &c) in p.iter() {
            out += self.word(w) * c;
        }
        Ok(out)
    }
}

pub fn eval_word(w: &GenWord, x: &HermTuple) -> CMat {
    Evaluator::new(x).word(w)
}

pub fn eval_ncpoly(p: &NCPoly, x: &HermTuple) -> Result<CMat> {
    Evaluator::new(x).ncpoly(p)
}

pub fn eval_scalar(f: &ScalarTracePoly, x: &HermTuple) -> Result<Complex64> {
    Evaluator::new(x).scalar(f)
}

pub fn eval_operator(f: &OperatorTracePoly, x: &HermTuple) -> Result<CMat> {
    Evaluator::new(x).operator(f)
}

/// `Σ c · a(x) y b(x)` for `T = Σ c · a ⊗ b`.
pub fn eval_hash(t: &TensorPoly, x: &HermTuple, y: &CMat) -> Result<CMat> {
    if t.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, found: t.arity() });
    }
    check_same_m(t.m(), x.m())?;
    let mut ev = Evaluator::new(x);
    let n = x.n();
    let mut out = CMat::zeros(n, n);
    for (ws, &c) in t.terms() {
        out += ev.word(&ws[0]) * y * ev.word(&ws[1]) * c;
    }
    Ok(out)
}

/// The normalized gradient `Df(x) = N ∇f(x)` of a real-valued trace polynomial.
pub fn eval_grad(f: &ScalarTracePoly, x: &HermTuple) -> Result<HermTuple> {
    let tol = 1e-12 * f.max_coeff().max(1.0);
    if !f.is_self_adjoint(tol) {
        return Err(Error::NotSelfAdjoint);
    }
    let mut ev = Evaluator::new(x);
    let mut mats = Vec::with_capacity(f.m());
    for j in 0..f.m() {
        mats.push(hermitize(&ev.operator(&f.grad(j)?)?));
    }
    Ok(HermTuple::from_raw(mats))
}
