//! Non-commutative polynomials in self-adjoint generators `X1..Xm`.
//!
//! Generator indices are zero-based in the API (`0` is `X1`); the text form is one-based.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{check_index, check_same_m, Error, Result};

pub type Coeff = Complex64;

/// Absolute tolerance used by the `approx_eq` family.
pub const COEFF_TOL: f64 = 1e-12;

/// A word `X_{i1} X_{i2} ... X_{in}`; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GenWord(Vec<u8>);

impl GenWord {
    pub fn empty() -> Self {
        GenWord(Vec::new())
    }

    /// Builds a word from zero-based letters.
    pub fn new(letters: impl Into<Vec<u8>>) -> Self {
        GenWord(letters.into())
    }

    pub fn letter(j: usize) -> Self {
        GenWord(vec![j as u8])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One more than the largest letter, or 0 for the empty word.
    pub fn min_generators(&self) -> usize {
        self.0.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        GenWord(v)
    }

    pub fn reversed(&self) -> GenWord {
        GenWord(self.0.iter().rev().copied().collect())
    }

    /// The rotation starting at position `k`.
    pub fn rotated(&self, k: usize) -> GenWord {
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        GenWord(v)
    }

    pub fn prefix(&self, k: usize) -> GenWord {
        GenWord(self.0[..k].to_vec())
    }

    pub fn suffix(&self, k: usize) -> GenWord {
        GenWord(self.0[k..].to_vec())
    }

    /// Positions at which letter `j` occurs.
    pub fn occurrences(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l as usize == j)
            .map(|(k, _)| k)
    }
}

impl Ord for GenWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for GenWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GenWord {
    /// `X1*X2^2`, or `1` for the empty word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "X{}", l as usize + 1)?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn add_coeff<K: Ord>(map: &mut BTreeMap<K, Coeff>, key: K, c: Coeff) {
    if c == Coeff::new(0.0, 0.0) {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = *e.get() + c;
            if v == Coeff::new(0.0, 0.0) {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

pub(crate) fn maps_approx_eq<K: Ord>(
    a: &BTreeMap<K, Coeff>,
    b: &BTreeMap<K, Coeff>,
    tol: f64,
) -> bool {
    let zero = Coeff::new(0.0, 0.0);
    a.iter()
        .all(|(k, c)| (c - b.get(k).unwrap_or(&zero)).norm() <= tol)
        && b.iter()
            .all(|(k, c)| (c - a.get(k).unwrap_or(&zero)).norm() <= tol)
}

pub(crate) fn fmt_coeff(c: Coeff) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("({}*i)", c.im)
    } else {
        let sign = if c.im < 0.0 { "-" } else { "+" };
        format!("({}{sign}{}*i)", c.re, c.im.abs())
    }
}

/// Writes `sum coeff*item`, with coefficients 1 and -1 elided.
pub(crate) fn fmt_sum<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (String, &'a Coeff)>,
{
    let mut any = false;
    for (item, &c) in terms {
        let unit = item == "1";
        if c.im == 0.0 {
            let (sign, mag) = if c.re < 0.0 { ("-", -c.re) } else { ("+", c.re) };
            if any {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            if unit {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{item}")?;
            } else {
                write!(f, "{mag}*{item}")?;
            }
        } else {
            if any {
                write!(f, " + ")?;
            }
            if unit {
                write!(f, "{}", fmt_coeff(c))?;
            } else {
                write!(f, "{}*{item}", fmt_coeff(c))?;
            }
        }
        any = true;
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

/// A finite linear combination of words.
#[derive(Clone, PartialEq, Debug)]
pub struct NCPoly {
    m: usize,
    terms: BTreeMap<GenWord, Coeff>,
}

impl NCPoly {
    pub fn zero(m: usize) -> Self {
        NCPoly { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: impl Into<Coeff>) -> Self {
        let mut p = Self::zero(m);
        add_coeff(&mut p.terms, GenWord::empty(), c.into());
        p
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, 1.0)
    }

    pub fn generator(m: usize, j: usize) -> Result<Self> {
        check_index(j, m)?;
        Ok(Self::monomial(m, GenWord::letter(j), 1.0)?)
    }

    pub fn monomial(m: usize, w: GenWord, c: impl Into<Coeff>) -> Result<Self> {
        if w.min_generators() > m {
            return Err(Error::GeneratorOutOfRange { index: w.min_generators() - 1, m });
        }
        let mut p = Self::zero(m);
        add_coeff(&mut p.terms, w, c.into());
        Ok(p)
    }

    pub fn from_terms<I>(m: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GenWord, Coeff)>,
    {
        let mut p = Self::zero(m);
        for (w, c) in terms {
            if w.min_generators() > m {
                return Err(Error::GeneratorOutOfRange { index: w.min_generators() - 1, m });
            }
            add_coeff(&mut p.terms, w, c);
        }
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<GenWord, Coeff> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GenWord, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &GenWord) -> Coeff {
        self.terms.get(w).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(GenWord::len).max().unwrap_or(0)
    }

    /// Same polynomial viewed in an algebra with `m_new >= m` generators.
    pub fn embed(&self, m_new: usize) -> Result<Self> {
        if m_new < self.m {
            return Err(Error::InvalidParameter(format!(
                "cannot embed m = {} into m = {m_new}",
                self.m
            )));
        }
        Ok(NCPoly { m: m_new, terms: self.terms.clone() })
    }

    pub fn scale(&self, c: impl Into<Coeff>) -> Self {
        let c = c.into();
        let mut p = Self::zero(self.m);
        for (w, &a) in &self.terms {
            add_coeff(&mut p.terms, w.clone(), a * c);
        }
        p
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_same_m(self.m, other.m)?;
        let mut p = self.clone();
        for (w, &c) in &other.terms {
            add_coeff(&mut p.terms, w.clone(), c);
        }
        Ok(p)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_same_m(self.m, other.m)?;
        let mut p = Self::zero(self.m);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                add_coeff(&mut p.terms, a.concat(b), ca * cb);
            }
        }
        Ok(p)
    }

    /// Reverses every word and conjugates coefficients.
    pub fn adjoint(&self) -> Self {
        let mut p = Self::zero(self.m);
        for (w, &c) in &self.terms {
            add_coeff(&mut p.terms, w.reversed(), c.conj());
        }
        p
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.m == other.m && maps_approx_eq(&self.terms, &other.terms, tol)
    }

    pub fn diff_quotient(&self, j: usize) -> Result<TensorPoly> {
        check_index(j, self.m)?;
        let mut out = TensorPoly::zero(self.m, 2);
        for (w, &c) in &self.terms {
            for k in w.occurrences(j) {
                add_coeff(&mut out.terms, vec![w.prefix(k), w.suffix(k + 1)], c);
            }
        }
        Ok(out)
    }

    pub fn cyclic_derivative(&self, j: usize) -> Result<Self> {
        check_index(j, self.m)?;
        let mut out = Self::zero(self.m);
        for (w, &c) in &self.terms {
            for (rot, n) in cyclic_derivative_word(w, j) {
                add_coeff(&mut out.terms, rot, c * n as f64);
            }
        }
        Ok(out)
    }
}

/// Terms of the cyclic derivative of a single word, merged by rotation.
pub(crate) fn cyclic_derivative_word(w: &GenWord, j: usize) -> BTreeMap<GenWord, usize> {
    let mut out = BTreeMap::new();
    for k in w.occurrences(j) {
        let mut v = Vec::with_capacity(w.len() - 1);
        v.extend_from_slice(&w.letters()[k + 1..]);
        v.extend_from_slice(&w.letters()[..k]);
        *out.entry(GenWord(v)).or_insert(0) += 1;
    }
    out
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(f, self.terms.iter().map(|(w, c)| (w.to_string(), c)))
    }
}

/// A linear combination of `arity`-fold tensors of words.
#[derive(Clone, PartialEq, Debug)]
pub struct TensorPoly {
    m: usize,
    arity: usize,
    terms: BTreeMap<Vec<GenWord>, Coeff>,
}

impl TensorPoly {
    pub fn zero(m: usize, arity: usize) -> Self {
        TensorPoly { m, arity, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(m: usize, arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<GenWord>, Coeff)>,
    {
        let mut t = Self::zero(m, arity);
        for (ws, c) in terms {
            if ws.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: ws.len() });
            }
            if let Some(w) = ws.iter().find(|w| w.min_generators() > m) {
                return Err(Error::GeneratorOutOfRange { index: w.min_generators() - 1, m });
            }
            add_coeff(&mut t.terms, ws, c);
        }
        Ok(t)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<GenWord>, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: impl Into<Coeff>) -> Self {
        let c = c.into();
        let mut t = Self::zero(self.m, self.arity);
        for (ws, &a) in &self.terms {
            add_coeff(&mut t.terms, ws.clone(), a * c);
        }
        t
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_same_m(self.m, other.m)?;
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        let mut t = self.clone();
        for (ws, &c) in &other.terms {
            add_coeff(&mut t.terms, ws.clone(), c);
        }
        Ok(t)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.m == other.m
            && self.arity == other.arity
            && maps_approx_eq(&self.terms, &other.terms, tol)
    }

    /// `(p ⊗ 1 ⊗ ... ⊗ 1) · T`: multiplies the first tensorand on the left.
    pub fn left_mul(&self, p: &NCPoly) -> Result<Self> {
        check_same_m(self.m, p.m)?;
        let mut t = Self::zero(self.m, self.arity);
        for (ws, &c) in &self.terms {
            for (w, &a) in &p.terms {
                let mut v = ws.clone();
                v[0] = w.concat(&ws[0]);
                add_coeff(&mut t.terms, v, a * c);
            }
        }
        Ok(t)
    }

    /// `T · (1 ⊗ ... ⊗ 1 ⊗ q)`: multiplies the last tensorand on the right.
    pub fn right_mul(&self, q: &NCPoly) -> Result<Self> {
        check_same_m(self.m, q.m)?;
        let last = self.arity - 1;
        let mut t = Self::zero(self.m, self.arity);
        for (ws, &c) in &self.terms {
            for (w, &a) in &q.terms {
                let mut v = ws.clone();
                v[last] = ws[last].concat(w);
                add_coeff(&mut t.terms, v, c * a);
            }
        }
        Ok(t)
    }

    /// Leibniz extension of the free difference quotient; raises the arity by one.
    pub fn diff_quotient(&self, j: usize) -> Result<Self> {
        check_index(j, self.m)?;
        let mut out = Self::zero(self.m, self.arity + 1);
        for (ws, &c) in &self.terms {
            for (slot, w) in ws.iter().enumerate() {
                for k in w.occurrences(j) {
                    let mut v = Vec::with_capacity(self.arity + 1);
                    v.extend_from_slice(&ws[..slot]);
                    v.push(w.prefix(k));
                    v.push(w.suffix(k + 1));
                    v.extend_from_slice(&ws[slot + 1..]);
                    add_coeff(&mut out.terms, v, c);
                }
            }
        }
        Ok(out)
    }

    /// `(a1 ⊗ a2) # b = a1 b a2`.
    pub fn hash(&self, b: &NCPoly) -> Result<NCPoly> {
        if self.arity != 2 {
            return Err(Error::ArityMismatch { expected: 2, found: self.arity });
        }
        check_same_m(self.m, b.m)?;
        let mut out = NCPoly::zero(self.m);
        for (ws, &c) in &self.terms {
            for (w, &a) in &b.terms {
                add_coeff(&mut out.terms, ws[0].concat(w).concat(&ws[1]), c * a);
            }
        }
        Ok(out)
    }

    /// Same tensor viewed with `m_new >= m` generators.
    pub fn embed(&self, m_new: usize) -> Result<Self> {
        if m_new < self.m {
            return Err(Error::InvalidParameter(format!(
                "cannot embed m = {} into m = {m_new}",
                self.m
            )));
        }
        Ok(TensorPoly { m: m_new, arity: self.arity, terms: self.terms.clone() })
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(
            f,
            self.terms.iter().map(|(ws, c)| {
                let s: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                (format!("({})", s.join(" ⊗ ")), c)
            }),
        )
    }
}
