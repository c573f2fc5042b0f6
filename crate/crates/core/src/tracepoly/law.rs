//! Non-commutative laws as moment maps on necklaces.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ncpoly::Coeff;

use super::{LaplaceMode, Necklace, ScalarTracePoly};

/// Anything that assigns a moment `λ(w)` to a necklace.
pub trait Law {
    fn m(&self) -> usize;
    fn moment(&self, n: &Necklace) -> Result<Coeff>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentEntry {
    pub value: Coeff,
    pub stderr: Option<f64>,
    pub n_samples: Option<usize>,
}

impl MomentEntry {
    pub fn exact(value: Coeff) -> Self {
        MomentEntry { value, stderr: None, n_samples: None }
    }
}

/// A finite table of moments. The empty necklace always has moment 1.
#[derive(Clone, Debug, PartialEq)]
pub struct LawTable {
    m: usize,
    moments: BTreeMap<Necklace, MomentEntry>,
    radius: Option<f64>,
}

impl LawTable {
    pub fn new(m: usize) -> Self {
        LawTable { m, moments: BTreeMap::new(), radius: None }
    }

    /// Tabulates `law` on the given necklaces.
    pub fn from_law(law: &impl Law, necklaces: &[Necklace]) -> Result<Self> {
        let mut t = LawTable::new(law.m());
        for n in necklaces {
            t.insert(n.clone(), law.moment(n)?);
        }
        Ok(t)
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn insert(&mut self, n: Necklace, value: Coeff) {
        self.insert_entry(n, MomentEntry::exact(value));
    }

    pub fn insert_entry(&mut self, n: Necklace, entry: MomentEntry) {
        if !n.is_empty() {
            self.moments.insert(n, entry);
        }
    }

    pub fn get(&self, n: &Necklace) -> Option<MomentEntry> {
        if n.is_empty() {
            Some(MomentEntry { value: Coeff::from(1.0), stderr: Some(0.0), n_samples: None })
        } else {
            self.moments.get(n).copied()
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Necklace, &MomentEntry)> {
        self.moments.iter()
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }
}

impl Law for LawTable {
    fn m(&self) -> usize {
        self.m
    }

    fn moment(&self, n: &Necklace) -> Result<Coeff> {
        self.get(n)
            .map(|e| e.value)
            .ok_or_else(|| Error::MissingMoment(n.to_string()))
    }
}

/// The law of the zero tuple: every nonempty moment vanishes.
#[derive(Clone, Copy, Debug)]
pub struct PointMassZero {
    pub m: usize,
}

impl Law for PointMassZero {
    fn m(&self) -> usize {
        self.m
    }

    fn moment(&self, n: &Necklace) -> Result<Coeff> {
        Ok(if n.is_empty() { Coeff::from(1.0) } else { Coeff::from(0.0) })
    }
}

/// A free semicircular family of variance `t`, computed by propagating from the zero law.
#[derive(Clone, Copy, Debug)]
pub struct SemicircularLaw {
    pub m: usize,
    pub t: f64,
}

impl Law for SemicircularLaw {
    fn m(&self) -> usize {
        self.m
    }

    fn moment(&self, n: &Necklace) -> Result<Coeff> {
        let f = ScalarTracePoly::trace_word(self.m, n.word())?;
        free_convolve_semicircular(&PointMassZero { m: self.m }, self.t, &f)
    }
}

/// `λ(f)`: multiplicative over trace factors, linear over terms.
pub fn evaluate_law(f: &ScalarTracePoly, law: &impl Law) -> Result<Coeff> {
    let mut total = Coeff::from(0.0);
    for (mono, &c) in f.iter() {
        let mut prod = c;
        for n in mono.factors() {
            prod *= law.moment(n)?;
        }
        total += prod;
    }
    Ok(total)
}

/// `(λ ⊞ σ_t)(f) = λ(exp(tL/2) f)`.
pub fn free_convolve_semicircular(law: &impl Law, t: f64, f: &ScalarTracePoly) -> Result<Coeff> {
    evaluate_law(&f.heat_propagate(t, LaplaceMode::Limit), law)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::GenWord;
    use crate::tracepoly::TraceMonomial;

    fn nk(letters: &[u8]) -> Necklace {
        Necklace::new(&GenWord::new(letters.iter().map(|l| l - 1).collect::<Vec<_>>()))
    }

    #[test]
    fn product_of_moments() {
        let mut law = LawTable::new(3);
        law.insert(nk(&[1]), Coeff::from(0.5));
        law.insert(nk(&[2, 3]), Coeff::new(0.25, 1.0));
        law.insert(nk(&[2, 2]), Coeff::from(2.0));
        let f = ScalarTracePoly::from_terms(
            3,
            [
                (TraceMonomial::from_words([nk(&[1]).word(), nk(&[2, 3]).word()]), Coeff::from(1.0)),
                (TraceMonomial::from_words([nk(&[2, 2]).word()]), Coeff::from(1.0)),
            ],
        )
        .unwrap();
        let v = evaluate_law(&f, &law).unwrap();
        assert!((v - (Coeff::from(0.5) * Coeff::new(0.25, 1.0) + 2.0)).norm() < 1e-15);
    }

    #[test]
    fn missing_moment_is_named() {
        let law = LawTable::new(1);
        let f = ScalarTracePoly::trace_word(1, nk(&[1, 1]).word()).unwrap();
        match evaluate_law(&f, &law) {
            Err(Error::MissingMoment(s)) => assert_eq!(s, "X1^2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_evaluates_to_itself() {
        let f = ScalarTracePoly::constant(2, 1.0);
        assert_eq!(evaluate_law(&f, &LawTable::new(2)).unwrap(), Coeff::from(1.0));
    }

    #[test]
    fn semicircle_moments() {
        let t = 1.3;
        let f2 = ScalarTracePoly::trace_word(1, nk(&[1, 1]).word()).unwrap();
        let f4 = ScalarTracePoly::trace_word(1, nk(&[1, 1, 1, 1]).word()).unwrap();
        let zero = PointMassZero { m: 1 };
        assert!((free_convolve_semicircular(&zero, t, &f2).unwrap() - t).norm() < 1e-14);
        assert!((free_convolve_semicircular(&zero, t, &f4).unwrap() - 2.0 * t * t).norm() < 1e-13);
        // σ_s ⊞ σ_t = σ_{s+t}
        let s = 0.4;
        let table = LawTable::from_law(&SemicircularLaw { m: 1, t: s }, &[nk(&[1, 1])]).unwrap();
        assert!((free_convolve_semicircular(&table, t, &f2).unwrap() - (s + t)).norm() < 1e-14);
    }
}
