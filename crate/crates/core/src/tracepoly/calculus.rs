//! Gradient, Laplacians and the heat propagator on trace polynomials.

use crate::error::{check_index, Result};
use crate::ncpoly::{cyclic_derivative_word, Coeff, GenWord};

use super::{OperatorTracePoly, ScalarTracePoly, TraceMonomial};

/// Which Laplacian to use: the large-N limit `L`, or `L_N` with its `1/N²` cross terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplaceMode {
    Limit,
    Finite(usize),
}

impl LaplaceMode {
    fn cross_weight(self) -> Option<f64> {
        match self {
            LaplaceMode::Limit => None,
            LaplaceMode::Finite(n) => Some(1.0 / (n as f64 * n as f64)),
        }
    }
}

/// The triples `(a, b, c)` with `w = a X_j b X_j c`; the second difference quotient is twice
/// their sum.
fn double_splits(w: &GenWord, j: usize) -> Vec<(GenWord, GenWord, GenWord)> {
    let occ: Vec<usize> = w.occurrences(j).collect();
    let mut out = Vec::new();
    for (i, &k) in occ.iter().enumerate() {
        for &l in &occ[i + 1..] {
            out.push((
                w.prefix(k),
                GenWord::new(&w.letters()[k + 1..l]),
                w.suffix(l + 1),
            ));
        }
    }
    out
}

/// `L_j` (or `L_{N,j}`) of a single product of traces, accumulated into `out` with weight `c`.
fn laplacian_monomial(
    mono: &TraceMonomial,
    j: usize,
    mode: LaplaceMode,
    c: Coeff,
    out: &mut ScalarTracePoly,
) {
    let factors = mono.factors();
    for (k, n) in factors.iter().enumerate() {
        let splits = double_splits(n.word(), j);
        if splits.is_empty() {
            continue;
        }
        let rest = mono.without(&[k]);
        for (a, b, cc) in splits {
            out.add_term(rest.with_word(&a.concat(&cc)).with_word(&b), c * 2.0);
        }
    }
    if let Some(w) = mode.cross_weight() {
        let cyc: Vec<_> = factors.iter().map(|n| cyclic_derivative_word(n.word(), j)).collect();
        for k in 0..factors.len() {
            for l in 0..factors.len() {
                if k == l || cyc[k].is_empty() || cyc[l].is_empty() {
                    continue;
                }
                let rest = mono.without(&[k, l]);
                for (r1, &m1) in &cyc[k] {
                    for (r2, &m2) in &cyc[l] {
                        out.add_term(rest.with_word(&r1.concat(r2)), c * (w * (m1 * m2) as f64));
                    }
                }
            }
        }
    }
}

impl ScalarTracePoly {
    /// `D_j f`: the cyclic derivative applied to each trace factor in turn.
    pub fn grad(&self, j: usize) -> Result<OperatorTracePoly> {
        check_index(j, self.m)?;
        let mut out = OperatorTracePoly::zero(self.m);
        for (mono, &c) in self.iter() {
            for (k, n) in mono.factors().iter().enumerate() {
                let cyc = cyclic_derivative_word(n.word(), j);
                if cyc.is_empty() {
                    continue;
                }
                let rest = mono.without(&[k]);
                for (rot, mult) in cyc {
                    out.add_term(rot, rest.clone(), c * mult as f64);
                }
            }
        }
        Ok(out)
    }

    pub fn laplacian_j(&self, j: usize, mode: LaplaceMode) -> Result<ScalarTracePoly> {
        check_index(j, self.m)?;
        let mut out = ScalarTracePoly::zero(self.m);
        for (mono, &c) in self.iter() {
            laplacian_monomial(mono, j, mode, c, &mut out);
        }
        Ok(out)
    }

    /// `L = Σ_j L_j` or `L_N = Σ_j L_{N,j}`.
    pub fn laplacian(&self, mode: LaplaceMode) -> ScalarTracePoly {
        let mut out = ScalarTracePoly::zero(self.m);
        for j in 0..self.m {
            for (mono, &c) in self.iter() {
                laplacian_monomial(mono, j, mode, c, &mut out);
            }
        }
        out
    }

    /// `exp(tL/2) f` as a finite Taylor sum; the Laplacian lowers degree by two.
    pub fn heat_propagate(&self, t: f64, mode: LaplaceMode) -> ScalarTracePoly {
        let mut out = self.clone();
        let mut term = self.clone();
        let mut k = 0u32;
        loop {
            k += 1;
            term = term.laplacian(mode).scale(t / 2.0 / k as f64);
            if term.is_zero() {
                break;
            }
            out = out.try_add(&term).expect("same m");
        }
        out
    }
}

impl OperatorTracePoly {
    pub fn laplacian_j(&self, j: usize, mode: LaplaceMode) -> Result<OperatorTracePoly> {
        check_index(j, self.m)?;
        let mut out = OperatorTracePoly::zero(self.m);
        for ((q, mono), &c) in self.iter() {
            // η[𝒟_j² q] · F
            for (a, b, cc) in double_splits(q, j) {
                out.add_term(a.concat(&cc), mono.with_word(&b), c * 2.0);
            }
            // q · L_j F
            let mut lf = ScalarTracePoly::zero(self.m);
            laplacian_monomial(mono, j, mode, c, &mut lf);
            for (m2, &c2) in lf.iter() {
                out.add_term(q.clone(), m2.clone(), c2);
            }
            // (2/N²) 𝒟_j q # D_j F
            if let Some(w) = mode.cross_weight() {
                let splits: Vec<usize> = q.occurrences(j).collect();
                if splits.is_empty() {
                    continue;
                }
                for (l, n) in mono.factors().iter().enumerate() {
                    let cyc = cyclic_derivative_word(n.word(), j);
                    if cyc.is_empty() {
                        continue;
                    }
                    let rest = mono.without(&[l]);
                    for &k in &splits {
                        let (a, b) = (q.prefix(k), q.suffix(k + 1));
                        for (rot, &mult) in &cyc {
                            out.add_term(
                                a.concat(rot).concat(&b),
                                rest.clone(),
                                c * (2.0 * w * mult as f64),
                            );
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn laplacian(&self, mode: LaplaceMode) -> OperatorTracePoly {
        let mut out = OperatorTracePoly::zero(self.m);
        for j in 0..self.m {
            out = out.try_add(&self.laplacian_j(j, mode).expect("index in range")).expect("same m");
        }
        out
    }

    pub fn heat_propagate(&self, t: f64, mode: LaplaceMode) -> OperatorTracePoly {
        let mut out = self.clone();
        let mut term = self.clone();
        let mut k = 0u32;
        loop {
            k += 1;
            term = term.laplacian(mode).scale(t / 2.0 / k as f64);
            if term.is_zero() {
                break;
            }
            out = out.try_add(&term).expect("same m");
        }
        out
    }
}
