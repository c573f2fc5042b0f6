//! Potentials `V(x) = (c₀/2)‖x‖₂² + Re f(Φ(x))` with `Φ` an optional spectral clip.

use std::fmt;

use num_complex::Complex64;

use crate::ensembles::GibbsTarget;
use crate::error::{Error, Result};
use crate::matrix::{eval_scalar, frechet, functional_calculus, hermitize, Evaluator, HermTuple, SmoothClip};
use crate::ncpoly::GenWord;
use crate::tracepoly::{OperatorTracePoly, ScalarTracePoly, TraceMonomial};

/// Declared convexity class `𝓔(c, C)`: `V − (c/2)‖x‖²` convex and `V − (C/2)‖x‖²` concave.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convexity {
    pub c: f64,
    pub big_c: f64,
}

#[derive(Clone, Debug)]
pub struct PotentialSpec {
    m: usize,
    quad: f64,
    perturbation: ScalarTracePoly,
    grads: Vec<OperatorTracePoly>,
    cutoff: Option<SmoothClip>,
    convexity: Option<Convexity>,
}

impl PotentialSpec {
    /// The perturbation must be real-valued on Hermitian tuples.
    pub fn new(
        quad: f64,
        perturbation: ScalarTracePoly,
        cutoff: Option<SmoothClip>,
        convexity: Option<Convexity>,
    ) -> Result<Self> {
        let tol = 1e-12 * perturbation.max_coeff().max(1.0);
        if !perturbation.is_self_adjoint(tol) {
            return Err(Error::NotSelfAdjoint);
        }
        if let Some(cv) = convexity {
            if !(cv.c <= cv.big_c) || cv.c < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "convexity bounds need 0 ≤ c ≤ C, got c = {}, C = {}",
                    cv.c, cv.big_c
                )));
            }
        }
        let m = perturbation.m();
        let grads = (0..m).map(|j| perturbation.grad(j)).collect::<Result<_>>()?;
        Ok(PotentialSpec { m, quad, perturbation, grads, cutoff, convexity })
    }

    /// `(c/2)‖x‖₂²`.
    pub fn quadratic(m: usize, c: f64) -> Self {
        PotentialSpec::new(
            c,
            ScalarTracePoly::zero(m),
            None,
            Some(Convexity { c, big_c: c }),
        )
        .expect("zero perturbation is self-adjoint")
    }

    /// `½‖x‖₂² + g τ(X1⁴)`, declared in `𝓔(1, C_eff)` with an effective upper bound `C_eff`
    /// valid on the bulk of the spectrum.
    pub fn quartic(m: usize, g: f64, c_eff: f64) -> Self {
        let w = GenWord::new(vec![0u8; 4]);
        let f = ScalarTracePoly::from_terms(m, [(TraceMonomial::from_words([&w]), Complex64::from(g))])
            .expect("m ≥ 1");
        PotentialSpec::new(1.0, f, None, Some(Convexity { c: 1.0, big_c: c_eff }))
            .expect("real coefficients")
    }

    /// Splits a uniform `(c/2)Σ_j τ(X_j²)` off `f` into the quadratic part, which is never clipped.
    pub fn from_trace_poly(
        f: ScalarTracePoly,
        cutoff: Option<SmoothClip>,
        convexity: Option<Convexity>,
    ) -> Result<Self> {
        let m = f.m();
        let squares: Vec<TraceMonomial> =
            (0..m).map(|j| TraceMonomial::from_words([&GenWord::new(vec![j as u8; 2])])).collect();
        let c0 = f.coeff(&squares[0]);
        let uniform = c0.im == 0.0 && squares.iter().all(|s| f.coeff(s) == c0);
        if !uniform || c0.re == 0.0 {
            return PotentialSpec::new(0.0, f, cutoff, convexity);
        }
        let quad_part = ScalarTracePoly::from_terms(m, squares.into_iter().map(|s| (s, c0)))?;
        PotentialSpec::new(2.0 * c0.re, f.try_sub(&quad_part)?, cutoff, convexity)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn quad_coeff(&self) -> f64 {
        self.quad
    }

    pub fn perturbation(&self) -> &ScalarTracePoly {
        &self.perturbation
    }

    pub fn cutoff(&self) -> Option<SmoothClip> {
        self.cutoff
    }

    pub fn convexity(&self) -> Option<Convexity> {
        self.convexity
    }

    pub fn with_convexity(mut self, c: f64, big_c: f64) -> Self {
        self.convexity = Some(Convexity { c, big_c });
        self
    }

    /// `C`, or an error if no bounds were declared.
    pub fn upper_convexity(&self) -> Result<f64> {
        self.convexity
            .map(|cv| cv.big_c)
            .ok_or_else(|| Error::InvalidParameter("potential has no declared convexity bounds".into()))
    }

    pub fn lower_convexity(&self) -> Result<f64> {
        self.convexity
            .map(|cv| cv.c)
            .ok_or_else(|| Error::InvalidParameter("potential has no declared convexity bounds".into()))
    }

    fn clipped(&self, x: &HermTuple) -> Result<HermTuple> {
        match self.cutoff {
            None => Ok(x.clone()),
            Some(psi) => Ok(HermTuple::from_hermitized(
                x.mats()
                    .iter()
                    .map(|a| functional_calculus(|t| psi.value(t), a))
                    .collect::<Result<_>>()?,
            )),
        }
    }

    pub fn value(&self, x: &HermTuple) -> Result<f64> {
        let y = self.clipped(x)?;
        let f = eval_scalar(&self.perturbation, &y)?.re;
        Ok(0.5 * self.quad * x.inner(x) + f)
    }

    /// `DV(x) = c₀x + (dΦ)*(Df(Φ(x)))`.
    pub fn grad(&self, x: &HermTuple) -> Result<HermTuple> {
        let y = self.clipped(x)?;
        let mut ev = Evaluator::new(&y);
        let mut mats = Vec::with_capacity(self.m);
        for (j, g) in self.grads.iter().enumerate() {
            let mut d = hermitize(&ev.operator(g)?);
            if let Some(psi) = self.cutoff {
                d = frechet(|t| psi.value(t), |t| psi.deriv(t), x.mat(j), &d)?;
            }
            mats.push(d + x.mat(j) * Complex64::from(self.quad));
        }
        Ok(HermTuple::from_hermitized(mats))
    }

    /// For `m = 1`, no cutoff and a perturbation that is a sum of single traces `Σ a_k τ(X^k)`,
    /// the scalar profile `v` with `N² V(x) = N Σ v(λ_i)`, as power coefficients.
    pub fn one_matrix_profile(&self) -> Option<Vec<f64>> {
        if self.m != 1 || self.cutoff.is_some() {
            return None;
        }
        let mut coeffs = vec![0.0; 3];
        coeffs[2] += 0.5 * self.quad;
        for (mono, c) in self.perturbation.iter() {
            if c.im != 0.0 {
                return None;
            }
            match mono.factors() {
                [] => coeffs[0] += c.re,
                [n] => {
                    let k = n.len();
                    if coeffs.len() <= k {
                        coeffs.resize(k + 1, 0.0);
                    }
                    coeffs[k] += c.re;
                }
                _ => return None,
            }
        }
        Some(coeffs)
    }
}

impl GibbsTarget for PotentialSpec {
    fn m(&self) -> usize {
        self.m
    }

    fn value(&self, x: &HermTuple) -> Result<f64> {
        PotentialSpec::value(self, x)
    }

    fn grad(&self, x: &HermTuple) -> Result<HermTuple> {
        PotentialSpec::grad(self, x)
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut quad = String::new();
        if self.quad != 0.0 {
            let terms: Vec<String> = (1..=self.m).map(|j| format!("tr(X{j}^2)")).collect();
            quad = format!("{}*({})", self.quad / 2.0, terms.join(" + "));
        }
        let pert = if self.perturbation.is_zero() { String::new() } else { self.perturbation.to_string() };
        let body = match (quad.is_empty(), pert.is_empty()) {
            (true, true) => "0".to_string(),
            (false, true) => quad,
            (true, false) => pert,
            (false, false) => format!("{quad} + {pert}"),
        };
        match self.cutoff {
            Some(c) => write!(f, "{body} [clip R={}]", c.radius),
            None => write!(f, "{body}"),
        }
    }
}

/// Evaluates `p(λ) = Σ_k a_k λ^k`.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}
