use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::{eval_grad, eval_scalar, HermTuple};
use crate::tracepoly::ScalarTracePoly;

use super::PotentialSpec;

type ValueFn = dyn Fn(&HermTuple) -> Result<f64> + Send + Sync;
type GradFn = dyn Fn(&HermTuple) -> Result<HermTuple> + Send + Sync;

#[derive(Clone, Debug)]
pub enum Provenance {
    TracePolynomial(ScalarTracePoly),
    Potential(String),
    Composite(String),
}

/// A real test function `u` with optional gradient `Du`, Lipschitz constant and
/// semiconcavity bound `C` (so that `u − (C/2)‖x‖₂²` is concave).
#[derive(Clone)]
pub struct FnHandle {
    value: Arc<ValueFn>,
    grad: Option<Arc<GradFn>>,
    pub lipschitz: Option<f64>,
    pub semiconcavity: Option<f64>,
    pub provenance: Provenance,
}

impl fmt::Debug for FnHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnHandle")
            .field("has_grad", &self.grad.is_some())
            .field("lipschitz", &self.lipschitz)
            .field("semiconcavity", &self.semiconcavity)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl FnHandle {
    pub fn new<V, G>(value: V, grad: Option<G>, provenance: Provenance) -> Self
    where
        V: Fn(&HermTuple) -> Result<f64> + Send + Sync + 'static,
        G: Fn(&HermTuple) -> Result<HermTuple> + Send + Sync + 'static,
    {
        FnHandle {
            value: Arc::new(value),
            grad: grad.map(|g| Arc::new(g) as Arc<GradFn>),
            lipschitz: None,
            semiconcavity: None,
            provenance,
        }
    }

    /// `Re f`, with gradient `D Re f`.
    pub fn from_trace_poly(f: &ScalarTracePoly) -> Self {
        let re = f.try_add(&f.adjoint()).expect("same m").scale(0.5);
        let (rv, rg) = (re.clone(), re.clone());
        FnHandle::new(
            move |x: &HermTuple| Ok(eval_scalar(&rv, x)?.re),
            Some(move |x: &HermTuple| eval_grad(&rg, x)),
            Provenance::TracePolynomial(re),
        )
    }

    pub fn from_potential(v: &PotentialSpec) -> Self {
        let (a, b) = (v.clone(), v.clone());
        let mut h = FnHandle::new(
            move |x: &HermTuple| a.value(x),
            Some(move |x: &HermTuple| b.grad(x)),
            Provenance::Potential(v.to_string()),
        );
        h.semiconcavity = v.convexity().map(|c| c.big_c);
        h
    }

    pub fn constant(c: f64) -> Self {
        let mut h = FnHandle::new(
            move |_: &HermTuple| Ok(c),
            Some(|x: &HermTuple| Ok(HermTuple::zeros(x.m(), x.n()))),
            Provenance::Composite(format!("constant {c}")),
        );
        h.lipschitz = Some(0.0);
        h.semiconcavity = Some(0.0);
        h
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_semiconcavity(mut self, c: f64) -> Self {
        self.semiconcavity = Some(c);
        self
    }

    pub fn value(&self, x: &HermTuple) -> Result<f64> {
        (self.value)(x)
    }

    pub fn has_grad(&self) -> bool {
        self.grad.is_some()
    }

    pub fn grad(&self, x: &HermTuple) -> Result<HermTuple> {
        match &self.grad {
            Some(g) => g(x),
            None => Err(Error::InvalidParameter("function has no gradient".into())),
        }
    }
}

/// `x ↦ ⟨a, x⟩₂ + b`.
pub fn affine(a: HermTuple, b: f64) -> FnHandle {
    let a2 = a.clone();
    let lip = a.norm2();
    FnHandle::new(
        move |x: &HermTuple| Ok(a.inner(x) + b),
        Some(move |_: &HermTuple| Ok(a2.clone())),
        Provenance::Composite("affine".into()),
    )
    .with_lipschitz(lip)
    .with_semiconcavity(0.0)
}
