pub mod error;
pub mod ncpoly;
pub mod tracepoly;
pub mod matrix;
pub mod randpoly;
pub mod rng;
pub mod ensembles;
pub mod semigroups;
pub mod entropy;
pub mod expr;
pub mod config;
pub mod emit;
pub mod verify;

pub use error::{Error, Result};
pub use ncpoly::{Coeff, GenWord, NCPoly, TensorPoly};
pub use matrix::{CMat, HermTuple};
pub use tracepoly::{
    compose, eta, evaluate_law, free_convolve_semicircular, trace_of, LaplaceMode, Law, LawTable,
    Necklace, OperatorTracePoly, ScalarTracePoly, TraceMonomial,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/trace-polynomials.md")]
    mod trace_polynomials {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/semigroups.md")]
    mod semigroups {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
