//! Exact arithmetic: rationals, integer polynomials, finite-dimensional
//! number fields given by multiplication tables, and multivariate
//! polynomials over those fields.

mod field;
mod intpoly;
pub use intpoly::binomial as binomial_coeff;
pub mod linalg;
pub mod modp;
mod multipoly;
mod rational;
mod resultant;

pub use field::{FieldElement, NumberFieldSpec};
pub use intpoly::IntPoly;
pub use multipoly::{Monomial, MultiPoly};
pub use rational::{parse_rational, rational_to_string, Rational};
pub use resultant::{resultant_bivariate, trace_resultant, BiPoly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("malformed rational literal `{0}` (expected `p/q` or an integer)")]
    BadRational(String),
    #[error("malformed number field: {0}")]
    MalformedField(String),
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("malformed polynomial: {0}")]
    BadPolynomial(String),
}
