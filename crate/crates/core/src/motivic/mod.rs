//! Effective Grothendieck-ring model: classes, Hodge polynomials,
//! specializations, and the class-expression parser.

mod class;
mod hodge;
mod parse;

pub use class::{Monomial, MotivicClass, TermKey};
pub use hodge::HodgePolynomial;
pub use parse::{parse_class, parse_class_with_symbols};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MotivicError {
    #[error("class has negative L-exponents; divisibility by L is vacuous after localization")]
    NotEffective,
    #[error("symbol '{0}' missing from specialization table")]
    MissingSymbol(String),
    #[error("point-count specialization is not an integer; inputs are inconsistent")]
    NonIntegralPointCount,
    #[error("Hodge specialization does not clear its (uv)-denominators")]
    NonPolynomialHodge,
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
}
