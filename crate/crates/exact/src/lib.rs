//! Exact arithmetic for the `weyl-forge` operator algebra.
//!
//! Rationals are arbitrary precision. Polynomials are sparse over a global
//! symbol table, and rational functions are kept reduced with a monic
//! denominator, so structural equality is mathematical equality.

pub mod gcd;
mod heuristic;
pub mod matrix;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod qlinalg;
pub mod ratfun;
pub mod rational;
pub mod symbol;

pub use gcd::{gcd, lcm};
pub use matrix::RFMatrix;
pub use monomial::Monomial;
pub use parse::{parse_expr, parse_poly, parse_ratfun, Parseable};
pub use poly::MultiPoly;
pub use qlinalg::{QMatrix, SparseRow};
pub use ratfun::RationalFunction;
pub use rational::{binomial, factorial, int, parse_rational, rat, Rational};
pub use symbol::Var;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole encountered at {0}")]
    Pole(String),
    #[error("unbound symbol while evaluating {0}")]
    Unbound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
