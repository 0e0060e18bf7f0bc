//! Exact computer algebra for differential operators that commute with
//! Airy-type integral operators.

pub mod error;
pub mod linear;
pub mod airyring;
pub mod bispectral;
pub mod cli;
pub mod commute;
pub mod concomitant;
pub mod weylops;

pub use error::{Error, Result};
pub use weylops::{
    binom_shift_expand, commutator, parse_operator, substitute_airy, DiffOperator, DividedForm,
};
