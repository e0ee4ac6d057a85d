//! Exact decomposition of K_t<g>, g^(2^n) = a, into primitive idempotents,
//! for cyclotomic 2-power fields and finite fields of odd characteristic.

pub mod algebra;
pub mod builder;
pub mod classify;
pub mod error;
pub mod field;
pub mod oracle;
pub mod parse;
pub mod report;
pub mod selftest;

pub use error::{Error, Result};
