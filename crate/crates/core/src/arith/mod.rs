//! Exact arithmetic in one formal variable `t` over arbitrary-precision
//! rationals.
//!
//! Everything downstream (polytopes, traces, characters, Morse series) is
//! built on these three types, and nothing in the crate touches floating
//! point.

mod poly;
mod ratfun;
mod rational;

pub use poly::{exact_divide, poly_arith, Poly};
pub use ratfun::{ratfun_arith, series_expand, RationalFunction};
pub use rational::{binomial, format_rational, parse_rational, Rational};

use thiserror::Error;

/// Binary operation selector for [`poly_arith`] and [`ratfun_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{num} is not divisible by {den} (remainder {rem})")]
    NotDivisible { num: String, den: String, rem: String },
    #[error("series expansion requested at a pole: denominator {den} vanishes at t = 0")]
    PoleAtZero { den: String },
    #[error("division is not a polynomial operation; use exact_divide")]
    UnsupportedOp,
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}
