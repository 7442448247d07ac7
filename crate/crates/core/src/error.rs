use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which side of a two-part split a range condition refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitSide {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

impl fmt::Display for SplitSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitSide::First => f.write_str("first"),
            SplitSide::Second => f.write_str("second"),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Lower => f.write_str("lower"),
            Bound::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("cyclic order must be positive")]
    ZeroOrder,

    #[error("weight {value} at position {index} exceeds r = {r}")]
    WeightOutOfRange { index: usize, value: u32, r: u32 },

    #[error("weight sum {sum} is not divisible by r = {r}")]
    NotDivisible { sum: u64, r: u32 },

    #[error("linearization is not in the hypersimplex Δ({}, {n})", d + 1)]
    NotInHypersimplex { d: u32, n: usize },

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("range condition violated on the {side} side: {bound} bound {limit} against sum {sum}")]
    RangeCondition {
        side: SplitSide,
        bound: Bound,
        sum: BigRational,
        limit: u32,
    },

    #[error("invalid index subset: {0}")]
    InvalidSubset(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("Riemann-Hurwitz value {0} is not a nonnegative integer genus")]
    InvalidGenus(String),

    #[error("genus additivity failed: g = {g}, g1 = {g1}, g2 = {g2}, s = {s}")]
    GenusAdditivity { g: i64, g1: i64, g2: i64, s: u32 },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("{0}")]
    Precondition(String),
}
