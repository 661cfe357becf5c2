use alloc::string::String;

use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unsupported field size q = {0} (need a prime power ≤ 256)")]
    UnsupportedField(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is undefined at zero")]
    ZeroArgument(&'static str),
    #[error("modulus {0} is not a monic irreducible polynomial")]
    NotIrreducible(Poly),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("invalid Drinfeld module: {0}")]
    InvalidModule(&'static str),
    #[error("bad reduction at {0}")]
    BadReduction(Poly),
    #[error("inconsistent charpoly at {p}: {accepted} candidate units accepted")]
    InconsistentCharpoly { p: Poly, accepted: usize },
    #[error("consistency failure at {p}: {what}")]
    Consistency { p: Poly, what: &'static str },
    #[error("modulus {m} is not coprime to the prime {p}")]
    NotCoprime { m: Poly, p: Poly },
    #[error("degree table has no entry for {0}")]
    MissingDegreeEntry(Poly),
    #[error("constant-field table has no entry for {0}")]
    MissingConstantEntry(Poly),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input too large for exhaustive computation: {0}")]
    TooLarge(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
