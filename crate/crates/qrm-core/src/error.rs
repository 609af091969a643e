use thiserror::Error;

use crate::oracle::Witness;

#[derive(Debug, Error)]
pub enum Error {
    #[error("hypercube dimensions do not match: {0} vs {1}")]
    DimensionMismatch(u32, u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid code: require 0 <= q <= r <= m, got m={m} q={q} r={r}")]
    InvalidCode { m: u32, q: u32, r: u32 },

    #[error("code has no logical qubits (q = r)")]
    NoLogicalQubits,

    #[error("subset of size {size} lies in no level band of QRM_{m}({q},{r})")]
    NoLevel { size: u32, m: u32, q: u32, r: u32 },

    #[error("operator does not preserve the code space")]
    NotPreserving(Box<Witness>),

    #[error("operation not supported in the X basis; use the duality substitution at the classification level")]
    XBasisNotSimulated,

    #[error("oracle infeasible: {0}")]
    OracleInfeasible(String),

    #[error("modulus mismatch: level {0} vs level {1}")]
    ModulusMismatch(u32, u32),
}

impl Error {
    /// True for malformed-input errors (CLI exit code 2), as opposed to
    /// domain errors (exit code 1).
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidArgument(_))
    }
}
