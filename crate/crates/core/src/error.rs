use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A brute-force enumeration would visit more candidates than allowed.
    #[error("enumeration of {size} candidates exceeds the cap of {cap}")]
    CapExceeded { size: BigUint, cap: u64 },

    /// A closed form disagreed with itself. Never expected to fire.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
