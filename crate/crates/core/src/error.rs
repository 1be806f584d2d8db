use thiserror::Error;

/// Errors raised by the kernels and experiments.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("enumeration of {requested} coordinates exceeds the cap of {cap}")]
    EnumerationCap { requested: usize, cap: usize },

    #[error("sum distribution exceeds the range cap ({0})")]
    RangeCap(String),

    #[error("factorization budget exhausted; partial factors {partial:?}, unfactored cofactor {cofactor}")]
    FactorizationBudget {
        partial: Vec<(num_bigint::BigUint, u32)>,
        cofactor: String,
    },

    #[error("divisor count of zero is undefined")]
    ZeroDivisorCount,

    #[error("matrix entry {0} is outside {{-1, 0, 1}}")]
    EntryOutOfRange(i64),
}

impl Error {
    /// Whether the error comes from an enumeration, DP, or factorization budget.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::EnumerationCap { .. } | Error::RangeCap(_) | Error::FactorizationBudget { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
