use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("form is not positive definite: {0:?}")]
    NotPositiveDefinite([[i64; 3]; 3]),

    #[error("matrix is not symmetric: {0:?}")]
    NotSymmetric([[i64; 3]; 3]),

    #[error("exception {0} is not one of 1, 2, 4, 5, 8")]
    InvalidException(u64),

    #[error("determinant {det} exceeds the enumeration ceiling {ceiling}")]
    CeilingExceeded { det: i64, ceiling: i64 },

    #[error("vector search exceeded {cap} candidates for norm {norm}")]
    SearchCap { norm: i64, cap: usize },

    #[error("bound {bound} exhausted: {context}")]
    BoundExhausted { bound: u64, context: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate rejected, condition {condition}: {detail}")]
    Certificate {
        condition: &'static str,
        detail: String,
    },

    #[error("data error: {0}")]
    Data(String),
}

impl Error {
    /// Resource exhaustion (caps, ceilings, bounds) as opposed to a bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::CeilingExceeded { .. } | Error::SearchCap { .. } | Error::BoundExhausted { .. }
        )
    }
}
