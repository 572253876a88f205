use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// q ≡ 3 (mod 4), so d = (q+1)/2 is even and the family is empty.
    #[error("unsupported q = {q}: d = (q+1)/2 = {d} is even")]
    UnsupportedQ { q: u64, d: u64 },

    #[error("invalid index i = {i} for d = {d}: gcd(i(i+1), d) != 1")]
    InvalidIndex { i: i64, d: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("case not applicable: {0}")]
    CaseNotApplicable(String),

    #[error("not found: {0}")]
    NotFound(String),

    /// A computed quantity contradicted an identity that must hold; this
    /// always indicates an implementation bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
