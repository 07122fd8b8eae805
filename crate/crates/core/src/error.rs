use thiserror::Error;

use crate::model::Element;

#[derive(Debug, Error)]
pub enum Error {
    #[error("collection {collection} covers a different element set than collection 1")]
    FoundationMismatch { collection: usize },
    #[error("element {0} is not in the foundation")]
    UnknownElement(Element),
    #[error("mapping is not a bijection: {0}")]
    NotABijection(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("order {0} is not a multiple of 3")]
    NotMultipleOf3(usize),
    #[error("invalid Latin trade: {0}")]
    InvalidTriple(String),
    #[error("no three disjoint STS({0}): v must be 1 or 3 mod 6 and v != 7")]
    NotAdmissible(usize),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("foundation of size {size} exceeds the exact canonicalization cap {cap}")]
    FoundationTooLarge { size: usize, cap: usize },
    #[error("trade is not decomposable: {0}")]
    NotDecomposable(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
