use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order matrix is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("elements {0} and {1} have no {2}")]
    NotLattice(usize, usize, &'static str),
    #[error("lattice is not distributive at ({0}, {1}, {2})")]
    NotDistributive(usize, usize, usize),
    #[error("size {size} exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("malformed table: {0}")]
    BadTable(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("variable `{0}` is not assigned")]
    Unassigned(String),
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("syntax error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("search refused: {0}")]
    Budget(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
