use thiserror::Error;

use crate::exactcore::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("MALFORMED: {0}")]
    Malformed(String),
    #[error("HOST_MISMATCH: {0}")]
    HostMismatch(String),
    #[error("ARITY: expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("NOT_POINT_BASE: base dimension is {0}")]
    NotPointBase(usize),
    #[error("WRONG_BIDEGREE: {0}")]
    WrongBidegree(String),
    #[error("DEGREE_OUT_OF_RANGE: {0}")]
    DegreeOutOfRange(String),
    #[error("MODULE_INVARIANT: {0}")]
    ModuleInvariant(String),
    #[error("VALIDATION: {0}")]
    Validation(String),
    #[error("COCYCLE_FAIL: {0}")]
    CocycleFail(String),
    #[error("CONTEXT_MISMATCH")]
    ContextMismatch,
    #[error("SINGULAR: 1 + rho*H is not invertible")]
    Singular,
    #[error("NOT_IN_WEDGE_A: {0}")]
    NotInWedgeA(String),
    #[error("IDENTITY_FAIL: {0}")]
    IdentityFail(String),
    #[error("SYNTAX at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("UNKNOWN_IDENTIFIER: {0}")]
    UnknownIdentifier(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type Result<T> = std::result::Result<T, Error>;
