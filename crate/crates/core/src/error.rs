use thiserror::Error;

/// Errors raised by the fitting engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("fact {fact} does not match the schema: {reason}")]
    IllTyped { fact: String, reason: String },

    #[error("distinguished value {0} does not occur in any fact, so the query is not well defined")]
    WellDefinedness(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),

    #[error("query has no finite frontier: its core is not c-acyclic")]
    FrontierNotExists,

    #[error("instance is not c-acyclic")]
    NotCAcyclic,

    #[error("size cap {0} is too small for the requested construction")]
    CapTooSmall(usize),

    #[error("schema has a relation of arity {0}; only unary and binary relations are allowed")]
    NonBinarySchema(usize),

    #[error("not a tree query: {0}")]
    NotATree(String),

    #[error("invalid document: {0}")]
    Document(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
