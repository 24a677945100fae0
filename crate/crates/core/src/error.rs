use thiserror::Error;

use crate::relation::Edge;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("invalid number {0:?}")]
    BadNumber(String),
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("formula exceeds the size limit of {limit} atoms")]
    SizeLimit { limit: usize },
}

impl FormulaError {
    pub fn code(&self) -> &'static str {
        match self {
            FormulaError::Syntax { .. } => "SYNTAX_ERROR",
            FormulaError::Type(_) => "TYPE_ERROR",
            FormulaError::BadNumber(_) => "BAD_NUMBER",
            FormulaError::Schema(_) => "SCHEMA_ERROR",
            FormulaError::SizeLimit { .. } => "SIZE_LIMIT",
        }
    }
}

/// Outcome of the finite-stratifiability test, also carried by the error
/// raised when a symbolic contraction is refused.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StratifiabilityReport {
    pub stratifiable: bool,
    pub failing_disjunct: Option<usize>,
    /// One entry per disjunct of the restricted preference formula:
    /// attribute name -> whether its path length is bounded.
    pub failing_reason: Vec<Vec<(String, bool)>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContractError {
    #[error("relation is not a strict partial order")]
    NotSpo { witness: Vec<Edge> },
    #[error("base contractor is not contained in the preference relation ({} edges outside)", .outside.len())]
    ConNotSubset { outside: Vec<Edge> },
    #[error("protected relation is not contained in the preference relation")]
    ProtectNotSubset { outside: Vec<Edge> },
    #[error("protection conflicts with the base contractor ({} edges)", .edges.len())]
    ProtectionConflict { edges: Vec<Edge> },
    #[error("protection conflicts with the base contractor at ({left}, {right})")]
    ProtectionConflictAt { left: String, right: String },
    #[error("protected relation does not imply the preference formula")]
    ProtectNotImplied,
    #[error("seed edge is not in the contractor")]
    SeedNotInContractor,
    #[error("candidate is not a full contractor")]
    NotFullContractor,
    #[error("relation has {edges} edges, oracle bound is {bound}")]
    OracleTooLarge { edges: usize, bound: usize },
    #[error("statement set mixes positive and negative statements")]
    MixedSignSet,
    #[error("base contractor is not finitely stratifiable")]
    NotFinitelyStratifiable(StratifiabilityReport),
    #[error("base contractor does not imply the preference formula")]
    ConNotImplied,
    #[error("transitive closure did not converge within {0} iterations")]
    IterationCap(usize),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

impl ContractError {
    pub fn code(&self) -> &'static str {
        match self {
            ContractError::NotSpo { .. } => "NOT_SPO",
            ContractError::ConNotSubset { .. } => "CON_NOT_SUBSET",
            ContractError::ProtectNotSubset { .. } => "PROTECT_NOT_SUBSET",
            ContractError::ProtectionConflict { .. } => "PROTECTION_CONFLICT",
            ContractError::ProtectionConflictAt { .. } => "PROTECTION_CONFLICT",
            ContractError::ProtectNotImplied => "PROTECT_NOT_SUBSET",
            ContractError::SeedNotInContractor => "SEED_NOT_IN_CONTRACTOR",
            ContractError::NotFullContractor => "NOT_FULL_CONTRACTOR",
            ContractError::OracleTooLarge { .. } => "ORACLE_TOO_LARGE",
            ContractError::MixedSignSet => "MIXED_SIGN_SET",
            ContractError::NotFinitelyStratifiable(_) => "NOT_FINITELY_STRATIFIABLE",
            ContractError::ConNotImplied => "CON_NOT_SUBSET",
            ContractError::IterationCap(_) => "ITERATION_CAP",
            ContractError::Formula(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("parse error at row {row}, column {column}: {msg}")]
    Parse { row: usize, column: usize, msg: String },
    #[error("duplicate key {0:?}")]
    DuplicateKey(String),
    #[error("attribute {0:?} is not ordered (domain C)")]
    SpecOnCAttribute(String),
    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),
    #[error("finite and formula relations cannot be combined")]
    MixedRepresentation,
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

impl DataError {
    pub fn code(&self) -> &'static str {
        match self {
            DataError::Parse { .. } => "PARSE_ERROR",
            DataError::DuplicateKey(_) => "DUPLICATE_KEY",
            DataError::SpecOnCAttribute(_) => "SPEC_ON_C_ATTRIBUTE",
            DataError::UnknownAttribute(_) => "UNKNOWN_ATTRIBUTE",
            DataError::MixedRepresentation => "MIXED_REPRESENTATION",
            DataError::Io(_) => "IO_ERROR",
            DataError::Contract(e) => e.code(),
            DataError::Formula(e) => e.code(),
        }
    }
}
