use thiserror::Error;

/// Library-wide error type. Messages carry the witness data a caller needs
/// to reproduce the failure.
#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("collapsed algebra: {0}")]
    CollapsedAlgebra(String),
    #[error("radical method inapplicable: characteristic {p} too small for dimension {dim}")]
    RadicalInapplicable { p: u64, dim: usize },
    #[error("dimension/characteristic clash: {0}! is not invertible in the coefficient ring")]
    FactorialNotInvertible(u64),
    #[error("invalid idempotent trace: {0}")]
    InvalidIdempotentTrace(String),
    #[error("enlarge residue field: {0}")]
    EnlargeResidueField(String),
    #[error("partition not split over J: witness generator product {0} lies outside J")]
    PartitionNotSplit(String),
    #[error("mismatched ambient algebras")]
    MismatchedAmbient,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate pairing between blocks {0} and {1}")]
    DegeneratePairing(usize, usize),
    #[error("pinEnds infeasible: {0}")]
    PinEndsInfeasible(String),
    #[error("not almost tempered: {0}")]
    NotAlmostTempered(String),
    #[error("tuple budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
