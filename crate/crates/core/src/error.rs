use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("patterns live over different index universes")]
    UniverseMismatch,

    #[error("operands sit on different sides of the pairing")]
    SideMismatch,

    #[error("operands belong to different spaces")]
    SpaceMismatch,

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("operation needs a selfdual space")]
    RequiresSelfdual,

    #[error("operation needs a dual pair")]
    RequiresDualPair,

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("pairing restricted to X x Y is degenerate: {0}")]
    DegenerateRestriction(String),

    #[error("chain is not totally ordered by inclusion")]
    ChainNotTotallyOrdered,

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("flag is not semiclosed")]
    NonSemiclosed,

    #[error("Levi datum failed validation: {0}")]
    LeviValidation(String),

    #[error("not a Levi component")]
    NotLeviComponent,

    #[error("infinitely many parabolics (violating subset J = {witness:?})")]
    InfiniteFamily { witness: Vec<usize> },

    #[error("refinement is not unique: {0}")]
    NonUnique(String),

    #[error("invalid kind: {0}")]
    InvalidKind(String),

    #[error("cutoff {got} too small, need at least {needed}")]
    CutoffTooSmall { needed: u64, got: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
