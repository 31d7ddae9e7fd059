use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("enumeration exceeds the configured size limit of {limit}")]
    CapExceeded { limit: usize },
    #[error("{0} is not a limit ordinal")]
    NotALimit(String),
    #[error("0 belongs to no fundamental sequence")]
    ZeroHasNoFundParents,
    #[error("bad order: {0} > {1}")]
    BadOrder(String, String),
    #[error("iteration cap of {0} steps exceeded")]
    IterationCapExceeded(usize),
    #[error("periodic segment mismatch while computing the degree word of {0}")]
    PeriodMismatch(String),
    #[error("vertex {0} is not interior")]
    NotInterior(usize),
    #[error("guided walk left the interior of the prefix at step {0}")]
    WalkLeftInterior(usize),
    #[error("graph carries no ordinal labels")]
    MetaMissing,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("{0} has no covering successor beyond its successor inside the ambient graph")]
    NoFundParentInBound(String),
    #[error("base graph is not rooted at ordinal 0")]
    BaseNotRooted,
    #[error("graph has {0} vertices, too many for second-order enumeration")]
    TooLarge(usize),
    #[error("free variable `{0}` in formula")]
    FreeVariable(String),
    #[error("formula denotes an infinite-word condition and cannot be evaluated on a finite graph")]
    InfiniteOnly,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
