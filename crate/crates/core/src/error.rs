use thiserror::Error;

/// Why a candidate block set was rejected as a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternFault {
    Overlap,
    MeasureDeficit,
    NonHierarchical,
    WrongDimension,
    Empty,
}

impl std::fmt::Display for PatternFault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PatternFault::Overlap => "blocks overlap",
            PatternFault::MeasureDeficit => "blocks do not cover the cube",
            PatternFault::NonHierarchical => "partition is not obtained by iterated halving",
            PatternFault::WrongDimension => "block dimension differs from pattern dimension",
            PatternFault::Empty => "no blocks",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dyadic level {level} exceeds the configured maximum {max}")]
    OverflowLevel { level: u32, max: u8 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("block is not contained in the enclosing block")]
    InvalidAddress,
    #[error("invalid pattern: {0}")]
    InvalidPattern(PatternFault),
    #[error("pairing is not a bijection between the two patterns")]
    NotBijective,
    #[error("malformed canonical encoding: {0}")]
    DecodeError(String),
    #[error("parse error at position {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
    #[error("element is not positive")]
    NotPositive,
    #[error("decomposition failed its verification: {0}")]
    UnverifiedDecomposition(String),
    #[error("relation table verification failed: {0}")]
    RelationTableFailure(String),
    #[error("bound violated by {key}: {what}")]
    BoundViolation { key: String, what: String },
    #[error("ball exceeds the element budget of {budget}")]
    BallTooLarge { budget: usize },
    #[error("partition rendering needs dimension at most 2, got {0}")]
    UnsupportedDimension(usize),
    #[error("invalid generator symbol {symbol} in dimension {dim}")]
    InvalidSymbol { symbol: String, dim: usize },
    #[error("enumeration of {0} leaves is beyond the resource guard")]
    TooLarge(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
