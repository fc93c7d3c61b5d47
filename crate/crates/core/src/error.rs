use thiserror::Error;

/// Errors shared across the crate.
///
/// Preconditions are checked up front; operations never return partial
/// results after a violation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("set must be nonempty")]
    EmptySet,
    #[error("zero element present where 0 is excluded")]
    ZeroElement,
    #[error("ratio denominator set contains zero")]
    ZeroInRatioDenominator,
    #[error("division by zero")]
    ZeroDenominator,
    #[error("Mobius map has a pole at -1")]
    PoleAtMinusOne,
    #[error("edge endpoints coincide")]
    DegenerateEdge,
    #[error("duplicate points in input")]
    DuplicatePoints,
    #[error("set does not satisfy the sector condition")]
    SectorViolation,
    #[error("exact identity violated: lhs={lhs} rhs={rhs}")]
    IdentityViolation { lhs: String, rhs: String },
    #[error("no dyadic class admissible under the cap (needs C >= {required_c})")]
    NoAdmissibleClass { required_c: String },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("per-set budget exceeded ({0} ms)")]
    BudgetExceeded(u64),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
