use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
///
/// Variants carry labels rather than raw indices so the message is
/// meaningful without the family at hand.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // construction and validation
    #[error("duplicate block {0:?}")]
    DuplicateBlock(Vec<String>),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("empty label")]
    EmptyLabel,
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("point {0:?} occurs in no block")]
    IsolatedPoint(String),
    #[error("point index {index} out of range for a universe of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("universe of {0} points exceeds the supported maximum of 128")]
    UniverseTooLarge(usize),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("families share points {0:?}")]
    OverlappingUniverses(Vec<String>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),

    // engine and properties
    #[error("operation needs a nonempty family")]
    EmptyFamily,
    #[error("family is not uniform")]
    NotUniform,
    #[error("family is not intersecting: {0:?} and {1:?} are disjoint")]
    NotIntersecting(Vec<String>, Vec<String>),
    #[error("transversal number {tau} exceeds k - 1 = {}", .k - 1)]
    TauTooLarge { tau: usize, k: usize },
    #[error("closure characterizations disagree: (a)={a} (b)={b} (c)={c}")]
    CharacterizationMismatch { a: bool, b: bool, c: bool },

    // generators
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("affine planes are only built for prime orders, got {0}")]
    UnsupportedOrder(usize),

    // composers
    #[error("not a closed intersecting family: {0}")]
    NotCif(String),
    #[error("not a maximal intersecting family: {0}")]
    NotMif(String),
    #[error("block size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("class {class}: {set:?} does not meet transversal {missed:?} of another class")]
    ConditionCFailed {
        class: usize,
        set: Vec<String>,
        missed: Vec<String>,
    },
    #[error("{classes} classes exceed the maximum of {max}")]
    TooManyClasses { classes: usize, max: usize },
    #[error("class {class} is not intersecting: {first:?} and {second:?} are disjoint")]
    ConditionAFailed {
        class: usize,
        first: Vec<String>,
        second: Vec<String>,
    },
    #[error("{set:?} in class {from} has no disjoint partner in class {to}")]
    ConditionBFailed {
        from: usize,
        to: usize,
        set: Vec<String>,
    },
    #[error("transversal number {tau} does not equal k - n = {expected}")]
    TauMismatch { tau: usize, expected: usize },
    #[error("factors are not uniform with a common (k, t): {0}")]
    NonUniformFactors(String),
    #[error("factor {factor}: transversal number of the dual is {found}, expected {expected}")]
    DualTauMismatch {
        factor: String,
        expected: usize,
        found: usize,
    },
    #[error("shape mismatch: uk(G) = {g_k} but uk(F) + tau(G) = {expected}")]
    ShapeMismatch { g_k: usize, expected: usize },
    #[error("transversal number of G's dual is {found}, needs to exceed {bound}")]
    DualTauTooSmall { found: usize, bound: usize },
    #[error("decomposition does not reassemble: {0}")]
    ReconstructionMismatch(String),
    #[error("search space {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("arithmetic overflow")]
    Overflow,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
