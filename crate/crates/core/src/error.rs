use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid disbursement: {0}")]
    InvalidDisbursement(String),

    #[error("disbursement is not minimized: spread {spread} exceeds n = {n}")]
    NotMinimized { spread: i32, n: usize },

    #[error("flip not applicable to pebbles {i} and {j}: spin difference {diff}, need {n}")]
    FlipNotApplicable { i: usize, j: usize, diff: i32, n: usize },

    #[error("n = {n} exceeds the bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("pebble {0} compared with itself")]
    SamePebble(usize),

    #[error("pebble {pebble} out of range 1..={n}")]
    PebbleOutOfRange { pebble: usize, n: usize },

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("window structure violation: {0}")]
    StructureViolation(String),

    #[error("strategy not applicable: {0}")]
    StrategyNotApplicable(String),

    #[error("class does not match the permutation: {0}")]
    ClassMismatch(String),

    #[error("routing did not settle: {0}")]
    RoutingStalled(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("table cache: {0}")]
    CacheFormat(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
