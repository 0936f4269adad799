use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("gap bound must be at least 1")]
    InvalidGap,

    #[error("invalid variant for n = {n}: {reason}")]
    InvalidVariant { n: u32, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A structural claim that is supposed to hold for every valid input was
    /// contradicted. Either the implementation or the claim is wrong.
    #[error("structure lemma violated: {0}")]
    LemmaViolation(String),

    #[error("insufficient data: need at least {needed} terms, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("recurrence does not fit the terms: nonzero coefficient at degree {degree}")]
    CancellationFailure { degree: usize },

    #[error("denominator constant term cannot be normalized to 1 (found {0})")]
    BadDenominator(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: expected index {expected}, found {found}")]
    NonContiguous { line: usize, expected: i64, found: i64 },

    #[error("invalid sequence id {0:?}: expected 'A' followed by six digits")]
    InvalidSequenceId(String),

    #[error("offline and no cached copy of {id} under {}", cache_dir.display())]
    Offline { id: String, cache_dir: PathBuf },

    #[error("HTTP status {status} fetching {url}")]
    Http { status: u16, url: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
