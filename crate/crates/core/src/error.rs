use thiserror::Error;

/// Broad classification of an [`Error`], used by the command line front end
/// to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    Budget,
    Invariant,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("column index {index} out of range for a matrix with {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("columns do not sum to zero, so the all-ones kernel normalisation is unavailable")]
    NormalizationUnavailable,
    #[error("matrix does not have full row rank (rank {rank}, rows {rows})")]
    NotFullRowRank { rank: usize, rows: usize },
    #[error("matrix must have integer entries: {0}")]
    NotInteger(String),
    #[error("matrix A is rank deficient (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("the columns condition fails")]
    ColumnsConditionFails,
    #[error("decomposition hypothesis fails: q({d}) = {q_d} is not larger than {d}*q")]
    HypothesisFails { d: usize, q_d: usize },
    #[error("xi = {xi} is not a valid residue coprime to W = {w}")]
    InvalidXi { xi: String, w: String },
    #[error("zeta = {0} is zero or has a prime factor larger than w")]
    NonSmoothZeta(u64),
    #[error("system is not preprocessed: {0}")]
    PreprocessingMissing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} exceeds the configured limit ({actual} > {limit})")]
    SizeLimitExceeded {
        what: &'static str,
        actual: u128,
        limit: u128,
    },
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
    #[error("no admissible (xi, zeta) pair with zeta <= {0}")]
    SearchExhausted(u64),
    #[error("no syndeticity constant up to the cap {0}")]
    CapExceeded(u64),
    #[error("series is degenerate: {0}")]
    DegenerateSeries(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SizeLimitExceeded { .. }
            | Error::SearchBudgetExceeded(_)
            | Error::SearchExhausted(_)
            | Error::CapExceeded(_) => ErrorKind::Budget,
            Error::Invariant(_) => ErrorKind::Invariant,
            _ => ErrorKind::InvalidInput,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
