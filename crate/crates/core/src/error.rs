use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Each variant maps to a stable, machine-parsable code via [`Error::code`],
/// which the CLI prints before the human-readable message.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("insufficient data for {context}: need at least {needed} observations, got {got}")]
    InsufficientData {
        context: String,
        needed: usize,
        got: usize,
    },

    #[error("insufficient context: {0}")]
    InsufficientContext(String),

    #[error("division by zero: level is zero in year {year}")]
    DivisionByZero { year: i32 },

    #[error("arity mismatch in {what}: expected {expected}, got {got}")]
    Arity {
        what: String,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("invalid growth rate {rate} at position {index}: rates must exceed -1")]
    InvalidRate { index: usize, rate: f64 },

    #[error("singular design: column '{column}' is linearly dependent on earlier columns")]
    SingularDesign { column: String },

    #[error("invalid nesting: restricted SSR {ssr_restricted} is below unrestricted SSR {ssr_unrestricted}")]
    InvalidNesting {
        ssr_restricted: f64,
        ssr_unrestricted: f64,
    },

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error("optimizer did not converge within {evaluations} evaluations (best objective {objective}, best point {best:?})")]
    NonConvergence {
        best: Vec<f64>,
        objective: f64,
        evaluations: usize,
    },

    #[error("order selection failed: no candidate model converged")]
    SelectionFailed,

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("file not found: {0}")]
    MissingFile(String),

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("year gap in series '{series}': year {year} is missing")]
    YearGap { series: String, year: i32 },

    #[error("duplicate year {year} for series '{series}'")]
    DuplicateYear { series: String, year: i32 },

    #[error("non-numeric cell at row {row}, column '{column}': '{value}'")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used on the first line of CLI error output and as
    /// the basis of the FFI status codes.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InsufficientData { .. } => "insufficient_data",
            Error::InsufficientContext(_) => "insufficient_context",
            Error::DivisionByZero { .. } => "division_by_zero",
            Error::Arity { .. } => "arity",
            Error::NonFinite { .. } => "non_finite",
            Error::InvalidRate { .. } => "invalid_rate",
            Error::SingularDesign { .. } => "singular_design",
            Error::InvalidNesting { .. } => "invalid_nesting",
            Error::Degenerate(_) => "degenerate",
            Error::NonConvergence { .. } => "non_convergence",
            Error::SelectionFailed => "selection_failed",
            Error::Alignment(_) => "alignment",
            Error::Config(_) => "config",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::MissingFile(_) => "missing_file",
            Error::MalformedHeader(_) => "malformed_header",
            Error::YearGap { .. } => "year_gap",
            Error::DuplicateYear { .. } => "duplicate_year",
            Error::NonNumeric { .. } => "non_numeric",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn insufficient(context: impl Into<String>, needed: usize, got: usize) -> Self {
        Error::InsufficientData {
            context: context.into(),
            needed,
            got,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
