use thiserror::Error;

use crate::report::ReportRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0:?} is not a member of S({1}, {2})")]
    NotAMember(Vec<u32>, u32, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("j = {j} out of range for depth {r} (expected {lo} <= j <= {hi})")]
    JOutOfRange {
        j: usize,
        r: usize,
        lo: usize,
        hi: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A proved statement failed on a concrete instance. This always points at
    /// an implementation bug, never at a mathematical finding.
    #[error("theorem violation in {}: expected {}, observed {}", .0.check, .0.expected, .0.observed)]
    TheoremViolation(Box<ReportRecord>),

    #[error("polynomial is not in the span of the period space basis for W({0}, {1})")]
    NotInPeriodSpace(u32, usize),

    #[error("series identity violated: {0}")]
    IdentityViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("checksum mismatch for {path}: recorded {recorded}, computed {computed}")]
    ChecksumMismatch {
        path: String,
        recorded: String,
        computed: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
