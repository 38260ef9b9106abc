use thiserror::Error;

use crate::colex::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An exhaustive enumeration or dense allocation would exceed its configured cap.
    #[error("{what}: requires {required}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: usize,
        cap: usize,
    },

    #[error("invalid lattice dimensions {rows}x{cols} (twist {twist}): {report}")]
    InvalidDimensions {
        rows: usize,
        cols: usize,
        twist: usize,
        report: ValidationReport,
    },

    #[error("invalid colex: {0}")]
    InvalidColex(ValidationReport),

    #[error("length mismatch for {what}: expected {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("matrix is not self-orthogonal (B^T B != 0)")]
    NotSelfOrthogonal,

    #[error("domain error: {0}")]
    Domain(String),
}
