//! Library side of the `nijlie` command-line tool: the document format
//! (parser, canonical serializer, name resolution into core types) and
//! the command implementations. The binary in `main.rs` is a thin
//! argument-parsing shell around [`ops`].

pub mod document;
pub mod ops;

use nijlie::Error as CoreError;

/// Everything a command can fail with, tagged for exit-code mapping.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Doc(#[from] document::DocError),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
}

/// Exit-code categories: 1 validation failure, 2 budget exhausted,
/// 3 malformed input, 4 internal invariant breach.
pub fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Doc(_) | CliError::Usage(_) => 3,
        CliError::Core(err) => match err {
            CoreError::BudgetExceeded { .. } => 2,
            CoreError::Internal(_) | CoreError::DivisionByZero => 4,
            CoreError::DimensionMismatch(_)
            | CoreError::FieldMismatch(_)
            | CoreError::NotPrime(_)
            | CoreError::EnumerationNeedsPrimeField(_)
            | CoreError::Invalid(_) => 3,
            _ => 1,
        },
    }
}
