use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stub total {0} is odd; a configuration model needs an even number of stubs")]
    OddStubTotal(u64),

    #[error(
        "precision {requested:e} unreachable within {terms} terms; best bound {achieved:e} (value {value})"
    )]
    PrecisionUnreachable {
        requested: f64,
        achieved: f64,
        value: f64,
        terms: u64,
    },

    #[error("no simple graph after {attempts} pairing attempts")]
    RepeatedPairingExhausted { attempts: u32 },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
