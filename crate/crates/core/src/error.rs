use thiserror::Error;

/// Errors raised by the simulator.
///
/// `Config` covers invalid parameters (the caller asked for something the
/// model cannot represent); `Data` covers malformed inputs to an otherwise
/// valid operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

pub(crate) fn data<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Data(msg.into()))
}

impl Error {
    /// The message without the category prefix.
    pub fn message(&self) -> &str {
        match self {
            Error::Config(m) | Error::Data(m) => m,
        }
    }
}
