use thiserror::Error;

/// Errors produced by the matcher library.
///
/// Variants fall in two families: configuration problems (a mapper or
/// matcher that cannot be set up as requested) and data/domain problems
/// (an argument or input block that is invalid for a correctly built
/// mapper). [`Error::is_configuration`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range for a {m}-bit input")]
    IndexOutOfRange { index: String, m: u32 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("sequence has rank {rank}, outside the codebook of size 2^{m}")]
    NotInCodebook { rank: String, m: u32 },

    #[error("unknown symbol at position {position}: {symbol}")]
    UnknownSymbol { position: usize, symbol: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("invalid document: {0}")]
    Document(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Configuration(msg.into())
    }

    /// True for errors caused by an inconsistent setup rather than by data.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::Configuration(_) | Error::Resource(_) | Error::Document(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
