use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid codec configuration: {0}")]
    InvalidConfig(String),

    /// The compressed input is malformed. `offset` is the byte position in
    /// the buffer being parsed when the problem was detected.
    #[error("corrupt stream at byte {offset}: {reason}")]
    Corrupt { offset: usize, reason: String },

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },

    #[error("input does not fit the declared shape: {0}")]
    Shape(String),

    #[error("empty histogram: at least one symbol must have a nonzero count")]
    EmptyHistogram,

    #[error("symbol {0:#04x} has no code in this table")]
    MissingSymbol(u8),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn corrupt(offset: usize, reason: impl Into<String>) -> Self {
        Error::Corrupt {
            offset,
            reason: reason.into(),
        }
    }
}
