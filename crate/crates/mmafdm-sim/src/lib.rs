//! Experiment harness around `mmafdm-core`: declarative configs, Monte
//! Carlo BER sweeps with deterministic worker-count-independent seeding,
//! analytical bound sweeps, and CSV emission.

pub mod bound;
pub mod channel_record;
pub mod config;
pub mod csvio;
pub mod sweep;

use std::fmt;

/// Harness-level error: config problems, IO, or a core-library failure.
#[derive(Debug)]
pub enum Error {
    Core(mmafdm_core::Error),
    Io(std::io::Error),
    Config(String),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Core(e) => write!(f, "{e}"),
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<mmafdm_core::Error> for Error {
    fn from(e: mmafdm_core::Error) -> Self {
        Error::Core(e)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
