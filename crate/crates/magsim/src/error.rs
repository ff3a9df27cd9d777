//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong across the simulation modules.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violates an invariant or a resolution requirement.
    #[error("config error: {0}")]
    Config(String),

    /// A config file could not be parsed.
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    /// Postselection probability fell at or below the floor; essentially all
    /// photons are being rejected and the amplified state is undefined.
    #[error("dark port: postselection probability {p_f:.3e} at or below floor {floor:.3e}")]
    DarkPort { p_f: f64, floor: f64 },

    /// Both detector channels read zero counts.
    #[error("no signal: both detector channels are zero")]
    NoSignal,

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    /// Stable machine-readable category, emitted on stderr by the CLI.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Config(_) => "config",
            Error::Parse { .. } => "parse",
            Error::DarkPort { .. } => "dark-port",
            Error::NoSignal => "no-signal",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
