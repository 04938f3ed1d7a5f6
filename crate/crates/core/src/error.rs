//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed embedding file. `reason` carries the location, e.g.
    /// "zero vector at line 3" (data lines are numbered from 1, the
    /// count/dimension header is not counted).
    #[error("embedding file {path}: {reason}")]
    Embedding { path: String, reason: String },

    #[error("app model {path}: {reason}")]
    Model { path: String, reason: String },

    #[error("test file {path}: {reason}")]
    TestFile { path: String, reason: String },

    #[error("unknown widget {xpath} in window {window}")]
    UnknownWidget { window: String, xpath: String },

    #[error("assertion target {xpath} missing from the logged state")]
    AssertionTargetMissing { xpath: String },

    #[error("donor test not replayable at event {index}")]
    DonorNotReplayable { index: usize },

    #[error("donor assertion {index} does not hold on the donor app")]
    DonorAssertionFailed { index: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
