//! Error type shared across the harness.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in {file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("duplicate problem key ({id}, {language})")]
    DuplicateProblem { id: String, language: String },

    #[error("no overlapping problems for direction {src}->{tgt}")]
    EmptyDirection { src: String, tgt: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("obfuscation failed: {0}")]
    Obfuscation(String),

    #[error("obfuscation unsupported for language {0}")]
    ObfuscationUnsupported(String),

    #[error("transport error after {attempts} attempts: {message}")]
    Transport { attempts: u32, message: String },

    #[error("replay cache miss for key {0}")]
    CacheMiss(String),

    #[error("endpoint does not support logprob scoring: {0}")]
    Capability(String),

    #[error("no {quality} record in pool for key {key}")]
    PoolEmpty { quality: String, key: String },

    #[error("toolchain unavailable for {language}: {message}")]
    Environment { language: String, message: String },

    #[error("run manifest config hash mismatch (manifest {manifest}, config {config})")]
    ManifestMismatch { manifest: String, config: String },

    #[error("stored prompt hash {stored} does not match requested {requested}")]
    PromptHashMismatch { stored: String, requested: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
