//! File access helpers and the crate-wide error type.
//!
//! All text files are strict UTF-8: invalid byte sequences are an error,
//! not a guess at a legacy encoding.

use std::fs;
use std::path::{Path, PathBuf};

use ismatch_core::{FrequencyTable, NormalizationRules};

/// Errors from the batch tooling, classified so the CLI can map them to
/// distinct exit codes (I/O vs parse vs parameters).
#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    /// Inputs parsed but are semantically unusable (duplicate ids,
    /// mismatched test/base pairs, not enough eligible names, ...).
    #[error("{0}")]
    Data(String),
    /// Invalid parameters or flag combinations.
    #[error("{0}")]
    Param(String),
}

impl ToolError {
    pub fn data(message: impl Into<String>) -> Self {
        ToolError::Data(message.into())
    }

    pub fn param(message: impl Into<String>) -> Self {
        ToolError::Param(message.into())
    }

    /// Process exit code: 2 for parameter errors (matching the argument
    /// parser's own convention), 3 for I/O, 4 for parse and data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Param(_) => 2,
            ToolError::Io { .. } => 3,
            ToolError::Parse { .. } | ToolError::Data(_) => 4,
        }
    }
}

pub fn read_utf8(path: &Path) -> Result<String, ToolError> {
    let bytes = fs::read(path).map_err(|source| ToolError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|e| ToolError::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: format!("not valid UTF-8: {e}"),
    })
}

pub fn write_utf8(path: &Path, contents: &str) -> Result<(), ToolError> {
    fs::write(path, contents).map_err(|source| ToolError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a rules file, or the built-in defaults when no path is given.
pub fn load_rules(path: Option<&Path>) -> Result<NormalizationRules, ToolError> {
    match path {
        None => Ok(NormalizationRules::default()),
        Some(p) => {
            let text = read_utf8(p)?;
            NormalizationRules::parse(&text).map_err(|e| ToolError::Parse {
                path: p.to_path_buf(),
                line: e.line,
                message: e.message,
            })
        }
    }
}

/// Loads a frequency file, or the built-in common-name table when no
/// path is given.
pub fn load_frequency(path: Option<&Path>) -> Result<FrequencyTable, ToolError> {
    match path {
        None => Ok(FrequencyTable::common_arabic_names()),
        Some(p) => {
            let text = read_utf8(p)?;
            FrequencyTable::parse(&text).map_err(|e| ToolError::Parse {
                path: p.to_path_buf(),
                line: e.line,
                message: e.message,
            })
        }
    }
}

/// FNV-1a over the canonical row serialization; cheap and stable, used
/// to tie test sets to the base set they were drawn from.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
