use std::path::PathBuf;

/// Errors raised by the harness layer.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] wradius_core::Error),

    #[error("matrix parse error: {0}")]
    Parse(String),

    #[error("unknown generator kind '{0}'; expected one of ginibre, hermitian, normal, nilpotent_shift, rank_one_nilpotent, jordan_block, paper_example")]
    UnknownKind(String),

    #[error("unknown example id '{0}'; expected one of ex_i, ex_ii, shift3, th13_b, diag_1_i, e12")]
    UnknownExample(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}
