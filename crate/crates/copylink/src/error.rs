use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Config or input file does not match its schema.
    #[error("schema error: {0}")]
    Schema(String),
    /// The run needs more resources than allowed without `--long-run`.
    #[error("gated: {0}")]
    Gated(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] copylink_core::Error),
    #[error("{0}")]
    Other(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Gated(_) => 3,
            CliError::Core(e) if is_resource(e) => 3,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "schema",
            3 => "gated",
            _ => match self {
                CliError::Io { .. } => "io",
                _ => "runtime",
            },
        }
    }

    /// One-line machine readable description for stderr.
    pub fn to_json(&self) -> String {
        json!({ "error": self.kind(), "exit_code": self.exit_code(), "message": self.to_string() }).to_string()
    }
}

fn is_resource(e: &copylink_core::Error) -> bool {
    match e {
        copylink_core::Error::Resource(_) => true,
        copylink_core::Error::Instance { source, .. } => is_resource(source),
        _ => false,
    }
}
