use thiserror::Error;

/// Failures of a run, each mapped to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {field}: {message}")]
    Config { field: &'static str, message: String },
    #[error("{context}: {source}")]
    Core {
        context: &'static str,
        #[source]
        source: curvlab_core::Error,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn config(field: &'static str, message: impl Into<String>) -> Self {
        CliError::Config { field, message: message.into() }
    }

    /// Every error is an input problem from the caller's point of view.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Attach module context to core errors.
pub trait Context<T> {
    fn context(self, context: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, curvlab_core::Error> {
    fn context(self, context: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { context, source })
    }
}
