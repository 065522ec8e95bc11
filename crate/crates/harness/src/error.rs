use qel_core::QelError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Bad command line or configuration value.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(QelError),
}

impl HarnessError {
    pub fn usage(msg: impl Into<String>) -> Self {
        HarnessError::Usage(msg.into())
    }

    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_string(),
            source,
        }
    }

    /// 2 for usage and configuration problems, 3 for resource limits, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) | HarnessError::Parse { .. } => 2,
            HarnessError::Resource(_) => 3,
            HarnessError::Io { .. } | HarnessError::Core(_) => 1,
        }
    }

    /// Short machine-readable category used in the structured error report.
    pub fn kind(&self) -> &'static str {
        match self {
            HarnessError::Usage(_) => "usage",
            HarnessError::Parse { .. } => "parse",
            HarnessError::Resource(_) => "resource",
            HarnessError::Io { .. } => "io",
            HarnessError::Core(_) => "internal",
        }
    }
}

impl From<QelError> for HarnessError {
    fn from(e: QelError) -> Self {
        match e {
            QelError::Resource(msg) => HarnessError::Resource(msg),
            QelError::Argument(msg) => HarnessError::Usage(msg),
            e @ QelError::DimensionMismatch { .. } => HarnessError::Usage(e.to_string()),
            other => HarnessError::Core(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
