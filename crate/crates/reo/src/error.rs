use std::fmt;
use std::io;
use std::path::PathBuf;

/// Machine-readable reason attached to every rejected input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectKind {
    MalformedJson,
    MissingHeader,
    Arity,
    Duplicate,
    Schema,
    Invalid,
}

impl RejectKind {
    pub fn code(self) -> &'static str {
        match self {
            RejectKind::MalformedJson => "malformed-json",
            RejectKind::MissingHeader => "missing-header",
            RejectKind::Arity => "arity",
            RejectKind::Duplicate => "duplicate",
            RejectKind::Schema => "schema",
            RejectKind::Invalid => "invalid",
        }
    }
}

impl fmt::Display for RejectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReoError {
    #[error(transparent)]
    Core(#[from] reo_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// `line` is 1-based; 0 when the whole document is at fault.
    #[error("{}:{line}: [{kind}] {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        kind: RejectKind,
        message: String,
    },

    #[error("{0}")]
    Usage(String),
}

impl ReoError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        ReoError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(
        path: impl Into<PathBuf>,
        line: usize,
        kind: RejectKind,
        message: impl Into<String>,
    ) -> Self {
        ReoError::Parse {
            path: path.into(),
            line,
            kind,
            message: message.into(),
        }
    }

    /// 2 for I/O failures, 1 for everything the user can fix in the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReoError::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = ReoError> = std::result::Result<T, E>;
