use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource guard: {what} (limit {limit}, requested {requested}); pass the override flag to force")]
    Resource {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("line {line}: {source}")]
    Ingest {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag, used in structured CLI and FFI errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Graph6 { .. } => "graph6",
            Error::Domain(_) => "domain",
            Error::Resource { .. } => "resource",
            Error::Ingest { .. } => "ingest",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
