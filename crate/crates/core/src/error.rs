use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which topological precondition failed when a genus was requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyCheck {
    Watertight,
    Manifold,
    SingleComponent { components: usize },
}

impl std::fmt::Display for TopologyCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TopologyCheck::Watertight => write!(f, "mesh is not watertight"),
            TopologyCheck::Manifold => write!(f, "mesh is not manifold"),
            TopologyCheck::SingleComponent { components } => {
                write!(f, "mesh has {components} connected components, expected 1")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mesh has no vertices")]
    EmptyMesh,

    #[error("volume undefined: {0}")]
    UndefinedVolume(String),

    #[error("topology undefined: {0}")]
    TopologyUndefined(TopologyCheck),

    #[error("invalid operand: {0}")]
    InvalidOperand(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parse error at byte {offset}: {message}")]
    ParseBinary { offset: usize, message: String },

    #[error("incompatible voxel grids: {0}")]
    IncompatibleGrids(String),

    #[error("shape mismatch: field has {found} displacements, template has {expected} vertices")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("model database is empty")]
    EmptyDatabase,

    #[error("model database: {0}")]
    Database(String),

    #[error("script error at {line}:{column}: {message}")]
    Script {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: `{verb}` is an interactive-only command with no headless meaning")]
    InteractiveOnly { line: usize, verb: String },

    #[error("line {line}: {source}")]
    Command {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }
}
