use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate ({0}, {1}, {2}) is outside the grid")]
    OutOfBounds(u32, u32, u32),

    #[error("grid shapes differ: {0}")]
    ShapeMismatch(String),

    #[error("invalid block shape: {0}")]
    InvalidBlockShape(String),

    #[error("voxel ({0}, {1}, {2}) carries segment label 0; labels must be >= 1")]
    ZeroSegmentLabel(u32, u32, u32),

    #[error("label space exhausted for {what}: {required} labels needed, 32-bit unsigned available")]
    LabelOverflow { what: &'static str, required: u64 },

    #[error(
        "blocks {block_a} and {block_b} disagree on the activity of cell \
         ({}, {}, {}); this indicates an internal labeling bug",
        coord.0, coord.1, coord.2
    )]
    ActivityMismatch {
        coord: (u32, u32, u32),
        block_a: usize,
        block_b: usize,
    },

    #[error("inconsistent global tables: {0}")]
    TableConflict(String),

    #[error("block {0} has already been written")]
    DuplicateBlock(usize),

    #[error("no component with label {label} of order {order}")]
    ComponentNotFound { order: u8, label: u32 },

    #[error("store at {0} is not finalized")]
    StoreNotFinalized(PathBuf),

    #[error("store format error in {path}: {reason}")]
    StoreFormat { path: PathBuf, reason: String },

    #[error("worker processing block {index} failed: {source}")]
    Worker {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::StoreFormat {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
