use std::path::PathBuf;

use crate::trainer::Partition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: missing column `{column}` in header")]
    MissingColumn { path: PathBuf, column: String },

    #[error("{path}: row {row}, column `{column}`: cannot parse {value:?} as a finite number")]
    BadCell {
        path: PathBuf,
        row: usize,
        column: String,
        value: String,
    },

    #[error("{path}: cannot infer year from file name (expected a 4-digit year, e.g. gt_2011.csv)")]
    UnknownYear { path: PathBuf },

    #[error("{path}: year {year} outside configured range {min}..={max}")]
    YearOutOfRange {
        path: PathBuf,
        year: i32,
        min: i32,
        max: i32,
    },

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("column `{0}` is constant over the selected records")]
    ConstantColumn(String),

    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },

    #[error("histogram over a zero-width range")]
    ZeroWidthRange,

    #[error("histogram needs at least one bin")]
    NoBins,

    #[error("partition `{0}` is empty")]
    EmptyPartition(Partition),

    #[error("year {0} assigned to more than one partition")]
    OverlappingYears(i32),

    #[error("dataset years {0:?} are not assigned to any partition")]
    UnassignedYears(Vec<i32>),

    #[error("invalid split fractions: {0}")]
    InvalidFractions(String),

    #[error("split covers {split} records but the dataset has {dataset}")]
    SplitMismatch { split: usize, dataset: usize },

    #[error("partition `{0}` has zero response variance")]
    ZeroVariance(Partition),

    #[error("training diverged at epoch {epoch}: non-finite loss")]
    Diverged { epoch: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid bounds: {0}")]
    Bounds(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("missing artifact {path}; run `{hint}` first")]
    MissingArtifact { path: PathBuf, hint: String },

    #[error("{0} already exists; pass --overwrite to replace it")]
    ArtifactExists(PathBuf),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
