use std::path::PathBuf;

use thiserror::Error;

use crate::utility::Resource;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: field `{field}`: {message}")]
    Parse {
        file: String,
        line: u64,
        field: String,
        message: String,
    },

    #[error("{file}: {message}")]
    Input { file: String, message: String },

    #[error("unknown country code `{0}`")]
    UnknownCountry(String),

    #[error("duplicate country code `{0}`")]
    DuplicateCountry(String),

    #[error("duplicate cell `{0}`")]
    DuplicateCell(String),

    #[error("shape mismatch: expected {expected} cells, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("grid must have at least one row and one column")]
    EmptyGrid,

    #[error("cell {cell}: invalid coordinate ({lat}, {lon})")]
    InvalidCoordinate { cell: usize, lat: f64, lon: f64 },

    #[error("cell {cell}: latitude {lat} is south of the bound {bound}")]
    SouthOfBound { cell: usize, lat: f64, bound: f64 },

    #[error("non-Arctic country `{code}` cannot own cell {cell}")]
    NonArcticOwnsCell { code: String, cell: usize },

    #[error("country `{0}` owns no cells and has no anchor coordinate")]
    NoDistanceSource(String),

    #[error("expected a {expected} layer, got {found}")]
    WrongResource { expected: String, found: Resource },

    #[error("layer value at cell {cell} is {value}; values must be finite and nonnegative")]
    InvalidLayerValue { cell: usize, value: f64 },

    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("missing maritime importance for non-Arctic country `{0}`")]
    MissingImportance(String),

    #[error("importance {value} for `{code}` is outside (0, 1]")]
    InvalidImportance { code: String, value: f64 },

    #[error("invalid decay scale {0} km; must be finite and positive")]
    InvalidDecayScale(f64),

    #[error("grade count {0} is below 2")]
    InvalidGradeCount(usize),

    #[error("weight {0} must be finite and positive")]
    NonPositiveWeight(f64),

    #[error("grade vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("grade {grade} is outside the 0..{levels} scale")]
    GradeOutOfScale { grade: u8, levels: usize },

    #[error("fields do not share a grid ({0} vs {1} cells)")]
    GridMismatch(usize, usize),

    #[error("invalid threshold scheme: {0}")]
    InvalidScheme(String),

    #[error("scheme has {classes} classes but the grade scale has {grades} levels")]
    ClassCountMismatch { classes: usize, grades: usize },

    #[error("missing {0} layer")]
    MissingLayer(Resource),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// I/O failures map to a distinct exit status in the CLI.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }

    pub(crate) fn parse(file: &str, line: u64, field: &str, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.to_owned(),
            line,
            field: field.to_owned(),
            message: message.into(),
        }
    }
}
