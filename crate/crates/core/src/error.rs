use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("malformed PLY: {0}")]
    PlyFormat(String),

    #[error("unsupported PLY layout: {0}")]
    PlyUnsupported(String),

    #[error("coordinate {value} exceeds the {max_depth}-bit coordinate range")]
    CoordinateOverflow { value: i64, max_depth: u32 },

    #[error("point ({x}, {y}, {z}) lies outside the {depth}-bit grid")]
    OutOfGrid { x: i64, y: i64, z: i64, depth: u32 },

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("invalid scale factor: {0}")]
    InvalidScale(String),

    #[error("LUT was trained for scale {lut} but SR was requested at {requested}")]
    ScaleMismatch { lut: String, requested: String },

    #[error("translation exceeds the cloud minimum on axis {axis}")]
    TranslationAboveMinimum { axis: usize },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("RD curve error: {0}")]
    RdCurve(String),

    #[error("BD-rate error: {0}")]
    BdRate(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
