use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("plane length {len} does not match {width}x{height}")]
    PlaneLength { len: usize, width: usize, height: usize },

    #[error("image must be at least 1x1, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("unsupported pixel format: {0}")]
    UnsupportedFormat(String),

    #[error("unsupported bit depth: {0} (only 8 bits per channel)")]
    UnsupportedBitDepth(String),

    #[error("failed to decode {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("failed to encode image: {0}")]
    Encode(#[source] image::ImageError),

    #[error("protected output must be a lossless .png file: {0}")]
    LossyOutput(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("camera id must not be empty")]
    EmptyCameraId,

    #[error("invalid camera id hex: {0}")]
    CameraIdHex(#[from] hex::FromHexError),

    #[error("bit plane index {0} out of range 0..=7")]
    InvalidPlane(u8),

    #[error("unrecognized bit plane `{0}` (expected 0-7, lsb, fourth or msb)")]
    UnknownPlane(String),

    #[error("mse must be non-negative, got {0}")]
    NegativeMse(f64),

    #[error("statistics undefined: {0}")]
    UndefinedStatistics(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid is empty")]
    EmptyGrid,

    #[error("rectangle {rect} is outside the {width}x{height} image")]
    OutOfBounds {
        rect: crate::attacks::Rect,
        width: usize,
        height: usize,
    },

    #[error("donor image is {donor:?}, target is {target:?}")]
    DonorSizeMismatch {
        donor: (usize, usize),
        target: (usize, usize),
    },

    #[error("invalid attack spec: {0}")]
    InvalidAttack(String),
}
