use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] saccadic_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
    #[error("{path}:{line}: {msg}")]
    Config { path: String, line: usize, msg: String },
    #[error("analysis region is {width}x{height} pixels, need at least 32x32")]
    RegionTooSmall { width: usize, height: usize },
    #[error("analysis region extends outside the image")]
    RegionOutOfBounds,
    #[error("frame times must be sorted")]
    UnsortedFrames,
    #[error("{0}")]
    Parse(String),
}
