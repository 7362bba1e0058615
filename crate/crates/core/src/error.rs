use thiserror::Error;

use crate::geometry::Rect;

#[derive(Debug, Error)]
pub enum Error {
    #[error("png decode error at byte {offset}: {message}")]
    Decode { offset: usize, message: String },

    #[error("rectangle {rect:?} lies outside the {width}x{height} buffer")]
    Bounds { rect: Rect, width: usize, height: usize },

    #[error("invalid buffer: {0}")]
    InvalidBuffer(String),

    #[error("input of {pixels} pixels exceeds the recursive fill limit of {limit}")]
    TooLarge { pixels: usize, limit: usize },

    #[error("trace parse error at {path}: {message}")]
    Trace { path: String, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("feature base is missing classes: {}", .0.join(", "))]
    MissingClasses(Vec<String>),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
