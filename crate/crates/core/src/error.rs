use thiserror::Error;

use crate::moves::AcMove;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed token {token:?} at offset {position}")]
    Token { position: usize, token: String },
    #[error("malformed move literal {0:?}")]
    Move(String),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("presentation: {0}")]
    Presentation(String),
    #[error("dual pair is invalid: {}", .0.join("; "))]
    InvalidPair(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move {mv} not applicable: {reason}")]
    Precondition { mv: AcMove, reason: String },
    #[error("{0} has no single-move inverse")]
    NoSingleMoveInverse(AcMove),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("{kind} curve {index} has no crossings; its complement is not a union of polygons")]
    FreeCurve { kind: &'static str, index: usize },
    #[error("non-polygonal complex: {0}")]
    NonPolygonal(String),
    #[error("inconsistent complex: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("curve {curve}: {reason}")]
    Malformed { curve: usize, reason: String },
}
