use thiserror::Error;

use crate::diagram::ArcId;

/// Errors raised while reading or constructing a diagram.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("arc {arc} appears {count} times (expected 2)")]
    ArcMultiplicity { arc: ArcId, count: usize },
    #[error("inconsistent orientation on component containing arc {arc}")]
    Orientation { arc: ArcId },
    #[error("orientation header names component {index}, but the diagram has {count} components")]
    UnknownComponent { index: usize, count: usize },
    #[error("diagram is not planar ({faces} faces, expected {expected})")]
    NotPlanar { faces: usize, expected: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Errors raised by homology, cobordism and ribbon computations.
#[derive(Debug, Error)]
pub enum KhError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("movie frame {index}: {message}")]
    BadFrame { index: usize, message: String },
    #[error("chain map does not commute with the differential: {0}")]
    NotChainMap(String),
    #[error("functional does not vanish on boundaries: {0}")]
    NotWellDefined(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("simplifier failed: {0}")]
    SimplifierFailed(String),
    #[error("expected an infinite cyclic group: {0}")]
    NotCyclic(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = KhError> = std::result::Result<T, E>;
