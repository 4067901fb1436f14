use std::path::PathBuf;

use crate::surface::{ArcId, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid triangulation: {}", summarize(.0))]
    InvalidTriangulation(Vec<Violation>),
    #[error("rejected input: {0}")]
    Rejected(String),
    #[error("signature {0} admits no hexagon decomposition; use the explicit small-case model")]
    UnsupportedSignature(String),
    #[error("unknown piece {0}")]
    UnknownPiece(usize),
    #[error("unknown arc {0}")]
    UnknownArc(ArcId),
    #[error("arcs are expressed relative to different base triangulations")]
    DifferentBases,
    #[error("arc {0} is the flipped arc; use the move's replacement")]
    UndefinedTransport(ArcId),
    #[error("arc {0} is not flippable (its face has a single completion)")]
    NotFlippable(ArcId),
    #[error("no flip decreases the crossing weight (weight {0})")]
    NoDecreasingFlip(usize),
    #[error("nodes {0} and {1} are not connected within the ball")]
    NotConnected(usize, usize),
    #[error("window is truncated; exhaustive enumeration is unsound")]
    TruncatedWindow,
    #[error("inconsistent configuration pattern: {0}")]
    InconsistentPattern(String),
    #[error("inconsistent group invariants: {0}")]
    InconsistentInvariants(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn summarize(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
