use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced while building, checking, encoding or decoding.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("label format error: {0}")]
    Format(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {0} out of range")]
    InvalidVertex(VertexId),

    #[error("({0}, {1}) is not an edge")]
    NotEdge(VertexId, VertexId),

    #[error("not median: triplet ({}, {}, {}) has {count} medians", .triplet.0, .triplet.1, .triplet.2)]
    NotMedian {
        triplet: (VertexId, VertexId, VertexId),
        count: usize,
    },

    #[error("not cube-free median: {0}")]
    NotCubeFreeMedian(String),

    #[error("graph has {n} vertices, exhaustive checker bound is {bound}")]
    SizeGuard { n: usize, bound: usize },

    #[error("vertex {vertex} has two nearest star vertices ({first} and {second})")]
    GateAmbiguous {
        vertex: VertexId,
        first: VertexId,
        second: VertexId,
    },

    #[error("imprint computation failed at vertex {vertex}: {reason}")]
    ImprintMismatch { vertex: VertexId, reason: String },

    #[error("total boundary of fiber {fiber} is not a tree")]
    BoundaryNotTree { fiber: VertexId },

    #[error("tree labels share no separator")]
    NoCommonSeparator,

    #[error("labels come from different encodings")]
    ForeignLabel,

    #[error("no slot of the cone record names panel {panel}")]
    SlotMismatch { panel: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that prove the input lies outside the supported graph class.
    pub fn is_class_violation(&self) -> bool {
        matches!(
            self,
            Error::NotMedian { .. }
                | Error::NotCubeFreeMedian(_)
                | Error::GateAmbiguous { .. }
                | Error::ImprintMismatch { .. }
                | Error::BoundaryNotTree { .. }
                | Error::InvalidGraph(_)
        )
    }
}
