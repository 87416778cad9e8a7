//! Exact distance and routing labels for cube-free median graphs.

pub mod codec;
pub mod dist;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hierarchy;
pub mod recognize;
pub mod rout;
pub mod star;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{PortId, PortedGraph, VertexId};
