//! Oriented metric graphs embedded in 3D, and per-edge interval meshes.
//!
//! Edges are straight segments parameterized by arclength `s ∈ (0, ℓ)` from
//! `tail` to `head`. A vertex of degree one is a boundary vertex, every other
//! vertex is internal.

mod graph;
mod io;
mod mesh;

pub use graph::{Edge, EdgeKind, EdgeSpec, SpatialGraph, Vertex};
pub use mesh::GraphMesh;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("edge {edge} is a self-loop")]
    SelfLoop { edge: usize },
    #[error("edge {edge} references missing vertex {vertex}")]
    DanglingEdgeReference { edge: usize, vertex: usize },
    #[error("duplicate {what} id {id}")]
    DuplicateId { what: &'static str, id: usize },
    #[error("{what} ids must be contiguous from 0")]
    NonContiguousIds { what: &'static str },
    #[error("edge {edge}: {reason}")]
    InvalidEdge { edge: usize, reason: String },
    #[error("mesh size must be positive, got {0}")]
    NonPositiveMeshSize(f64),
    #[error("expected {expected} per-edge cell counts, got {got}")]
    MeshMismatch { expected: usize, got: usize },
    #[error("arclength {s} outside edge {edge} of length {length}")]
    OutOfRange { edge: usize, s: f64, length: f64 },
    #[error("malformed network file: {0}")]
    Format(String),
}
