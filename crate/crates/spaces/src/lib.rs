//! Finite element spaces on graph meshes.
//!
//! Edge spaces (continuous over the graph, continuous per edge, or
//! discontinuous) and vertex multiplier spaces share one dof-map type,
//! [`FunctionSpace`]. Assembly helpers produce [`Coo`] triplet matrices.

pub mod assemble;
mod basis;
mod function;
pub mod norms;
pub mod quadrature;
mod space;
mod sparse;

pub use basis::Lagrange;
pub use function::{Divergence, GraphFunction};
pub use norms::{norm_matrix, DualNorm, NormChoice, NormWeights};
pub use space::{FunctionSpace, SpaceKind, VertexSet};
pub use sparse::{block_diag, Coo};

use netgraph::GraphError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpaceError {
    #[error("unsupported polynomial degree {0}")]
    UnsupportedDegree(usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation needs an edge space, not a vertex multiplier space")]
    NotAnEdgeSpace,
    #[error("weight '{what}' must be positive, got {value}")]
    SingularWeight { what: &'static str, value: f64 },
    #[error("norm {norm} is not defined on this space")]
    NormSpaceMismatch { norm: &'static str },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
