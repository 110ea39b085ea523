use thiserror::Error;

/// Errors raised when constructing or mutating a [`Graph`](crate::Graph).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("not a permutation of the vertex set")]
    BadPermutation,
    #[error("graph with {0} vertices exceeds the supported size")]
    SizeExceeded(usize),
    #[error("operation requires a nonempty graph")]
    EmptyGraph,
}
