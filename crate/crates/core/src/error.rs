use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised while validating graphs, labels, and arrangements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) listed more than once")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) has multiplicity 0")]
    ZeroMultiplicity(usize, usize),
    #[error("edges ({i}, {j}) and ({j}, {i}) are both present; graph is not simple")]
    NotSimple { i: usize, j: usize },
    #[error("edge ({0}, {1}) has multiplicity greater than 1; graph is not simple")]
    NotSimpleMultiplicity(usize, usize),
    #[error("graph contains a directed cycle")]
    Cyclic,
    #[error("edge ({0}, {1}) is not oriented increasingly; normalize the graph first")]
    NotIncreasing(usize, usize),
    #[error("label has {got} entries but the graph has {expected} vertices")]
    LabelLength { got: usize, expected: usize },
    #[error("permutation has {got} entries but the graph has {expected} vertices")]
    PermutationLength { got: usize, expected: usize },
    #[error("values {0:?} are not a permutation of 1..=n")]
    NotAPermutation(Vec<usize>),
    #[error("switched edge ({0}, {1}) is not an edge of the base graph")]
    NotABaseEdge(usize, usize),
    #[error("hyperplane constant must be positive, got {0}")]
    NonPositiveConstant(String),
    #[error("duplicate hyperplane x_{i} - x_{j} = {a}")]
    DuplicateHyperplane { i: usize, j: usize, a: String },
    #[error("region has {got} signs but the arrangement has {expected} hyperplanes")]
    RegionMismatch { got: usize, expected: usize },
    #[error("arrangement is not central: {0}")]
    NotCentral(String),
    #[error("invalid condition triple ({k}, {i}, {j}): {reason}")]
    InvalidTriple {
        k: usize,
        i: usize,
        j: usize,
        reason: String,
    },
    #[error("graph has no duplicate label")]
    NoDuplicateLabel,
}
