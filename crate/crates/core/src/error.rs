use alloc::string::String;

use crate::rational::Rational;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("negative entry in {what} at {index:?}")]
    NegativeEntry {
        what: &'static str,
        index: (usize, usize),
    },
    #[error("nonzero diagonal entry dist[{0}][{0}]")]
    NonZeroDiagonal(usize),
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    NonSymmetricMatrix(usize, usize),
    #[error("distinct points {0} and {1} are at distance zero")]
    ZeroDistance(usize, usize),
    #[error("triangle inequality fails: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("masses sum to {0}, expected 1")]
    MassNotOne(Rational),
    #[error("point {0} has zero mass; canonicalize the space first")]
    NotCanonical(usize),
    #[error("index {index} out of range for {what} of size {size}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },
    #[error("search size {size} exceeds the exact-search budget {limit}")]
    SizeLimitExceeded { size: u128, limit: u128 },
    #[error("coupling marginals disagree at index {0}")]
    MarginalMismatch(usize),
    #[error("net must be nonempty")]
    EmptyNet,
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("negative parameter {0}")]
    NegativeParameter(&'static str),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("constructed bound failed: {0}")]
    BoundViolated(String),
}
