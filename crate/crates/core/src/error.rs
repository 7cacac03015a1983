use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be nonincreasing and nonnegative")]
    InvalidPartition(String),

    #[error("cut ({k}, {l}) exceeds the diagonal length {d}")]
    CutTooDeep { k: usize, l: usize, d: usize },

    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("rank {n} is too small, need at least {needed}")]
    RankTooSmall { n: usize, needed: usize },

    #[error("rank {n} exceeds the oracle ceiling {max} for {group}")]
    RankCeiling { group: String, n: usize, max: usize },

    #[error("{inner} is not contained in {outer}")]
    NotContained { outer: String, inner: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("C_{0} is requested for an osp character; only even indices are defined")]
    OddIndexForOsp(usize),

    #[error("weight {0:?} is not dominant")]
    NonDominant(Vec<i64>),

    #[error("characters belong to different series")]
    SeriesMismatch,

    #[error("index sets {0:?} and {1:?} overlap")]
    OverlappingIndexSets(Vec<usize>, Vec<usize>),

    #[error("index sets must have equal size, got {0} and {1}")]
    IndexSetSize(usize, usize),

    #[error("index {index} is outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("operator and space disagree: {0}")]
    DimensionMismatch(String),

    #[error("{0} is not an active coset of the family")]
    InactiveCoset(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("unsupported module operation: {0}")]
    Unsupported(String),
}
