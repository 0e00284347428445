use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group needs at least one cyclic factor")]
    EmptyModuli,
    #[error("cyclic factor Z{0} is not allowed (every modulus must be at least 2)")]
    ModulusTooSmall(u64),
    #[error("group order {order} exceeds the order cap {cap}")]
    OrderCapExceeded { order: u64, cap: usize },
    #[error("element has rank {got}, group has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element {0} does not belong to the group")]
    ElementOutOfGroup(String),
    #[error("the identity element cannot appear in a candidate zero-sum free sequence")]
    ZeroElementRejected,
    #[error("sequences are over different groups")]
    GroupMismatch,
    #[error("not a subsequence")]
    NotASubsequence,
    #[error("sequence of length {0} is too large for the exhaustive oracle (limit {1})")]
    TooLargeForOracle(usize, usize),
    #[error("unknown lemma id `{0}`")]
    UnknownLemmaId(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
