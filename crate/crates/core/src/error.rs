use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(i64),
    #[error("s = {s} does not satisfy s^2 = 1 (mod {n})")]
    InvalidTwist { n: i64, s: i64 },
    #[error("group order {0} exceeds the supported maximum of 64")]
    OrderTooLarge(usize),
    #[error("`{0}` is not an element of this group")]
    NotAnElement(String),
    #[error("cannot parse group spec `{0}`; expected `metacyclic:n=<N>,s=<S>` or `cyclic:m=<M>`")]
    BadSpec(String),
    #[error("operation requires C_n x_s C_2 with s^2 = 1 and s != +-1 (mod n), got {0}")]
    NotPaperMetacyclic(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("sequence is not a divisor of the sequence it is removed from")]
    NotADivisor,
    #[error("sequences live over groups of different orders ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl SequenceError {
    pub(crate) fn parse(token: &str, reason: impl Into<String>) -> Self {
        SequenceError::Parse { token: token.to_string(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("state budget exceeded: {needed} states needed, budget is {budget}")]
    StateBudgetExceeded { needed: u128, budget: u64 },
    #[error("brute-force oracle is limited to 8 terms, got {0}")]
    TooLongForOracle(usize),
    #[error("sequence length {len} does not match group order {order}")]
    WrongGroup { len: usize, order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("sequence has length {got}, expected n = {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Product(#[from] ProductError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("modulus {0} outside the supported range 3..=64")]
    Modulus(u32),
}
