use thiserror::Error;

use crate::site::Site;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state needs at least one qubit")]
    NoQubits,
    #[error("qubit count {n} does not match {labels} labels")]
    CountMismatch { n: usize, labels: usize },
    #[error("duplicate site {0}")]
    DuplicateSite(Site),
    #[error("unknown site {0}")]
    UnknownSite(Site),
    #[error("controlled phase needs two distinct sites, got {0} twice")]
    SelfLoop(Site),
    #[error("zero-probability branch at site {0}")]
    ImpossibleBranch(Site),
    #[error("label sets differ")]
    LabelMismatch,
    #[error("input state is not normalized (norm^2 = {0})")]
    Unnormalized(f64),
    #[error("expected {expected} input states, got {got}")]
    InputCount { expected: usize, got: usize },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("no phase for edge slot {0}")]
    UncoveredSlot(String),
    #[error("unknown phase slot {0}")]
    UnknownSlot(String),
    #[error("unknown layout {0}")]
    UnknownLayout(String),
    #[error("overlap violation: {0}")]
    OverlapViolation(String),
    #[error("role conflict at site {0}")]
    RoleConflict(Site),
    #[error("site {0} is not redundant")]
    NotRedundant(Site),
    #[error("missing measurement outcome for site {0}")]
    MissingOutcome(Site),
    #[error("missing angle parameter {0}")]
    MissingParam(String),
    #[error("out-of-order angle query: {0}")]
    OutOfOrder(String),
    #[error("chain length {0} is not supported here")]
    BadChainLength(usize),
    #[error("frame cannot absorb a non-adapted rotation at site {0}")]
    NonAdaptedRotation(Site),
    #[error("layout has no block structure for staged execution")]
    NotConcatenated,
    #[error("budget exceeded: {needed} evaluations requested, cap is {cap}")]
    BudgetExceeded { needed: u64, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("layout parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
