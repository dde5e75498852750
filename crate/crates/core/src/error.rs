use core::fmt;

/// Errors raised by the core building blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objective vectors (or a vector and an archive) disagree on `m`.
    DimensionMismatch { expected: usize, found: usize },
    /// An operation that needs at least one vector received none.
    EmptySet,
    /// A genotype does not match the encoding or length a problem expects.
    EncodingMismatch,
    /// A permutation is not a bijection on `0..D`.
    InvalidPermutation,
    /// Problem parameters that cannot produce a valid instance.
    InvalidParameters(&'static str),
    /// An NK landscape needs more bits than interacting neighbours.
    InteractionOrderTooLarge { k: usize, dim: usize },
    /// A knapsack genotype exceeds at least one capacity.
    Infeasible,
    /// Delta evaluation was requested for a move the problem does not support.
    UnsupportedMove,
    /// Exact hypervolume is only available for two objectives.
    HypervolumeDimension(usize),
    /// A front handed to the contribution routine contains a dominated member.
    DominatedMember,
    /// The evaluation budget was exhausted.
    BudgetExhausted,
    /// Algorithm configuration that cannot run.
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "objective dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptySet => f.write_str("empty set"),
            Error::EncodingMismatch => f.write_str("genotype does not match the problem encoding"),
            Error::InvalidPermutation => f.write_str("genotype is not a valid permutation"),
            Error::InvalidParameters(msg) => write!(f, "invalid parameters: {msg}"),
            Error::InteractionOrderTooLarge { k, dim } => {
                write!(f, "K must be < D (K = {k}, D = {dim})")
            }
            Error::Infeasible => f.write_str("evaluate requires feasible genotype"),
            Error::UnsupportedMove => f.write_str("delta evaluation is not supported for this problem/move"),
            Error::HypervolumeDimension(m) => {
                write!(f, "exact HV implemented for m=2 only (got m={m})")
            }
            Error::DominatedMember => f.write_str("front must be non-dominated"),
            Error::BudgetExhausted => f.write_str("evaluation budget exhausted"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
