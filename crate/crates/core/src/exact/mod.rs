//! Exact scalars, dense tensors and rational linear algebra.

mod linalg;
mod rational;
mod tensor;

use thiserror::Error;

pub use linalg::{dot, minimal_norm, null_space, LinearSystem, Matrix, SolutionSet};
pub use rational::{q, qf, Rational};
pub use tensor::{Tensor, Variance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid rational {0:?}: expected an integer \"k\" or a fraction \"p/q\"")]
    ParseRational(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("variance mismatch: {0}")]
    VarianceMismatch(String),
    #[error("slot {slot} out of range for a rank-{rank} tensor")]
    SlotOutOfRange { rank: usize, slot: usize },
    #[error("metric is not symmetric")]
    NotSymmetric,
    #[error("singular matrix: rank {rank} < {dim}")]
    Singular { rank: usize, dim: usize },
}
