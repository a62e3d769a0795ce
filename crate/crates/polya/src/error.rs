//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyaError {
    /// Parameter validation failed.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An index fell outside the supported range.
    #[error("index {index} outside the support 0..={max}")]
    OutOfSupport { index: u32, max: u32 },

    /// gamma = 0 together with eta = 1 leaves the structure function with a
    /// vanishing denominator (the degenerate corner of the binomial
    /// endpoint).
    #[error("BS-degenerate parameters: eta = 1 with gamma = 0")]
    BsDegenerate,

    /// eta = 1 makes the lowering-operator normalization infinite.
    #[error("eta = 1 makes the lowering-operator prefactor singular")]
    SingularPrefactor,

    /// A limit schedule violated its construction constraints.
    #[error("invalid limit schedule: {0}")]
    InvalidSchedule(String),
}

pub type Result<T> = std::result::Result<T, PolyaError>;
