//! The parameter triple of the Pólya photon distribution.

use serde::Serialize;

use crate::error::{PolyaError, Result};

/// Parameters `(M, gamma, eta)` of the Pólya distribution: `M` draws,
/// reinforcement strength `gamma >= 0`, success probability `eta` in
/// `[0, 1]`.
///
/// The boundary values `gamma = 0` and `eta` in `{0, 1}` are admitted so
/// that the binomial reduction and the degenerate point masses are
/// first-class values rather than unreachable limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyaParams {
    m: u32,
    gamma: f64,
    eta: f64,
}

impl PolyaParams {
    pub fn new(m: u32, gamma: f64, eta: f64) -> Result<Self> {
        if m == 0 {
            return Err(PolyaError::InvalidParams(
                "M must be a positive integer".into(),
            ));
        }
        Self::allowing_empty(m, gamma, eta)
    }

    /// Constructor that also admits `M = 0`, the image of annihilating a
    /// state `M` times; its pmf is the point mass at `n = 0`.
    pub(crate) fn allowing_empty(m: u32, gamma: f64, eta: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(PolyaError::InvalidParams(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )));
        }
        if !eta.is_finite() || !(0.0..=1.0).contains(&eta) {
            return Err(PolyaError::InvalidParams(format!(
                "eta must be finite and in [0, 1], got {eta}"
            )));
        }
        Ok(Self { m, gamma, eta })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The complementary probability `1 - eta`.
    pub fn eta_bar(&self) -> f64 {
        1.0 - self.eta
    }
}
