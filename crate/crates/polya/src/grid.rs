//! The canonical parameter grid driving the verification checks.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::PolyaParams;

/// Axis values whose Cartesian product forms the verification grid.
///
/// `m_algebra` is a separate list for the dense-matrix algebra checks; it
/// tops out at 50 so the matrix products stay cheap while still probing a
/// representation well beyond the toy sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub m_values: Vec<u32>,
    pub gamma_values: Vec<f64>,
    pub eta_values: Vec<f64>,
    pub m_algebra: Vec<u32>,
}

impl ParamGrid {
    /// The grid used by the stock `verify` run: 100 triples including
    /// `M = 100`, with all domain boundaries represented.
    pub fn standard() -> Self {
        Self {
            m_values: vec![1, 2, 5, 20, 100],
            gamma_values: vec![0.0, 0.01, 0.5, 5.0],
            eta_values: vec![0.0, 0.1, 0.5, 0.9, 1.0],
            m_algebra: vec![1, 2, 5, 20, 50],
        }
    }

    /// Every `(M, gamma, eta)` combination.
    pub fn triples(&self) -> Result<Vec<PolyaParams>> {
        self.product(&self.m_values, |_, _| true)
    }

    /// Combinations with `gamma > 0` and `0 < eta < 1`, where the ladder
    /// eigenvalue relation is non-degenerate.
    pub fn interior_triples(&self) -> Result<Vec<PolyaParams>> {
        self.product(&self.m_values, |g, e| g > 0.0 && e > 0.0 && e < 1.0)
    }

    /// Combinations over the algebra M list with `eta < 1` (the operator
    /// normalization is singular at `eta = 1`).
    pub fn algebra_triples(&self) -> Result<Vec<PolyaParams>> {
        self.product(&self.m_algebra, |_, e| e < 1.0)
    }

    fn product(&self, ms: &[u32], keep: impl Fn(f64, f64) -> bool) -> Result<Vec<PolyaParams>> {
        let mut out = Vec::new();
        for &m in ms {
            for &g in &self.gamma_values {
                for &e in &self.eta_values {
                    if keep(g, e) {
                        out.push(PolyaParams::new(m, g, e)?);
                    }
                }
            }
        }
        Ok(out)
    }
}
