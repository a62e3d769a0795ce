//! Numerics for single-mode radiation states whose photon-number statistics
//! follow the Pólya distribution.
//!
//! The crate covers, in order of construction:
//!
//! - [`distributions`]: log-space evaluation of the Pólya pmf and its
//!   binomial / negative-binomial limit families, plus total variation.
//! - [`fock`]: truncated Fock-space vectors, the mode operators `a`, `a†`,
//!   `N`, state construction from the pmf, and the closed form of `a^k`
//!   acting on such a state.
//! - [`algebra`]: the two-parameter deformed oscillator the states satisfy
//!   a ladder eigenvalue relation for — structure function, lowering and
//!   raising operators, algebra-relation residuals, and the contraction
//!   diagnostics towards the su(2) and su(1,1) endpoints.
//! - [`statistics`]: photon-counting moments, the Mandel Q line, and the
//!   quadrature variances, each with a closed form and an independent
//!   brute-force evaluation path.
//! - [`limits`]: parameter schedules driving the binomial and
//!   negative-binomial limits together with convergence measurements.
//! - [`urn`]: a seeded Monte Carlo sampler of the reinforced-urn scheme,
//!   acting as a stochastic oracle for the exact pmf.
//! - [`verify`]: the end-to-end check battery over a parameter grid, used
//!   by the command-line `verify` front end.

pub mod algebra;
pub mod distributions;
pub mod error;
pub mod fock;
pub mod grid;
pub mod limits;
pub mod params;
pub mod statistics;
pub mod urn;
pub mod verify;

pub use error::{PolyaError, Result};
pub use params::PolyaParams;
