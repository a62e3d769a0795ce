//! Photon-counting statistics and quadrature squeezing of the Pólya states.
//!
//! Every quantity comes in two flavours: the closed form and a brute-force
//! evaluation path (direct sums over the pmf, or ladder actions on the
//! state vector). The pairs are independent enough that their agreement is
//! a real consistency check, and the `verify` battery leans on it.
//!
//! The closed-form number variance carries the factor `(M gamma + 1)`; it
//! follows from the first two moments and is confirmed by the brute-force
//! route.

use serde::Serialize;

use crate::distributions::{polya_pmf, Pmf};
use crate::error::{PolyaError, Result};
use crate::fock::{apply_annihilation_power, polya_state};
use crate::params::PolyaParams;

/// Which evaluation path produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Source {
    ClosedForm,
    BruteForce,
}

/// First and second photon-number moments with Mandel's Q.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentReport {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub var_n: f64,
    /// `(var_n - mean_n) / mean_n`; NaN for the vacuum where the ratio is
    /// undefined.
    pub q_factor: f64,
    pub source: Source,
}

/// Closed-form moments: `<N> = M eta`, the second moment, the
/// `(M gamma + 1)` variance and the linear-in-eta Q factor.
pub fn moments_closed(params: &PolyaParams) -> MomentReport {
    let g = params.gamma();
    let e = params.eta();
    let mf = f64::from(params.m());
    let mean_n = mf * e;
    let mean_n2 = mean_n + mean_n * (mf - 1.0) * (e + g) / (1.0 + g);
    let var_n = mean_n * (mf * g + 1.0) * (1.0 - e) / (1.0 + g);
    let q_factor = ((mf - 1.0) * g - e * (mf * g + 1.0)) / (1.0 + g);
    MomentReport {
        mean_n,
        mean_n2,
        var_n,
        q_factor,
        source: Source::ClosedForm,
    }
}

/// Moments by direct summation over the pmf. The variance is a centered
/// second pass so no cancellation is lost against the closed form.
pub fn moments_brute(params: &PolyaParams) -> MomentReport {
    let pmf = polya_pmf(params);
    let mut mean_n = 0.0;
    let mut mean_n2 = 0.0;
    for (n, &p) in pmf.probs().iter().enumerate() {
        let nf = n as f64;
        mean_n += nf * p;
        mean_n2 += nf * nf * p;
    }
    let mut var_n = 0.0;
    for (n, &p) in pmf.probs().iter().enumerate() {
        let d = n as f64 - mean_n;
        var_n += d * d * p;
    }
    let q_factor = if mean_n == 0.0 {
        f64::NAN
    } else {
        (var_n - mean_n) / mean_n
    };
    MomentReport {
        mean_n,
        mean_n2,
        var_n,
        q_factor,
        source: Source::BruteForce,
    }
}

/// The eta where the Q line crosses zero: `(M - 1) gamma / (M gamma + 1)`.
/// Needs `m >= 1` and `gamma >= 0`.
pub fn q_zero_crossing(m: u32, gamma: f64) -> f64 {
    let mf = f64::from(m);
    (mf - 1.0) * gamma / (mf * gamma + 1.0)
}

/// Variance of the vacuum quadratures; anything below is squeezed.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Quadrature variances of `x = (a† + a)/sqrt(2)` and `p = i(a† - a)/sqrt(2)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureReport {
    pub var_x: f64,
    pub var_p: f64,
    pub product: f64,
    pub squeezed_x: bool,
    pub squeezed_p: bool,
    pub source: Source,
}

fn quadrature_report(var_x: f64, var_p: f64, source: Source) -> QuadratureReport {
    QuadratureReport {
        var_x,
        var_p,
        product: var_x * var_p,
        squeezed_x: var_x < VACUUM_VARIANCE,
        squeezed_p: var_p < VACUUM_VARIANCE,
        source,
    }
}

/// `<a^k>` from the closed k-fold annihilation: the scalar prefactor times
/// the overlap sum over square roots of the base pmf and the
/// parameter-shifted pmf. Empty sums (k > M) contribute zero.
fn ladder_moment_closed(params: &PolyaParams, pmf: &Pmf, k: u32) -> f64 {
    let action = apply_annihilation_power(params, k);
    match action.params {
        Some(mapped) if action.scalar != 0.0 => {
            let shifted = polya_pmf(&mapped);
            let overlap: f64 = shifted
                .probs()
                .iter()
                .zip(pmf.probs())
                .map(|(q, p)| (q * p).sqrt())
                .sum();
            action.scalar * overlap
        }
        _ => 0.0,
    }
}

/// Closed-form variances:
/// `var_x = 1/2 + <N> + <a^2> - 2 <a>^2` and `var_p = 1/2 + <N> - <a^2>`,
/// with `<a>` and `<a^2>` from the overlap sums of the shifted pmfs.
pub fn quadrature_closed(params: &PolyaParams) -> QuadratureReport {
    let pmf = polya_pmf(params);
    let mean_n = f64::from(params.m()) * params.eta();
    let mean_a = ladder_moment_closed(params, &pmf, 1);
    let mean_a2 = ladder_moment_closed(params, &pmf, 2);
    let var_x = 0.5 + mean_n + mean_a2 - 2.0 * mean_a * mean_a;
    let var_p = 0.5 + mean_n - mean_a2;
    quadrature_report(var_x, var_p, Source::ClosedForm)
}

/// Variances from matrix elements of the mode operators, by direct ladder
/// actions on the state vector.
pub fn quadrature_brute(params: &PolyaParams) -> QuadratureReport {
    let psi = polya_state(params);
    let a_psi = psi.annihilate();
    let aa_psi = a_psi.annihilate();
    let mean_n = psi.number_apply().dot(&psi);
    let mean_a = psi.dot(&a_psi);
    let mean_a2 = psi.dot(&aa_psi);
    let var_x = 0.5 + mean_n + mean_a2 - 2.0 * mean_a * mean_a;
    let var_p = 0.5 + mean_n - mean_a2;
    quadrature_report(var_x, var_p, Source::BruteForce)
}

/// Location and value of a grid minimum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridExtremum {
    pub value: f64,
    pub gamma: f64,
    pub eta: f64,
}

/// Dense closed-form quadrature evaluation over a `(gamma, eta)` grid.
#[derive(Debug, Clone, Serialize)]
pub struct SqueezeGrid {
    pub m: u32,
    pub gamma_axis: Vec<f64>,
    pub eta_axis: Vec<f64>,
    /// Row-major over `(gamma, eta)`.
    pub cells: Vec<QuadratureReport>,
    pub min_var_x: GridExtremum,
    pub min_var_p: GridExtremum,
}

impl SqueezeGrid {
    pub fn cell(&self, gamma_index: usize, eta_index: usize) -> &QuadratureReport {
        &self.cells[gamma_index * self.eta_axis.len() + eta_index]
    }

    /// All cells of one gamma row.
    pub fn row(&self, gamma_index: usize) -> &[QuadratureReport] {
        let w = self.eta_axis.len();
        &self.cells[gamma_index * w..(gamma_index + 1) * w]
    }
}

/// Evaluate [`quadrature_closed`] on every `(gamma, eta)` cell, tracking
/// the minima of both variances. Cells are independent; the evaluation
/// order (and therefore the result) is fixed row-major.
pub fn squeezing_scan(m: u32, gamma_axis: &[f64], eta_axis: &[f64]) -> Result<SqueezeGrid> {
    if gamma_axis.is_empty() || eta_axis.is_empty() {
        return Err(PolyaError::InvalidParams("empty scan axis".into()));
    }
    let mut cells = Vec::with_capacity(gamma_axis.len() * eta_axis.len());
    let mut min_x = GridExtremum {
        value: f64::INFINITY,
        gamma: gamma_axis[0],
        eta: eta_axis[0],
    };
    let mut min_p = min_x;
    for &g in gamma_axis {
        for &e in eta_axis {
            let params = PolyaParams::new(m, g, e)?;
            let cell = quadrature_closed(&params);
            if cell.var_x < min_x.value {
                min_x = GridExtremum {
                    value: cell.var_x,
                    gamma: g,
                    eta: e,
                };
            }
            if cell.var_p < min_p.value {
                min_p = GridExtremum {
                    value: cell.var_p,
                    gamma: g,
                    eta: e,
                };
            }
            cells.push(cell);
        }
    }
    Ok(SqueezeGrid {
        m,
        gamma_axis: gamma_axis.to_vec(),
        eta_axis: eta_axis.to_vec(),
        cells,
        min_var_x: min_x,
        min_var_p: min_p,
    })
}

/// Evenly spaced axis over `[lo, hi]` with `points` samples.
pub fn linear_axis(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (points as f64 - 1.0);
    (0..points).map(|i| lo + i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(m: u32, gamma: f64, eta: f64) -> PolyaParams {
        PolyaParams::new(m, gamma, eta).unwrap()
    }

    #[test]
    fn closed_mean_is_m_eta() {
        for g in [0.0, 0.5, 7.0] {
            assert_eq!(moments_closed(&params(5, g, 0.2)).mean_n, 1.0);
        }
    }

    #[test]
    fn q_endpoints() {
        // eta = 1 pins Q to -1 regardless of (M, gamma)
        for &(m, g) in &[(1u32, 0.0), (5, 0.5), (100, 5.0)] {
            let q = moments_closed(&params(m, g, 1.0)).q_factor;
            assert_abs_diff_eq!(q, -1.0, epsilon = 1e-14);
        }
        // a single draw is always sub-Poissonian with Q = -eta
        let q = moments_closed(&params(1, 3.0, 0.4)).q_factor;
        assert_abs_diff_eq!(q, -0.4, epsilon = 1e-15);
    }

    #[test]
    fn brute_uniform_and_degenerate_cases() {
        let uniform = moments_brute(&params(3, 0.5, 0.5));
        assert_abs_diff_eq!(uniform.mean_n, 1.5, epsilon = 1e-13);

        let vacuum = moments_brute(&params(4, 1.0, 0.0));
        assert_eq!(vacuum.mean_n, 0.0);
        assert_eq!(vacuum.var_n, 0.0);
        assert!(vacuum.q_factor.is_nan());

        let number = moments_brute(&params(2, 0.0, 1.0));
        assert_eq!(number.mean_n, 2.0);
        assert_eq!(number.var_n, 0.0);
    }

    #[test]
    fn closed_matches_brute() {
        for &(m, g, e) in &[
            (3, 0.5, 0.5),
            (20, 5.0, 0.9),
            (100, 0.01, 0.1),
            (7, 0.0, 0.6),
        ] {
            let c = moments_closed(&params(m, g, e));
            let b = moments_brute(&params(m, g, e));
            let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(1.0);
            assert!(rel(c.mean_n, b.mean_n) <= 1e-10);
            assert!(rel(c.mean_n2, b.mean_n2) <= 1e-10);
            assert!(rel(c.var_n, b.var_n) <= 1e-10, "m={m} g={g} e={e}");
        }
    }

    #[test]
    fn zero_crossing_values() {
        assert_eq!(q_zero_crossing(1, 17.0), 0.0);
        assert_eq!(q_zero_crossing(5, 0.5), 4.0 / 7.0);
        // gamma -> infinity approaches (M - 1) / M
        assert_abs_diff_eq!(q_zero_crossing(5, 1e8), 0.8, epsilon = 1e-7);
    }

    #[test]
    fn q_vanishes_at_the_crossing() {
        for &(m, g) in &[(5u32, 0.5), (20, 0.01), (100, 5.0)] {
            let eta = q_zero_crossing(m, g);
            let q = moments_closed(&params(m, g, eta)).q_factor;
            assert!(q.abs() <= 1e-13, "m={m} g={g}: q = {q}");
        }
    }

    #[test]
    fn quadrature_vacuum() {
        let closed = quadrature_closed(&params(5, 1.0, 0.0));
        assert_eq!(closed.var_x, 0.5);
        assert_eq!(closed.var_p, 0.5);
        let brute = quadrature_brute(&params(5, 1.0, 0.0));
        assert_eq!(brute.var_x, 0.5);
        assert_eq!(brute.var_p, 0.5);
    }

    #[test]
    fn quadrature_number_state() {
        // |M> has var_x = var_p = M + 1/2
        let closed = quadrature_closed(&params(5, 0.0, 1.0));
        assert_abs_diff_eq!(closed.var_x, 5.5, epsilon = 1e-12);
        assert_abs_diff_eq!(closed.var_p, 5.5, epsilon = 1e-12);
        let brute = quadrature_brute(&params(5, 0.0, 1.0));
        assert_abs_diff_eq!(brute.var_x, 5.5, epsilon = 1e-12);
        assert_abs_diff_eq!(brute.var_p, 5.5, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_two_level_hand_case() {
        // M = 1, eta = 1/2: <N> = 1/2, <a> = 1/2, <a^2> = 0, so
        // var_x = 1/2 and var_p = 1.
        let closed = quadrature_closed(&params(1, 2.0, 0.5));
        assert_abs_diff_eq!(closed.var_x, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(closed.var_p, 1.0, epsilon = 1e-12);
        let brute = quadrature_brute(&params(1, 2.0, 0.5));
        assert_abs_diff_eq!(brute.var_x, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(brute.var_p, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_closed_matches_brute() {
        for &(m, g, e) in &[
            (5, 0.0, 0.1),
            (5, 0.5, 0.2),
            (20, 5.0, 0.9),
            (100, 0.01, 0.5),
            (1, 2.0, 0.5),
            (2, 0.0, 1.0),
        ] {
            let c = quadrature_closed(&params(m, g, e));
            let b = quadrature_brute(&params(m, g, e));
            assert_abs_diff_eq!(c.var_x, b.var_x, epsilon = 1e-10);
            assert_abs_diff_eq!(c.var_p, b.var_p, epsilon = 1e-10);
        }
    }

    #[test]
    fn x_is_squeezed_at_small_eta_binomial_row() {
        let r = quadrature_closed(&params(5, 0.0, 0.1));
        assert!(r.var_x < VACUUM_VARIANCE, "var_x = {}", r.var_x);
        assert!(r.squeezed_x);
    }

    #[test]
    fn squeezing_scan_binomial_and_deformed_rows() {
        let etas = linear_axis(0.0, 1.0, 101);
        let grid = squeezing_scan(5, &[0.0, 0.5], &etas).unwrap();

        // gamma = 0: x squeezes somewhere, p nowhere
        let row0 = grid.row(0);
        assert!(row0.iter().any(|c| c.squeezed_x));
        assert!(row0.iter().all(|c| !c.squeezed_p));

        // moderate gamma: p squeezes somewhere
        let row1 = grid.row(1);
        assert!(row1.iter().any(|c| c.squeezed_p));

        assert!(grid.min_var_x.value < VACUUM_VARIANCE);
        assert_eq!(grid.cells.len(), 2 * 101);
    }

    #[test]
    fn scan_minimum_locations_are_recorded() {
        let grid = squeezing_scan(5, &[0.0], &linear_axis(0.0, 1.0, 11)).unwrap();
        let min_cell = grid
            .cells
            .iter()
            .map(|c| c.var_x)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(grid.min_var_x.value, min_cell);
        assert_eq!(grid.min_var_x.gamma, 0.0);
    }

    #[test]
    fn uncertainty_product_bounded_below() {
        for &(m, g, e) in &[(5, 0.0, 0.1), (5, 0.5, 0.2), (20, 5.0, 0.9), (1, 0.0, 0.5)] {
            let r = quadrature_closed(&params(m, g, e));
            assert!(r.product >= 0.25 - 1e-10, "product = {}", r.product);
        }
    }

    #[test]
    fn scan_rejects_empty_axes() {
        assert!(squeezing_scan(5, &[], &[0.1]).is_err());
        assert!(squeezing_scan(5, &[0.1], &[]).is_err());
    }
}
