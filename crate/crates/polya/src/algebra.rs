//! The two-parameter deformed oscillator generated by the Pólya states:
//! structure function, lowering/raising operators, residuals of the algebra
//! relations, and contraction diagnostics towards the su(2) and su(1,1)
//! endpoint algebras.
//!
//! Conventions: the number-dependent square root of the lowering operator is
//! written to the left of `a` and evaluated at the post-annihilation
//! occupation. That is the unique ordering for which `A+ A- = F(N)` holds,
//! giving `A-|n> = sqrt(F(n)) |n-1>`. Outside the `(M+1)`-dimensional
//! representation every matrix element is zero.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{PolyaError, Result};
use crate::fock::{polya_state, FockVector};
use crate::limits::{LimitKind, LimitSchedule, TargetPmf};
use crate::params::PolyaParams;

/// Structure function of the deformed oscillator.
///
/// `F(n) = n (M-n+1) (eta_bar + gamma M - gamma n)(eta + gamma n - gamma) /
/// [(1-eta)(gamma M + 1)(gamma M + eta)]`. At `gamma = 0` the expression
/// reduces algebraically to `n (M - n + 1)` and is returned in that form so
/// the su(2) endpoint is exact. `F(0)` and `F(M+1)` vanish exactly through
/// their integer factors.
pub fn structure_function(params: &PolyaParams, n: u32) -> Result<f64> {
    let m = params.m();
    if n > m + 1 {
        return Err(PolyaError::OutOfSupport {
            index: n,
            max: m + 1,
        });
    }
    let g = params.gamma();
    let e = params.eta();
    if g == 0.0 {
        if e == 1.0 {
            return Err(PolyaError::BsDegenerate);
        }
        return Ok(f64::from(n) * f64::from(m + 1 - n));
    }
    if e == 1.0 {
        return Err(PolyaError::SingularPrefactor);
    }
    let nf = f64::from(n);
    let mf = f64::from(m);
    let numer = nf * (mf - nf + 1.0) * (params.eta_bar() + g * mf - g * nf) * (e + g * nf - g);
    let denom = (1.0 - e) * (g * mf + 1.0) * (g * mf + e);
    Ok(numer / denom)
}

/// Tabulated structure-function values `F(0), ..., F(M+1)`.
#[derive(Debug, Clone)]
pub struct StructureFunctionTable {
    values: Vec<f64>,
    params: PolyaParams,
}

impl StructureFunctionTable {
    pub fn new(params: &PolyaParams) -> Result<Self> {
        let values = (0..=params.m() + 1)
            .map(|n| structure_function(params, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            values,
            params: *params,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, n: u32) -> f64 {
        self.values[n as usize]
    }

    pub fn params(&self) -> &PolyaParams {
        &self.params
    }
}

/// The normalization `gamma / sqrt((1-eta)(1+M gamma)(M gamma + eta))` of
/// the lowering operator; finite and positive for `gamma > 0`, `eta < 1`,
/// and zero at `gamma = 0` where the bare su(2) form takes over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoweringPrefactor {
    c: f64,
}

impl LoweringPrefactor {
    pub fn new(params: &PolyaParams) -> Result<Self> {
        if params.eta() == 1.0 {
            return Err(PolyaError::SingularPrefactor);
        }
        let g = params.gamma();
        if g == 0.0 {
            return Ok(Self { c: 0.0 });
        }
        let mf = f64::from(params.m());
        let e = params.eta();
        let c = g / ((1.0 - e) * (1.0 + mf * g) * (mf * g + e)).sqrt();
        Ok(Self { c })
    }

    pub fn value(&self) -> f64 {
        self.c
    }
}

/// Matrix element `<n-1| A- |n>`, evaluated from the explicit operator
/// form: prefactor times the number-dependent square root at the
/// post-annihilation occupation times the bosonic `sqrt(n)`. Agrees with
/// `sqrt(F(n))` from [`structure_function`] up to rounding; the two routes
/// are kept separate on purpose.
fn lowering_coefficient(params: &PolyaParams, n: u32) -> Result<f64> {
    let m = params.m();
    if n == 0 || n > m + 1 {
        return Ok(0.0);
    }
    let g = params.gamma();
    if g == 0.0 {
        if params.eta() == 1.0 {
            return Err(PolyaError::BsDegenerate);
        }
        return Ok(su2_lowering_coefficient(m, n));
    }
    let c = LoweringPrefactor::new(params)?.value();
    let mf = f64::from(m);
    let shifted = f64::from(n) - 1.0;
    let radical =
        (mf - shifted) * (params.eta_bar() / g + mf - shifted - 1.0) * (params.eta() / g + shifted);
    Ok(c * radical.sqrt() * f64::from(n).sqrt())
}

/// `<n-1| J-_M |n> = sqrt(n (M - n + 1))`, the su(2) lowering operator in
/// its number-dependent square-root realization.
pub fn su2_lowering_coefficient(m: u32, n: u32) -> f64 {
    if n == 0 || n > m + 1 {
        return 0.0;
    }
    (f64::from(n) * f64::from(m + 1 - n)).sqrt()
}

/// `<n-1| K-_k |n> = sqrt(n (k + n - 1))`, the su(1,1) lowering operator
/// with weight parameter `k` (here `lambda rho`).
pub fn su11_lowering_coefficient(k: f64, n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (f64::from(n) * (k + f64::from(n) - 1.0)).sqrt()
}

/// Apply the lowering operator: `out[n] = <n| A- |n+1> amps[n+1]`.
pub fn lowering_apply(params: &PolyaParams, v: &FockVector) -> Result<FockVector> {
    let dim = v.dim();
    let mut amps = vec![0.0; (dim - 1).max(1)];
    for (n, amp) in amps.iter_mut().enumerate().take(dim - 1) {
        *amp = lowering_coefficient(params, (n + 1) as u32)? * v.amp(n + 1);
    }
    FockVector::new(amps)
}

/// Apply the raising operator `A+ = (A-)^T`: `out[n] = <n-1| A- |n>
/// amps[n-1]`. The dimension grows by one; above the representation the
/// coefficients vanish, so `A+|M> = 0`.
pub fn raising_apply(params: &PolyaParams, v: &FockVector) -> Result<FockVector> {
    let dim = v.dim();
    let mut amps = vec![0.0; dim + 1];
    for (n, amp) in amps.iter_mut().enumerate().skip(1) {
        *amp = lowering_coefficient(params, n as u32)? * v.amp(n - 1);
    }
    FockVector::new(amps)
}

/// Max-abs residuals of the oscillator relations on the physical block
/// `n <= M`, from dense matrix arithmetic.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlgebraReport {
    /// `[N, A-] + A-`
    pub commutator_lowering: f64,
    /// `[N, A+] - A+`
    pub commutator_raising: f64,
    /// `A+ A- - F(N)`
    pub product_lowering: f64,
    /// `A- A+ - F(N+1)`
    pub product_raising: f64,
    /// Transitions leaving the span of `|0>..|M>`.
    pub leakage: f64,
}

impl AlgebraReport {
    pub fn max_residual(&self) -> f64 {
        self.commutator_lowering
            .max(self.commutator_raising)
            .max(self.product_lowering)
            .max(self.product_raising)
    }
}

/// Build dense `A-`, `A+`, `N` on a `dim`-dimensional truncation
/// (`dim >= M + 2`) and measure how well the algebra relations close.
pub fn verify_algebra(params: &PolyaParams, dim: usize) -> Result<AlgebraReport> {
    let m = params.m() as usize;
    if dim < m + 2 {
        return Err(PolyaError::InvalidParams(format!(
            "dim must be at least M + 2 = {}",
            m + 2
        )));
    }

    let mut lower = Array2::<f64>::zeros((dim, dim));
    for n in 1..dim {
        lower[(n - 1, n)] = lowering_coefficient(params, n as u32)?;
    }
    let raise = lower.t().to_owned();
    let mut number = Array2::<f64>::zeros((dim, dim));
    for n in 0..dim {
        number[(n, n)] = n as f64;
    }

    let comm_lower = number.dot(&lower) - lower.dot(&number) + &lower;
    let comm_raise = number.dot(&raise) - raise.dot(&number) - &raise;
    let prod_lower = raise.dot(&lower);
    let prod_raise = lower.dot(&raise);

    let table = StructureFunctionTable::new(params)?;
    let block_max = |f: &dyn Fn(usize, usize) -> f64| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..=m {
            for j in 0..=m {
                worst = worst.max(f(i, j).abs());
            }
        }
        worst
    };

    let commutator_lowering = block_max(&|i, j| comm_lower[(i, j)]);
    let commutator_raising = block_max(&|i, j| comm_raise[(i, j)]);
    let product_lowering = block_max(&|i, j| {
        let expected = if i == j { table.value(i as u32) } else { 0.0 };
        prod_lower[(i, j)] - expected
    });
    let product_raising = block_max(&|i, j| {
        let expected = if i == j {
            table.value(i as u32 + 1)
        } else {
            0.0
        };
        prod_raise[(i, j)] - expected
    });

    // anything mapping the block into n > M
    let mut leakage = 0.0f64;
    for i in m + 1..dim {
        for j in 0..=m {
            leakage = leakage.max(lower[(i, j)].abs()).max(raise[(i, j)].abs());
        }
    }

    Ok(AlgebraReport {
        commutator_lowering,
        commutator_raising,
        product_lowering,
        product_raising,
        leakage,
    })
}

/// Max-abs difference between the two sides of the ladder eigenvalue
/// relation satisfied by the Pólya state of `params`.
pub fn eigen_residual(params: &PolyaParams) -> Result<f64> {
    let g = params.gamma();
    let e = params.eta();
    if g <= 0.0 || e <= 0.0 || e >= 1.0 {
        return Err(PolyaError::InvalidParams(
            "the eigenvalue relation needs gamma > 0 and eta in (0, 1)".into(),
        ));
    }
    let m = params.m();
    let mf = f64::from(m);
    let psi = polya_state(params);
    let lowered = psi.annihilate();
    let mut worst = 0.0f64;
    for n in 0..=m as usize {
        let nf = n as f64;
        let lhs = if (n as u32) < m {
            let radical = (mf - nf) * (params.eta_bar() / g + mf - nf - 1.0) * (e / g + nf);
            g * radical.sqrt() * lowered.amp(n)
        } else {
            0.0
        };
        let rhs = (mf - nf) * (e + g * nf) * psi.amp(n);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Deviation of the lowering operator from the endpoint operator at one
/// schedule point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContractionPoint {
    pub params: PolyaParams,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub kind: LimitKind,
    pub window: u32,
    pub points: Vec<ContractionPoint>,
}

impl ContractionReport {
    pub fn final_deviation(&self) -> f64 {
        self.points.last().map(|p| p.deviation).unwrap_or(0.0)
    }

    /// True when the deviations strictly decrease over the last half of the
    /// schedule.
    pub fn tail_strictly_decreasing(&self) -> bool {
        let tail = &self.points[self.points.len() / 2..];
        tail.windows(2).all(|w| w[1].deviation < w[0].deviation)
    }

    /// Least-squares slope of `ln(deviation)` against `ln` of the driven
    /// scale (`gamma` for the BS walk, `1/M` for the NBS walk) over the
    /// last `count` points.
    pub fn tail_slope(&self, count: usize) -> f64 {
        let tail = &self.points[self.points.len().saturating_sub(count)..];
        let xy: Vec<(f64, f64)> = tail
            .iter()
            .map(|p| {
                let scale = match self.kind {
                    LimitKind::Bs => p.params.gamma(),
                    LimitKind::Nbs => 1.0 / f64::from(p.params.m()),
                };
                (scale.ln(), p.deviation.ln())
            })
            .collect();
        let n = xy.len() as f64;
        let sx: f64 = xy.iter().map(|(x, _)| x).sum();
        let sy: f64 = xy.iter().map(|(_, y)| y).sum();
        let sxx: f64 = xy.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = xy.iter().map(|(x, y)| x * y).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }
}

/// Compare the lowering-operator matrix, restricted to the window
/// `1 <= n <= window`, against the contraction target of the schedule:
/// `J-_M` for the BS walk and `K-_{lambda rho}` for the NBS walk.
pub fn contraction_diagnostic(schedule: &LimitSchedule, window: u32) -> Result<ContractionReport> {
    if window == 0 {
        return Err(PolyaError::InvalidParams(
            "window must be at least 1".into(),
        ));
    }
    let mut points = Vec::with_capacity(schedule.points().len());
    for params in schedule.points() {
        let top = window.min(params.m() + 1);
        let mut deviation = 0.0f64;
        for n in 1..=top {
            let ours = lowering_coefficient(params, n)?;
            let target = match schedule.target() {
                TargetPmf::Binomial { m, .. } => su2_lowering_coefficient(m, n),
                TargetPmf::NegativeBinomial { r, .. } => su11_lowering_coefficient(r, n),
                _ => {
                    return Err(PolyaError::InvalidSchedule(
                        "contraction targets are the binomial and negative-binomial walks".into(),
                    ))
                }
            };
            deviation = deviation.max((ours - target).abs());
        }
        points.push(ContractionPoint {
            params: *params,
            deviation,
        });
    }
    Ok(ContractionReport {
        kind: schedule.kind(),
        window,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(m: u32, gamma: f64, eta: f64) -> PolyaParams {
        PolyaParams::new(m, gamma, eta).unwrap()
    }

    #[test]
    fn structure_function_exact_zeros() {
        for &(m, g, e) in &[(5, 0.5, 0.3), (1, 2.0, 0.0), (20, 0.01, 0.9), (4, 0.0, 0.5)] {
            let p = params(m, g, e);
            assert_eq!(structure_function(&p, 0).unwrap(), 0.0);
            assert_eq!(structure_function(&p, m + 1).unwrap(), 0.0);
        }
    }

    #[test]
    fn structure_function_su2_limit() {
        // gamma -> 0 approaches n (M - n + 1); at gamma = 0 it is exact.
        let near = structure_function(&params(5, 1e-9, 0.3), 2).unwrap();
        assert_abs_diff_eq!(near, 8.0, epsilon = 1e-6);
        let at = structure_function(&params(5, 0.0, 0.3), 2).unwrap();
        assert_eq!(at, 8.0);
    }

    #[test]
    fn structure_function_deviation_is_first_order_in_gamma() {
        // |F(n; gamma) - n(M-n+1)| scales like gamma: doubling gamma
        // roughly doubles the deviation
        for &(m, e, n) in &[(5u32, 0.3, 2u32), (20, 0.9, 7), (2, 0.1, 1)] {
            let su2 = f64::from(n) * f64::from(m + 1 - n);
            let dev = |g: f64| (structure_function(&params(m, g, e), n).unwrap() - su2).abs();
            let ratio = dev(2e-6) / dev(1e-6);
            assert!(
                (ratio - 2.0).abs() < 0.1,
                "ratio = {ratio} for m={m} e={e} n={n}"
            );
        }
    }

    #[test]
    fn structure_function_nonnegative_inside() {
        for &(m, g, e) in &[(5, 0.5, 0.0), (20, 5.0, 0.9), (2, 0.01, 0.1), (7, 3.0, 0.5)] {
            let p = params(m, g, e);
            for n in 1..=m {
                let f = structure_function(&p, n).unwrap();
                assert!(f >= 0.0, "F({n}) = {f} for m={m} g={g} e={e}");
            }
        }
    }

    #[test]
    fn structure_function_degenerate_errors() {
        assert_eq!(
            structure_function(&params(3, 0.0, 1.0), 1).unwrap_err(),
            PolyaError::BsDegenerate
        );
        assert_eq!(
            structure_function(&params(3, 0.5, 1.0), 1).unwrap_err(),
            PolyaError::SingularPrefactor
        );
        assert!(structure_function(&params(3, 0.5, 0.5), 5).is_err());
    }

    #[test]
    fn lowering_matches_structure_function_route() {
        // explicit product form against sqrt(F(n)) for a number state
        let p = params(4, 0.5, 0.4);
        let three = FockVector::number_state(3, 5).unwrap();
        let lowered = lowering_apply(&p, &three).unwrap();
        let expected = structure_function(&p, 3).unwrap().sqrt();
        assert_abs_diff_eq!(lowered.amp(2), expected, epsilon = 1e-12);
        for n in [0usize, 1, 3] {
            assert_eq!(lowered.amp(n), 0.0);
        }
    }

    #[test]
    fn lowering_kills_vacuum() {
        let p = params(4, 0.5, 0.4);
        let vac = FockVector::vacuum(1).unwrap();
        assert_eq!(lowering_apply(&p, &vac).unwrap().amps(), &[0.0]);
    }

    #[test]
    fn raising_from_vacuum_and_top() {
        let p = params(4, 0.5, 0.4);
        let vac = FockVector::vacuum(1).unwrap();
        let raised = raising_apply(&p, &vac).unwrap();
        assert_abs_diff_eq!(
            raised.amp(1),
            structure_function(&p, 1).unwrap().sqrt(),
            epsilon = 1e-12
        );

        // A+|M> = F(M+1)|M+1> = 0, also when |M> sits in a larger truncation
        let top = FockVector::number_state(4, 7).unwrap();
        let raised_top = raising_apply(&p, &top).unwrap();
        assert_eq!(raised_top.norm(), 0.0);
    }

    #[test]
    fn raising_is_adjoint_of_lowering() {
        let p = params(5, 0.7, 0.3);
        let v = FockVector::new(vec![0.2, -0.4, 0.1, 0.5, -0.3, 0.6]).unwrap();
        let w = FockVector::new(vec![0.8, 0.3, -0.2, 0.4, 0.1, -0.7]).unwrap();
        let lhs = w.dot(&raising_apply(&p, &v).unwrap());
        let rhs = lowering_apply(&p, &w).unwrap().dot(&v);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn algebra_relations_close() {
        for &(m, g, e) in &[(3, 0.5, 0.5), (1, 2.0, 0.3), (5, 0.0, 0.4)] {
            let p = params(m, g, e);
            let report = verify_algebra(&p, m as usize + 2).unwrap();
            assert!(
                report.max_residual() <= 1e-11,
                "m={m} g={g} e={e}: {report:?}"
            );
            assert_eq!(report.leakage, 0.0);
        }
    }

    #[test]
    fn product_diagonal_is_structure_function() {
        let p = params(4, 0.8, 0.25);
        let dim = 6;
        // A+ A- applied to |n> must give F(n) |n>
        for n in 0..=4usize {
            let basis = FockVector::number_state(n, dim).unwrap();
            let cycled = raising_apply(&p, &lowering_apply(&p, &basis).unwrap()).unwrap();
            let f = structure_function(&p, n as u32).unwrap();
            assert_abs_diff_eq!(cycled.amp(n), f, epsilon = 1e-12);
        }
    }

    #[test]
    fn verify_algebra_needs_room() {
        assert!(verify_algebra(&params(3, 0.5, 0.5), 4).is_err());
    }

    #[test]
    fn eigen_residual_small_cases() {
        assert!(eigen_residual(&params(3, 0.5, 0.5)).unwrap() <= 1e-10);
        assert!(eigen_residual(&params(20, 0.1, 0.7)).unwrap() <= 1e-10);
        // the two-level case closes to machine precision
        assert!(eigen_residual(&params(1, 1.0, 0.5)).unwrap() <= 1e-12);
    }

    #[test]
    fn eigen_residual_rejects_degenerate() {
        assert!(eigen_residual(&params(3, 0.0, 0.5)).is_err());
        assert!(eigen_residual(&params(3, 0.5, 1.0)).is_err());
        assert!(eigen_residual(&params(3, 0.5, 0.0)).is_err());
    }

    #[test]
    fn bs_contraction_converges_first_order() {
        let schedule = LimitSchedule::bs(5, 0.3, 8).unwrap();
        let report = contraction_diagnostic(&schedule, 6).unwrap();
        assert!(report.tail_strictly_decreasing(), "{:?}", report.points);
        assert!(report.final_deviation() <= 1e-4);
        let slope = report.tail_slope(4);
        assert!((slope - 1.0).abs() <= 0.2, "slope = {slope}");
    }

    #[test]
    fn bs_contraction_at_gamma_zero_is_exact() {
        let schedule = LimitSchedule::bs_with_gammas(5, 0.3, &[0.0]).unwrap();
        let report = contraction_diagnostic(&schedule, 6).unwrap();
        assert_eq!(report.final_deviation(), 0.0);
    }

    #[test]
    fn nbs_contraction_decreases() {
        let schedule = LimitSchedule::nbs(1.0, 2.0, 3).unwrap();
        let report = contraction_diagnostic(&schedule, 8).unwrap();
        let devs: Vec<f64> = report.points.iter().map(|p| p.deviation).collect();
        for w in devs.windows(2) {
            assert!(w[1] < w[0], "{devs:?}");
        }
    }
}
