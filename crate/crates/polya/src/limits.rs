//! Parameter schedules for the binomial and negative-binomial limits and
//! total-variation convergence measurements along them.

use serde::Serialize;

use crate::distributions::{
    binomial_pmf, negative_binomial_pmf, polya_pmf, total_variation, NegBinParams,
};
use crate::error::{PolyaError, Result};
use crate::params::PolyaParams;

/// Tail mass below which a target pmf with unbounded support is truncated.
pub const TARGET_TAIL_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitKind {
    /// gamma -> 0 at fixed (M, eta); the binomial endpoint.
    Bs,
    /// M -> infinity with M eta and M gamma fixed; the negative-binomial
    /// endpoint.
    Nbs,
}

/// The pmf a schedule converges to. The point-mass, Poisson and geometric
/// targets name the deeper endpoint distributions reached through iterated
/// limits; they are compared at the distribution level only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TargetPmf {
    Binomial { m: u32, eta: f64 },
    NegativeBinomial { r: f64, p: f64 },
    PointMass { n: u32 },
    Poisson { lambda: f64 },
    Geometric { p: f64 },
}

impl TargetPmf {
    /// The target probabilities, truncated at `support_cap + 1` entries or
    /// where the remaining tail mass drops below [`TARGET_TAIL_CUTOFF`],
    /// whichever comes first.
    pub fn pmf(&self, support_cap: u32) -> Result<Vec<f64>> {
        match *self {
            TargetPmf::Binomial { m, eta } => (0..=m.min(support_cap))
                .map(|n| binomial_pmf(m, eta, n))
                .collect(),
            TargetPmf::NegativeBinomial { r, p } => {
                let nb = NegBinParams::new(r, p)?;
                Ok(truncate_tail(support_cap, |n| {
                    negative_binomial_pmf(&nb, n)
                }))
            }
            TargetPmf::PointMass { n } => {
                if n > support_cap {
                    return Err(PolyaError::InvalidParams(format!(
                        "point mass at {n} exceeds the support cap {support_cap}"
                    )));
                }
                let mut probs = vec![0.0; n as usize + 1];
                probs[n as usize] = 1.0;
                Ok(probs)
            }
            TargetPmf::Poisson { lambda } => {
                if !lambda.is_finite() || lambda <= 0.0 {
                    return Err(PolyaError::InvalidParams(format!(
                        "Poisson rate must be finite and > 0, got {lambda}"
                    )));
                }
                Ok(truncate_tail(support_cap, |n| {
                    let nf = f64::from(n);
                    (nf * lambda.ln() - lambda - statrs::function::gamma::ln_gamma(nf + 1.0)).exp()
                }))
            }
            TargetPmf::Geometric { p } => {
                let nb = NegBinParams::new(1.0, p)?;
                Ok(truncate_tail(support_cap, |n| {
                    negative_binomial_pmf(&nb, n)
                }))
            }
        }
    }
}

fn truncate_tail(support_cap: u32, prob: impl Fn(u32) -> f64) -> Vec<f64> {
    let mut probs = Vec::new();
    let mut cum = 0.0;
    for n in 0..=support_cap {
        let q = prob(n);
        probs.push(q);
        cum += q;
        if 1.0 - cum < TARGET_TAIL_CUTOFF {
            break;
        }
    }
    probs
}

/// An ordered walk of parameter triples driving one of the two limits.
#[derive(Debug, Clone, Serialize)]
pub struct LimitSchedule {
    kind: LimitKind,
    points: Vec<PolyaParams>,
    target: TargetPmf,
}

impl LimitSchedule {
    /// Geometric schedule `gamma = 10^-1, ..., 10^-num_points` at fixed
    /// `(M, eta)`.
    pub fn bs(m: u32, eta: f64, num_points: u32) -> Result<Self> {
        if num_points < 2 {
            return Err(PolyaError::InvalidSchedule(
                "a schedule needs at least two points".into(),
            ));
        }
        let gammas: Vec<f64> = (1..=num_points).map(|i| 10f64.powi(-(i as i32))).collect();
        Self::bs_with_gammas(m, eta, &gammas)
    }

    /// Explicit gamma walk at fixed `(M, eta)`; also covers degenerate
    /// single-point schedules such as `gamma = 0` exactly.
    pub fn bs_with_gammas(m: u32, eta: f64, gammas: &[f64]) -> Result<Self> {
        if gammas.is_empty() {
            return Err(PolyaError::InvalidSchedule("empty gamma schedule".into()));
        }
        let points = gammas
            .iter()
            .map(|&g| PolyaParams::new(m, g, eta))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| PolyaError::InvalidSchedule(e.to_string()))?;
        Ok(Self {
            kind: LimitKind::Bs,
            points,
            target: TargetPmf::Binomial { m, eta },
        })
    }

    /// Geometric schedule `M = 10, 100, ...` with `eta = lambda / M` and
    /// `gamma = 1 / (M rho)` held to the limit constraint exactly.
    pub fn nbs(lambda: f64, rho: f64, num_points: u32) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(PolyaError::InvalidSchedule(format!(
                "lambda must be finite and > 0, got {lambda}"
            )));
        }
        if !rho.is_finite() || rho <= 0.0 {
            return Err(PolyaError::InvalidSchedule(format!(
                "rho must be finite and > 0, got {rho}"
            )));
        }
        if num_points < 2 {
            return Err(PolyaError::InvalidSchedule(
                "a schedule needs at least two points".into(),
            ));
        }
        let mut points = Vec::with_capacity(num_points as usize);
        for i in 1..=num_points {
            let m = 10u32.checked_pow(i).ok_or_else(|| {
                PolyaError::InvalidSchedule(format!("schedule point 10^{i} overflows"))
            })?;
            let mf = f64::from(m);
            let params = PolyaParams::new(m, 1.0 / (mf * rho), lambda / mf)
                .map_err(|e| PolyaError::InvalidSchedule(e.to_string()))?;
            points.push(params);
        }
        Ok(Self {
            kind: LimitKind::Nbs,
            points,
            target: TargetPmf::NegativeBinomial {
                r: lambda * rho,
                p: 1.0 / (1.0 + rho),
            },
        })
    }

    pub fn kind(&self) -> LimitKind {
        self.kind
    }

    pub fn points(&self) -> &[PolyaParams] {
        &self.points
    }

    pub fn target(&self) -> TargetPmf {
        self.target
    }
}

/// Distance to the target at one schedule point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergencePoint {
    pub params: PolyaParams,
    pub tv_distance: f64,
}

/// Total-variation distance between the pmf at each schedule point and the
/// schedule's target pmf.
pub fn convergence_report(
    schedule: &LimitSchedule,
    support_cap: u32,
) -> Result<Vec<ConvergencePoint>> {
    if support_cap < 1 {
        return Err(PolyaError::InvalidParams(
            "support_cap must be at least 1".into(),
        ));
    }
    let target = schedule.target().pmf(support_cap)?;
    Ok(schedule
        .points()
        .iter()
        .map(|p| ConvergencePoint {
            params: *p,
            tv_distance: total_variation(polya_pmf(p).probs(), &target),
        })
        .collect())
}
