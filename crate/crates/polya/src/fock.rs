//! Truncated Fock-space vectors and the elementary mode operators.

use crate::distributions::polya_pmf;
use crate::error::{PolyaError, Result};
use crate::params::PolyaParams;

/// Real amplitudes on the truncated number basis `|0>, ..., |dim-1>`.
///
/// Amplitudes of states built from a pmf are the positive square roots of
/// the probabilities, so no phase bookkeeping is carried.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<f64>,
}

impl FockVector {
    pub fn new(amps: Vec<f64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(PolyaError::InvalidParams(
                "a Fock vector needs at least one amplitude".into(),
            ));
        }
        if amps.iter().any(|a| !a.is_finite()) {
            return Err(PolyaError::InvalidParams(
                "Fock amplitudes must be finite".into(),
            ));
        }
        Ok(Self { amps })
    }

    /// The basis vector `|n>` in a space of dimension `dim`.
    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(PolyaError::InvalidParams(format!(
                "number state {n} does not fit in dimension {dim}"
            )));
        }
        let mut amps = vec![0.0; dim];
        amps[n] = 1.0;
        Ok(Self { amps })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::number_state(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    /// Amplitude at `n`, zero beyond the truncation.
    pub fn amp(&self, n: usize) -> f64 {
        self.amps.get(n).copied().unwrap_or(0.0)
    }

    /// Apply the annihilation operator: `out[n] = sqrt(n+1) amps[n+1]`.
    /// The dimension shrinks by one but never below 1, so no amplitude is
    /// ever cut off.
    pub fn annihilate(&self) -> FockVector {
        if self.amps.len() == 1 {
            return FockVector { amps: vec![0.0] };
        }
        let amps = (1..self.amps.len())
            .map(|n| (n as f64).sqrt() * self.amps[n])
            .collect();
        FockVector { amps }
    }

    /// Apply the creation operator: `out[n] = sqrt(n) amps[n-1]`; the
    /// dimension grows by one.
    pub fn create(&self) -> FockVector {
        let mut amps = Vec::with_capacity(self.amps.len() + 1);
        amps.push(0.0);
        for n in 1..=self.amps.len() {
            amps.push((n as f64).sqrt() * self.amps[n - 1]);
        }
        FockVector { amps }
    }

    /// Apply the number operator: `out[n] = n amps[n]`.
    pub fn number_apply(&self) -> FockVector {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a)
            .collect();
        FockVector { amps }
    }

    /// Euclidean pairing over the common dimension; the shorter vector is
    /// zero-padded.
    pub fn dot(&self, other: &FockVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute difference against another vector, zero-padding the
    /// shorter one.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let len = self.amps.len().max(other.amps.len());
        (0..len)
            .map(|n| (self.amp(n) - other.amp(n)).abs())
            .fold(0.0, f64::max)
    }
}

/// The normalized state whose number distribution is the Pólya pmf; the
/// amplitudes are the positive square roots of the probabilities.
pub fn polya_state(params: &PolyaParams) -> FockVector {
    let pmf = polya_pmf(params);
    FockVector {
        amps: pmf.probs().iter().map(|p| p.sqrt()).collect(),
    }
}

/// Closed form of the k-fold annihilation of a Pólya state.
///
/// For `k <= M` the result is `scalar` times the Pólya state with the
/// mapped parameters `(M - k, gamma / (k gamma + 1), (k gamma + eta) /
/// (k gamma + 1))`. For `k > M` the operator wipes the state out: the
/// scalar is 0 and no residual parameters exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnihilationPower {
    pub scalar: f64,
    pub params: Option<PolyaParams>,
}

pub fn apply_annihilation_power(params: &PolyaParams, k: u32) -> AnnihilationPower {
    let m = params.m();
    if k > m {
        return AnnihilationPower {
            scalar: 0.0,
            params: None,
        };
    }
    let g = params.gamma();
    let e = params.eta();
    // scalar^2 = prod_{i=0}^{k-1} (M - i) (i gamma + eta) / (i gamma + 1);
    // each step removes one draw and tilts the remaining parameters.
    let mut product = 1.0;
    for i in 0..k {
        let ig = f64::from(i) * g;
        product *= f64::from(m - i) * ((ig + e) / (ig + 1.0));
    }
    let kg = f64::from(k) * g;
    let eta_k = ((kg + e) / (kg + 1.0)).min(1.0);
    let mapped = PolyaParams::allowing_empty(m - k, g / (kg + 1.0), eta_k)
        .expect("annihilation keeps parameters in the valid domain");
    AnnihilationPower {
        scalar: product.sqrt(),
        params: Some(mapped),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(m: u32, gamma: f64, eta: f64) -> PolyaParams {
        PolyaParams::new(m, gamma, eta).unwrap()
    }

    #[test]
    fn polya_state_uniform_case() {
        let v = polya_state(&params(3, 0.5, 0.5));
        for n in 0..4 {
            assert_abs_diff_eq!(v.amp(n), 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn polya_state_degenerate_endpoints() {
        // eta = 0 is the vacuum, eta = 1 (gamma = 0) the top number state.
        assert_eq!(
            polya_state(&params(4, 1.0, 0.0)).amps(),
            &[1.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(polya_state(&params(2, 0.0, 1.0)).amps(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn annihilate_vacuum_and_number_state() {
        let vac = FockVector::vacuum(1).unwrap();
        assert_eq!(vac.annihilate().amps(), &[0.0]);

        let three = FockVector::number_state(3, 4).unwrap();
        let lowered = three.annihilate();
        assert_eq!(lowered.dim(), 3);
        assert_abs_diff_eq!(lowered.amp(2), 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn create_and_number_ladder() {
        let vac = FockVector::vacuum(1).unwrap();
        let one = vac.create();
        assert_eq!(one.amps(), &[0.0, 1.0]);

        let two = FockVector::number_state(2, 3).unwrap();
        let counted = two.number_apply();
        assert_eq!(counted.amps(), &[0.0, 0.0, 2.0]);
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let v = FockVector::new(vec![0.3, -0.1, 0.7, 0.2, -0.5]).unwrap();
        let w = FockVector::new(vec![0.9, 0.4, -0.6, 0.1]).unwrap();
        let lhs = v.dot(&w.create());
        let rhs = v.annihilate().dot(&w);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-13);
    }

    #[test]
    fn orthonormal_basis_pairing() {
        let two = FockVector::number_state(2, 5).unwrap();
        let three = FockVector::number_state(3, 5).unwrap();
        assert_eq!(two.dot(&three), 0.0);
        assert_eq!(two.dot(&two), 1.0);
    }

    #[test]
    fn annihilation_power_identity_and_zero() {
        let p = params(3, 0.5, 0.5);

        let id = apply_annihilation_power(&p, 0);
        assert_eq!(id.scalar, 1.0);
        assert_eq!(id.params, Some(p));

        let wiped = apply_annihilation_power(&p, 4);
        assert_eq!(wiped.scalar, 0.0);
        assert_eq!(wiped.params, None);
    }

    #[test]
    fn annihilation_power_single_step_oracle() {
        // Repeated-annihilate oracle: a|psi> must equal scalar times the
        // state of the mapped parameters. For the uniform M = 3 case the
        // scalar squares to <N> = 1.5.
        let p = params(3, 0.5, 0.5);
        let action = apply_annihilation_power(&p, 1);
        assert_abs_diff_eq!(action.scalar, 1.5f64.sqrt(), epsilon = 1e-15);

        let mapped = action.params.unwrap();
        assert_eq!(mapped.m(), 2);
        assert_abs_diff_eq!(mapped.gamma(), 0.5 / 1.5, epsilon = 1e-16);
        assert_abs_diff_eq!(mapped.eta(), 1.0 / 1.5, epsilon = 1e-16);

        let lowered = polya_state(&p).annihilate();
        let mut expected = polya_state(&mapped);
        expected =
            FockVector::new(expected.amps().iter().map(|a| a * action.scalar).collect()).unwrap();
        assert!(lowered.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn annihilation_power_full_depth() {
        // k = M empties the register; the mapped pmf is the point mass of
        // an M = 0 register and the scalar matches norm(a^M |psi>).
        let p = params(3, 0.5, 0.5);
        let action = apply_annihilation_power(&p, 3);
        let mapped = action.params.unwrap();
        assert_eq!(mapped.m(), 0);

        let mut v = polya_state(&p);
        for _ in 0..3 {
            v = v.annihilate();
        }
        assert_eq!(v.dim(), 1);
        assert_abs_diff_eq!(v.amp(0), action.scalar, epsilon = 1e-12);
        assert_eq!(polya_state(&mapped).amps(), &[1.0]);
    }

    #[test]
    fn mapped_parameters_stay_valid() {
        for &(m, g, e) in &[(5, 0.0, 0.0), (5, 0.0, 1.0), (20, 5.0, 0.9), (7, 0.01, 0.1)] {
            let p = params(m, g, e);
            for k in 0..=m {
                let action = apply_annihilation_power(&p, k);
                let mapped = action.params.unwrap();
                assert!(mapped.gamma() >= 0.0);
                assert!((0.0..=1.0).contains(&mapped.eta()));
            }
        }
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(FockVector::new(vec![]).is_err());
        assert!(FockVector::new(vec![f64::NAN]).is_err());
        assert!(FockVector::number_state(3, 3).is_err());
    }
}
