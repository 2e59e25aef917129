//! Multiplicative and additive inference-variance criteria.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measurement::{inference_variance, inferred_abs_mean, measure_joint, JointDistribution};
use crate::scalar::Real;
use crate::spin::Spin;
use crate::state::{BipartiteState, Observable, Subsystem};

use super::{check_commutation, CriterionResult, Direction, InferencePair, InferencePlan};

/// Statistics of one inference pair on a state.
#[derive(Debug, Clone)]
pub struct PairStatistics<T: Real> {
    pub joint: JointDistribution<T>,
    pub inference_variance: T,
    pub abs_mean_inf: T,
}

impl<T: Real> PairStatistics<T> {
    pub fn compute(state: &BipartiteState<T>, pair: &InferencePair<T>) -> Result<Self> {
        let joint = measure_joint(state, &pair.alice, &pair.bob)?;
        Ok(Self {
            inference_variance: inference_variance(&joint, &pair.estimator)?,
            abs_mean_inf: inferred_abs_mean(&joint),
            joint,
        })
    }

    fn conditional_mean_details(&self, tag: &str) -> Vec<(String, T)> {
        self.joint
            .conditional_means()
            .iter()
            .zip(self.joint.a_values())
            .filter_map(|(m, a)| m.map(|m| (format!("mean_{tag}_given_a={a}"), m)))
            .collect()
    }
}

fn triple_stats<T: Real>(state: &BipartiteState<T>, plan: &InferencePlan<T>) -> Result<[PairStatistics<T>; 3]> {
    plan.require(3)?;
    let obs = plan.bob_observables();
    let labels: Vec<&str> = plan.pairs.iter().map(|p| p.bob.label()).collect();
    check_commutation([labels[0], labels[1], labels[2]], &obs[0], &obs[1], &obs[2])?;
    Ok([
        PairStatistics::compute(state, &plan.pairs[0])?,
        PairStatistics::compute(state, &plan.pairs[1])?,
        PairStatistics::compute(state, &plan.pairs[2])?,
    ])
}

/// Δ_inf B₁·Δ_inf B₂ ≥ ½|⟨B₃⟩|_inf for [b₁, b₂] = i b₃.
pub fn eval_product_criterion<T: Real>(state: &BipartiteState<T>, plan: &InferencePlan<T>) -> Result<CriterionResult<T>> {
    let [s1, s2, s3] = triple_stats(state, plan)?;
    let lhs = s1.inference_variance.sqrt() * s2.inference_variance.sqrt();
    let bound = T::lit(0.5) * s3.abs_mean_inf;
    Ok(CriterionResult::new("product-spin", lhs, bound, Direction::ViolatedIfLhsBelow)
        .with_detail("var_inf_b1", s1.inference_variance)
        .with_detail("var_inf_b2", s2.inference_variance)
        .with_detail("abs_mean_inf_b3", s3.abs_mean_inf)
        .with_details(s3.conditional_mean_details("b3")))
}

/// As [`eval_product_criterion`] with the unconditional ½|⟨B₃⟩| as bound.
pub fn eval_bowen<T: Real>(state: &BipartiteState<T>, plan: &InferencePlan<T>) -> Result<CriterionResult<T>> {
    let [s1, s2, _] = triple_stats(state, plan)?;
    let b3 = plan.pairs[2].bob.observable();
    let mean_b3 = state.reduced(Subsystem::B).expectation(&b3)?;
    let lhs = s1.inference_variance.sqrt() * s2.inference_variance.sqrt();
    let bound = T::lit(0.5) * mean_b3.abs();
    Ok(CriterionResult::new("bowen", lhs, bound, Direction::ViolatedIfLhsBelow)
        .with_detail("var_inf_b1", s1.inference_variance)
        .with_detail("var_inf_b2", s2.inference_variance)
        .with_detail("mean_b3", mean_b3))
}

/// Δ²_inf B₁ + Δ²_inf B₂ ≥ |⟨B₃⟩|_inf.
pub fn eval_additive_sum_two<T: Real>(state: &BipartiteState<T>, plan: &InferencePlan<T>) -> Result<CriterionResult<T>> {
    let [s1, s2, s3] = triple_stats(state, plan)?;
    let lhs = s1.inference_variance + s2.inference_variance;
    Ok(CriterionResult::new("sum-two", lhs, s3.abs_mean_inf, Direction::ViolatedIfLhsBelow)
        .with_detail("var_inf_b1", s1.inference_variance)
        .with_detail("var_inf_b2", s2.inference_variance)
        .with_detail("abs_mean_inf_b3", s3.abs_mean_inf)
        .with_details(s3.conditional_mean_details("b3")))
}

/// Checks that three observables satisfy the su(2) relations of spin `spin`:
/// cyclic commutators and the Casimir j(j+1).
pub(super) fn check_spin_triple<T: Real>(labels: &[&str], obs: &[Observable<T>], spin: Spin) -> Result<()> {
    if obs.len() != 3 || obs.iter().any(|o| o.dim() != spin.dim()) {
        return Err(Error::DimensionMismatch {
            context: "spin-j subsystem",
            expected: spin.dim(),
            found: obs.first().map_or(0, |o| o.dim()),
        });
    }
    for k in 0..3 {
        let (a, b, c) = (k, (k + 1) % 3, (k + 2) % 3);
        check_commutation([labels[a], labels[b], labels[c]], &obs[a], &obs[b], &obs[c])?;
    }
    let j = spin.value::<T>();
    let casimir = obs
        .iter()
        .map(|o| o.square().into_matrix())
        .fold(ComplexMatrix::zeros(spin.dim(), spin.dim()), |acc, m| &acc + &m);
    let residual = casimir.max_abs_diff(&ComplexMatrix::identity(spin.dim()).scale(j * (j + T::one())));
    if residual > T::SPECTRAL_TOL {
        return Err(Error::Commutation(
            format!("{}² + {}² + {}² = j(j+1)", labels[0], labels[1], labels[2]),
            residual.to_f64_lossy(),
        ));
    }
    Ok(())
}

/// Σ_{x,y,z} Δ²_inf J_i^B ≥ j for a spin-j Bob.
pub fn eval_additive_sum_three_spin<T: Real>(
    state: &BipartiteState<T>,
    plan: &InferencePlan<T>,
    spin: Spin,
) -> Result<CriterionResult<T>> {
    plan.require(3)?;
    if state.dim_b() != spin.dim() {
        return Err(Error::DimensionMismatch {
            context: "spin-j subsystem",
            expected: spin.dim(),
            found: state.dim_b(),
        });
    }
    let obs = plan.bob_observables();
    let labels: Vec<&str> = plan.pairs.iter().map(|p| p.bob.label()).collect();
    check_spin_triple(&labels, &obs, spin)?;
    let j = spin.value::<T>();
    let stats = plan
        .pairs
        .iter()
        .map(|p| PairStatistics::compute(state, p))
        .collect::<Result<Vec<_>>>()?;
    let lhs = stats.iter().map(|s| s.inference_variance).sum();
    let mut r = CriterionResult::new("sum-three-spin", lhs, j, Direction::ViolatedIfLhsBelow);
    for (k, s) in stats.iter().enumerate() {
        r = r.with_detail(format!("var_inf_b{}", k + 1), s.inference_variance);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::state::DensityMatrix;

    fn werner(mu: f64) -> BipartiteState<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = DensityMatrix::pure(&[c(0., 0.), c(s, 0.), c(-s, 0.), c(0., 0.)]).unwrap();
        let rho = DensityMatrix::mixture(&[(mu, &singlet), (1.0 - mu, &DensityMatrix::maximally_mixed(4))]).unwrap();
        BipartiteState::new(rho, 2, 2).unwrap()
    }

    fn plan() -> InferencePlan<f64> {
        InferencePlan::spin_triple(Spin::HALF, Spin::HALF)
    }

    #[test]
    fn product_on_werner() {
        let r = eval_product_criterion(&werner(0.8), &plan()).unwrap();
        assert!((r.lhs - 0.09).abs() < 1e-12 && (r.bound - 0.2).abs() < 1e-12 && r.violated);
        let r = eval_product_criterion(&werner(0.5), &plan()).unwrap();
        assert!((r.lhs - 0.1875).abs() < 1e-12 && (r.bound - 0.125).abs() < 1e-12 && !r.violated);
        let r = eval_product_criterion(&werner(0.0), &plan()).unwrap();
        assert!((r.lhs - 0.25).abs() < 1e-12 && r.bound.abs() < 1e-12 && !r.violated);
    }

    #[test]
    fn bowen_never_fires_on_werner() {
        for mu in [0.0, 0.5, 0.9] {
            let r = eval_bowen(&werner(mu), &plan()).unwrap();
            assert!(r.bound.abs() < 1e-12 && !r.violated);
        }
        let r = eval_bowen(&werner(1.0), &plan()).unwrap();
        assert!(r.lhs.abs() < 1e-12 && !r.violated);
    }

    #[test]
    fn bowen_saturates_on_product_eigenstate() {
        let up = DensityMatrix::pure(&[c(1., 0.), c(0., 0.)]).unwrap();
        let r = eval_bowen(&BipartiteState::product(&up, &up), &plan()).unwrap();
        assert!((r.bound - 0.25).abs() < 1e-12 && (r.lhs - 0.25).abs() < 1e-12);
        assert!(!r.violated);
    }

    #[test]
    fn sum_two_on_werner() {
        let r = eval_additive_sum_two(&werner(0.8), &plan()).unwrap();
        assert!((r.lhs - 0.18).abs() < 1e-12 && (r.bound - 0.4).abs() < 1e-12 && r.violated);
    }

    #[test]
    fn sum_three_spin_on_werner() {
        let r = eval_additive_sum_three_spin(&werner(0.5), &plan(), Spin::HALF).unwrap();
        assert!((r.lhs - 0.5625).abs() < 1e-12 && !r.violated);
        let r = eval_additive_sum_three_spin(&werner(1.0), &plan(), Spin::HALF).unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.violated);
        assert!(eval_additive_sum_three_spin(&werner(1.0), &plan(), Spin::ONE).is_err());
    }

    #[test]
    fn wrong_triple_is_rejected() {
        let mut p = plan();
        p.pairs.swap(0, 1);
        assert!(matches!(eval_product_criterion(&werner(0.5), &p), Err(Error::Commutation(..))));
        p.pairs.pop();
        assert!(matches!(eval_product_criterion(&werner(0.5), &p), Err(Error::Malformed(_))));
    }
}
