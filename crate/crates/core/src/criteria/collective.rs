//! Collective-variance criteria Δ²(g_k A_k + B_k) on finite-dimensional states.

use crate::error::{Error, Result};
use crate::measurement::{collective_variance, inferred_abs_mean, measure_joint};
use crate::scalar::Real;
use crate::spin::Spin;
use crate::state::{BipartiteState, Observable, Subsystem};

use super::variance::check_spin_triple;
use super::{check_commutation, CriterionResult, Direction, InferencePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectiveVariant {
    /// Δ(g_x x^A + x^B)·Δ(g_p p^A + p^B) ≥ 1; Gaussian states only.
    ProductCv,
    /// Δ²(g_x x^A + x^B) + Δ²(g_p p^A + p^B) ≥ 2; Gaussian states only.
    SumCv,
    /// Σ_{x,y,z} Δ²(g_i J_i^A + J_i^B) ≥ j.
    SumSpin,
    /// Δ(g₁A₁ + B₁)·Δ(g₂A₂ + B₂) ≥ ½|⟨B₃⟩|_inf.
    ProductArb,
    /// Δ²(g₁A₁ + B₁) + Δ²(g₂A₂ + B₂) ≥ |⟨B₃⟩|_inf.
    SumArb,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GainMode<T> {
    Fixed(Vec<T>),
    /// g* = −cov(A, B)/Δ²A per term, which minimizes Δ²(gA + B).
    Optimize,
}

#[derive(Debug, Clone)]
pub struct CollectiveTerm<T: Real> {
    pub alice: Observable<T>,
    pub bob: Observable<T>,
}

/// −cov(A, B)/Δ²A for term `index`; errors when Δ²A vanishes.
pub fn optimal_gain<T: Real>(state: &BipartiteState<T>, term: &CollectiveTerm<T>, index: usize) -> Result<T> {
    let rho_a = state.reduced(Subsystem::A);
    let var_a = rho_a.variance(&term.alice)?;
    if var_a < T::ZERO_PROB {
        return Err(Error::ZeroVariance(index));
    }
    let mean_a = rho_a.expectation(&term.alice)?;
    let mean_b = state.reduced(Subsystem::B).expectation(&term.bob)?;
    let cov = state.correlation(&term.alice, &term.bob)? - mean_a * mean_b;
    Ok(-cov / var_a)
}

fn resolve_gains<T: Real>(state: &BipartiteState<T>, terms: &[CollectiveTerm<T>], mode: &GainMode<T>) -> Result<Vec<T>> {
    match mode {
        GainMode::Fixed(g) if g.len() == terms.len() => Ok(g.clone()),
        GainMode::Fixed(g) => Err(Error::Malformed(format!("{} gains for {} terms", g.len(), terms.len()))),
        GainMode::Optimize => terms.iter().enumerate().map(|(k, t)| optimal_gain(state, t, k)).collect(),
    }
}

/// `reference` supplies (A₃, B₃) for the arbitrary-observable variants and is
/// ignored otherwise.
pub fn eval_collective<T: Real>(
    state: &BipartiteState<T>,
    terms: &[CollectiveTerm<T>],
    variant: CollectiveVariant,
    gains: &GainMode<T>,
    reference: Option<&InferencePair<T>>,
) -> Result<CriterionResult<T>> {
    let expected_terms = match variant {
        CollectiveVariant::ProductCv | CollectiveVariant::SumCv => {
            return Err(Error::Malformed(
                "continuous-variable collective variants take a Gaussian state".into(),
            ))
        }
        CollectiveVariant::SumSpin => 3,
        CollectiveVariant::ProductArb | CollectiveVariant::SumArb => 2,
    };
    if terms.len() != expected_terms {
        return Err(Error::Malformed(format!(
            "{variant:?} needs {expected_terms} terms, got {}",
            terms.len()
        )));
    }
    let gains = resolve_gains(state, terms, gains)?;
    let variances = terms
        .iter()
        .zip(&gains)
        .map(|(t, g)| collective_variance(state, &t.alice, &t.bob, *g))
        .collect::<Result<Vec<T>>>()?;

    let (id, lhs, bound, extra) = match variant {
        CollectiveVariant::SumSpin => {
            let spin = Spin::from_dim(state.dim_b())?;
            let bobs: Vec<Observable<T>> = terms.iter().map(|t| t.bob.clone()).collect();
            check_spin_triple(&["B1", "B2", "B3"], &bobs, spin)?;
            ("collective-spin-sum", variances.iter().copied().sum(), spin.value::<T>(), None)
        }
        _ => {
            let reference = reference.ok_or_else(|| Error::Malformed("missing reference pair for B3".into()))?;
            let b3 = reference.bob.observable();
            check_commutation(["B1", "B2", reference.bob.label()], &terms[0].bob, &terms[1].bob, &b3)?;
            let abs3 = inferred_abs_mean(&measure_joint(state, &reference.alice, &reference.bob)?);
            if variant == CollectiveVariant::ProductArb {
                let lhs = variances[0].sqrt() * variances[1].sqrt();
                ("collective-arb-product", lhs, T::lit(0.5) * abs3, Some(abs3))
            } else {
                ("collective-arb-sum", variances[0] + variances[1], abs3, Some(abs3))
            }
        }
    };
    let mut r = CriterionResult::new(id, lhs, bound, Direction::ViolatedIfLhsBelow);
    for (k, (g, v)) in gains.iter().zip(&variances).enumerate() {
        r = r
            .with_detail(format!("gain_{}", k + 1), *g)
            .with_detail(format!("collective_var_{}", k + 1), *v);
    }
    if let Some(abs3) = extra {
        r = r.with_detail("abs_mean_inf_b3", abs3);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::measurement::Measurement;
    use crate::spin::{spin_operators, Axis};
    use crate::state::DensityMatrix;

    fn werner(mu: f64) -> BipartiteState<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = DensityMatrix::pure(&[c(0., 0.), c(s, 0.), c(-s, 0.), c(0., 0.)]).unwrap();
        let rho = DensityMatrix::mixture(&[(mu, &singlet), (1.0 - mu, &DensityMatrix::maximally_mixed(4))]).unwrap();
        BipartiteState::new(rho, 2, 2).unwrap()
    }

    fn spin_terms() -> Vec<CollectiveTerm<f64>> {
        let ops = spin_operators::<f64>(Spin::HALF);
        Axis::ALL
            .iter()
            .map(|&a| CollectiveTerm {
                alice: ops.component(a).clone(),
                bob: ops.component(a).clone(),
            })
            .collect()
    }

    #[test]
    fn optimized_spin_sum_matches_inference_form() {
        let mu = 0.7;
        let r = eval_collective(&werner(mu), &spin_terms(), CollectiveVariant::SumSpin, &GainMode::Optimize, None).unwrap();
        assert!((r.lhs - 0.75 * (1.0 - mu * mu)).abs() < 1e-12);
        assert!((r.detail("gain_1").unwrap() - mu).abs() < 1e-12);
        assert!(r.violated);
    }

    #[test]
    fn zero_gains_reduce_to_local_variances() {
        let r = eval_collective(
            &werner(1.0),
            &spin_terms(),
            CollectiveVariant::SumSpin,
            &GainMode::Fixed(vec![0.0; 3]),
            None,
        )
        .unwrap();
        assert!((r.lhs - 0.75).abs() < 1e-12 && !r.violated);
    }

    #[test]
    fn zero_variance_alice_cannot_be_optimized() {
        let up = DensityMatrix::pure(&[c(1., 0.), c(0., 0.)]).unwrap();
        let state = BipartiteState::product(&up, &DensityMatrix::maximally_mixed(2));
        let err = eval_collective(&state, &spin_terms(), CollectiveVariant::SumSpin, &GainMode::Optimize, None);
        assert_eq!(err.unwrap_err(), Error::ZeroVariance(2));
    }

    #[test]
    fn arbitrary_variants() {
        let ops = spin_operators::<f64>(Spin::HALF);
        let terms = &spin_terms()[..2];
        let reference = InferencePair::optimal(Measurement::spin(&ops, Axis::Z), Measurement::spin(&ops, Axis::Z));
        let state = werner(0.8);
        let sum = eval_collective(&state, terms, CollectiveVariant::SumArb, &GainMode::Optimize, Some(&reference)).unwrap();
        assert!((sum.lhs - 0.18).abs() < 1e-12 && (sum.bound - 0.4).abs() < 1e-12);
        let prod = eval_collective(&state, terms, CollectiveVariant::ProductArb, &GainMode::Optimize, Some(&reference)).unwrap();
        assert!((prod.lhs - 0.09).abs() < 1e-12 && (prod.bound - 0.2).abs() < 1e-12);
        assert!(eval_collective(&state, terms, CollectiveVariant::SumArb, &GainMode::Optimize, None).is_err());
    }

    #[test]
    fn cv_variants_rejected_here() {
        let r = eval_collective(&werner(0.5), &spin_terms(), CollectiveVariant::SumCv, &GainMode::Optimize, None);
        assert!(matches!(r, Err(Error::Malformed(_))));
    }
}
