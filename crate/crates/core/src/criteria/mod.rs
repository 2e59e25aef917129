//! Steering criteria evaluated to a uniform [`CriterionResult`].
//!
//! Every criterion compares a left-hand side against an LHS-model bound.
//! Finite-dimensional criteria take an explicit [`InferencePlan`] naming the
//! measurement Alice uses to infer each of Bob's observables.

mod catalog;
mod collective;
mod convex;
mod cv;
mod linear;
mod variance;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measurement::{Estimator, Measurement};
use crate::scalar::Real;
use crate::spin::{spin_operators, Axis, Spin};
use crate::state::Observable;

pub use catalog::{catalog, evaluate, AnyState, CatalogEntry, CriterionId, CATALOG_IDS};
pub use collective::{eval_collective, optimal_gain, CollectiveTerm, CollectiveVariant, GainMode};
pub use convex::{
    eval_additive_convex, eval_additive_convex_on, linear_encoding, sum_two_encoding, ConvexFn, ConvexTerm, CONVEXITY_GRID,
};
pub use cv::{eval_collective_cv, eval_duan_simon, eval_reid_cv, eval_sum_two_cv, CvVariant, ReidMode};
pub use linear::{eval_linear_qubit, eval_linear_spin_j, spin_correlation};
pub use variance::{
    eval_additive_sum_three_spin, eval_additive_sum_two, eval_bowen, eval_product_criterion,
    PairStatistics,
};

/// Which side of the bound counts as a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    ViolatedIfLhsBelow,
    ViolatedIfLhsAbove,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::ViolatedIfLhsBelow => "violated-if-lhs-below",
            Direction::ViolatedIfLhsAbove => "violated-if-lhs-above",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult<T: Real> {
    pub criterion_id: String,
    pub lhs: T,
    pub bound: T,
    pub direction: Direction,
    /// Signed distance into violation; positive means violated.
    pub margin: T,
    pub violated: bool,
    pub details: Vec<(String, T)>,
    pub note: Option<String>,
}

impl<T: Real> CriterionResult<T> {
    /// Margins within `T::SATURATION_TOL` (relative to the bound) of zero are
    /// saturation and reported as exactly zero, hence not violated.
    pub fn new(criterion_id: impl Into<String>, lhs: T, bound: T, direction: Direction) -> Self {
        let raw = match direction {
            Direction::ViolatedIfLhsBelow => bound - lhs,
            Direction::ViolatedIfLhsAbove => lhs - bound,
        };
        let margin = if raw.abs() <= T::SATURATION_TOL * bound.abs().max(T::one()) {
            T::zero()
        } else {
            raw
        };
        Self {
            criterion_id: criterion_id.into(),
            lhs,
            bound,
            direction,
            margin,
            violated: margin > T::zero(),
            details: Vec::new(),
            note: None,
        }
    }

    pub fn with_detail(mut self, name: impl Into<String>, value: T) -> Self {
        self.details.push((name.into(), value));
        self
    }

    pub fn with_details(mut self, details: impl IntoIterator<Item = (String, T)>) -> Self {
        self.details.extend(details);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn detail(&self, name: &str) -> Option<T> {
        self.details.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// Alice's measurement, Bob's measurement and the estimator for one inferred
/// observable.
#[derive(Debug, Clone)]
pub struct InferencePair<T: Real> {
    pub alice: Measurement<T>,
    pub bob: Measurement<T>,
    pub estimator: Estimator<T>,
}

impl<T: Real> InferencePair<T> {
    pub fn new(alice: Measurement<T>, bob: Measurement<T>, estimator: Estimator<T>) -> Result<Self> {
        if let Estimator::Table(t) = &estimator {
            if t.len() != alice.len() {
                return Err(Error::InvalidEstimator(format!(
                    "table has {} entries, {} has {} outcomes",
                    t.len(),
                    alice.label(),
                    alice.len()
                )));
            }
        }
        Ok(Self { alice, bob, estimator })
    }

    pub fn optimal(alice: Measurement<T>, bob: Measurement<T>) -> Self {
        Self {
            alice,
            bob,
            estimator: Estimator::ConditionalMean,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InferencePlan<T: Real> {
    pub pairs: Vec<InferencePair<T>>,
}

impl<T: Real> InferencePlan<T> {
    pub fn new(pairs: Vec<InferencePair<T>>) -> Self {
        Self { pairs }
    }

    /// (J_x, J_y, J_z) on both sides, matched components, conditional-mean
    /// estimators.
    pub fn spin_triple(spin_a: Spin, spin_b: Spin) -> Self {
        let ops_a = spin_operators::<T>(spin_a);
        let ops_b = spin_operators::<T>(spin_b);
        let pairs = Axis::ALL
            .iter()
            .map(|&axis| InferencePair::optimal(Measurement::spin(&ops_a, axis), Measurement::spin(&ops_b, axis)))
            .collect();
        Self { pairs }
    }

    /// Spin components along the rows of a right-handed frame on each side,
    /// so that Bob's triple obeys the same commutation relations as (J_x, J_y, J_z).
    pub fn spin_frames(spin_a: Spin, frame_a: [[T; 3]; 3], spin_b: Spin, frame_b: [[T; 3]; 3]) -> Self {
        let ops_a = spin_operators::<T>(spin_a);
        let ops_b = spin_operators::<T>(spin_b);
        let pairs = (0..3)
            .map(|k| {
                InferencePair::optimal(
                    Measurement::from_observable(format!("A{}", k + 1), &ops_a.along(frame_a[k])),
                    Measurement::from_observable(format!("B{}", k + 1), &ops_b.along(frame_b[k])),
                )
            })
            .collect();
        Self { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub(crate) fn require(&self, n: usize) -> Result<()> {
        if self.pairs.len() != n {
            return Err(Error::Malformed(format!(
                "plan has {} pairs, criterion needs {n}",
                self.pairs.len()
            )));
        }
        Ok(())
    }

    pub fn bob_observables(&self) -> Vec<Observable<T>> {
        self.pairs.iter().map(|p| p.bob.observable()).collect()
    }
}

/// Checks [b₁, b₂] = i·b₃ entrywise within `T::SPECTRAL_TOL`; `labels` name
/// the triple in the error.
pub fn check_commutation<T: Real>(
    labels: [&str; 3],
    b1: &Observable<T>,
    b2: &Observable<T>,
    b3: &Observable<T>,
) -> Result<()> {
    let comm = b1.matrix().commutator(b2.matrix())?;
    let target: ComplexMatrix<T> = b3.matrix().scale_complex(num_complex::Complex::new(T::zero(), T::one()));
    let residual = comm.max_abs_diff(&target);
    if residual > T::SPECTRAL_TOL {
        return Err(Error::Commutation(
            format!("[{}, {}] = i {}", labels[0], labels[1], labels[2]),
            residual.to_f64_lossy(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margin_sign_follows_direction() {
        let r = CriterionResult::new("x", 0.09f64, 0.2, Direction::ViolatedIfLhsBelow);
        assert!(r.violated);
        assert!((r.margin - 0.11).abs() < 1e-15);
        let r = CriterionResult::new("x", 0.5, 0.2, Direction::ViolatedIfLhsAbove);
        assert!(r.violated);
        let r = CriterionResult::new("x", 0.1, 0.2, Direction::ViolatedIfLhsAbove);
        assert!(!r.violated && r.margin < 0.0);
    }

    #[test]
    fn saturation_is_not_violation() {
        let r = CriterionResult::new("x", 0.25 - 1e-16, 0.25, Direction::ViolatedIfLhsBelow);
        assert_eq!(r.margin, 0.0);
        assert!(!r.violated);
        let r = CriterionResult::new("x", 0.0, 0.0, Direction::ViolatedIfLhsBelow);
        assert!(!r.violated);
    }

    #[test]
    fn violated_iff_positive_margin() {
        for lhs in [-1.0, 0.0, 0.3, 1e-13, 2.0] {
            for dir in [Direction::ViolatedIfLhsBelow, Direction::ViolatedIfLhsAbove] {
                let r = CriterionResult::new("x", lhs, 0.3, dir);
                assert_eq!(r.violated, r.margin > 0.0);
            }
        }
    }

    #[test]
    fn commutation_check_names_failure() {
        let ops = spin_operators::<f64>(Spin::HALF);
        assert!(check_commutation(["Jx", "Jy", "Jz"], &ops.jx, &ops.jy, &ops.jz).is_ok());
        assert!(matches!(check_commutation(["Jx", "Jz", "Jy"], &ops.jx, &ops.jz, &ops.jy), Err(Error::Commutation(..))));
    }

    #[test]
    fn table_estimator_length_checked() {
        let ops = spin_operators::<f64>(Spin::HALF);
        let m = Measurement::spin(&ops, Axis::Z);
        assert!(InferencePair::new(m.clone(), m.clone(), Estimator::Table(vec![0.0])).is_err());
        assert!(InferencePair::new(m.clone(), m, Estimator::Table(vec![0.0, 1.0])).is_ok());
    }
}
