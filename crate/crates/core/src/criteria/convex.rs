//! Additive convex criteria Σ_j Σ_A P(A) f_j(⟨B_j⟩_A, A) ≤ bound.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measurement::{conditional_distribution, measure_joint, JointDistribution, Measurement};
use crate::scalar::Real;
use crate::spin::{spin_operators, Axis, Spin};
use crate::state::BipartiteState;

use super::{CriterionResult, Direction, InferencePlan};

/// f(conditional mean of B, Alice outcome value).
pub type ConvexFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// Points per Alice outcome in the midpoint-convexity spot check.
pub const CONVEXITY_GRID: usize = 21;

#[derive(Clone)]
pub struct ConvexTerm<T: Real> {
    pub label: String,
    pub alice: Measurement<T>,
    pub bob: Measurement<T>,
    pub f: ConvexFn<T>,
    /// Use f(⟨B⟩) in place of Σ_A P(A) f(⟨B⟩_A); requires f independent of A.
    pub weakened: bool,
}

impl<T: Real> fmt::Debug for ConvexTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexTerm")
            .field("label", &self.label)
            .field("alice", &self.alice.label())
            .field("bob", &self.bob.label())
            .field("weakened", &self.weakened)
            .finish()
    }
}

impl<T: Real> ConvexTerm<T> {
    pub fn new(
        label: impl Into<String>,
        alice: Measurement<T>,
        bob: Measurement<T>,
        f: impl Fn(T, T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            alice,
            bob,
            f: Arc::new(f),
            weakened: false,
        }
    }

    pub fn weakened(mut self) -> Self {
        self.weakened = true;
        self
    }

    /// Convex hull of Bob's outcome values.
    pub fn interval(&self) -> (T, T) {
        let vals = self.bob.values();
        let lo = vals.iter().copied().fold(T::infinity(), T::min);
        let hi = vals.iter().copied().fold(T::neg_infinity(), T::max);
        (lo, hi)
    }

    fn grid(&self) -> Vec<T> {
        let (lo, hi) = self.interval();
        let steps = T::from_usize_lossy(CONVEXITY_GRID - 1);
        (0..CONVEXITY_GRID)
            .map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / steps)
            .collect()
    }

    /// Midpoint convexity on every pair of grid points, per Alice outcome.
    pub fn check_convexity(&self, index: usize) -> Result<()> {
        let grid = self.grid();
        for alpha in self.alice.values() {
            let fv: Vec<T> = grid.iter().map(|&x| (self.f)(x, alpha)).collect();
            if fv.iter().any(|v| !v.is_finite()) {
                return Err(Error::NotConvex {
                    term: index,
                    alpha: alpha.to_f64_lossy(),
                });
            }
            for i in 0..grid.len() {
                for j in (i + 1)..grid.len() {
                    let mid = (self.f)((grid[i] + grid[j]) * T::lit(0.5), alpha);
                    let chord = (fv[i] + fv[j]) * T::lit(0.5);
                    let scale = T::one().max(fv[i].abs()).max(fv[j].abs());
                    if mid > chord + T::SATURATION_TOL * scale {
                        return Err(Error::NotConvex {
                            term: index,
                            alpha: alpha.to_f64_lossy(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_alpha_independent(&self, index: usize) -> Result<()> {
        let alphas = self.alice.values();
        for x in self.grid() {
            let base = (self.f)(x, alphas[0]);
            for &a in &alphas[1..] {
                let v = (self.f)(x, a);
                if (v - base).abs() > T::SATURATION_TOL * T::one().max(base.abs()) {
                    return Err(Error::Malformed(format!(
                        "term {index} ({}) depends on the alice outcome and cannot be weakened",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// E_{b|a}[f], or f(⟨B⟩) when weakened.
    pub fn expectation(&self, joint: &JointDistribution<T>) -> T {
        if self.weakened {
            return (self.f)(joint.bob_mean(), joint.a_values()[0]);
        }
        let mut acc = T::zero();
        for (a, &alpha) in joint.a_values().iter().enumerate() {
            if let Ok((cond, weight)) = conditional_distribution(joint, a) {
                let mean: T = cond.iter().zip(joint.b_values()).map(|(p, v)| *p * *v).sum();
                acc += weight * (self.f)(mean, alpha);
            }
        }
        acc
    }
}

/// Evaluates pre-measured tables, one per term in order.
pub fn eval_additive_convex_on<T: Real>(
    joints: &[JointDistribution<T>],
    terms: &[ConvexTerm<T>],
    quantum_bound: T,
) -> Result<CriterionResult<T>> {
    if terms.is_empty() {
        return Err(Error::Malformed("no convex terms".into()));
    }
    if joints.len() != terms.len() {
        return Err(Error::Malformed(format!("{} tables for {} terms", joints.len(), terms.len())));
    }
    for (k, (term, joint)) in terms.iter().zip(joints).enumerate() {
        if joint.n_a() != term.alice.len() || joint.n_b() != term.bob.len() {
            return Err(Error::Malformed(format!("table {k} does not match term {}", term.label)));
        }
        term.check_convexity(k)?;
        if term.weakened {
            term.check_alpha_independent(k)?;
        }
    }
    let values: Vec<T> = terms.iter().zip(joints).map(|(t, j)| t.expectation(j)).collect();
    let lhs = values.iter().copied().sum();
    Ok(CriterionResult::new("custom-convex", lhs, quantum_bound, Direction::ViolatedIfLhsAbove)
        .with_details(terms.iter().zip(values).map(|(t, v)| (format!("term_{}", t.label), v))))
}

/// Caller asserts Σ_j f_j(⟨B_j⟩_ρ, α_j) ≤ `quantum_bound` for every state ρ of
/// Bob and every choice of α_j; that constraint is not verified here.
pub fn eval_additive_convex<T: Real>(
    state: &BipartiteState<T>,
    terms: &[ConvexTerm<T>],
    quantum_bound: T,
) -> Result<CriterionResult<T>> {
    let joints = terms
        .iter()
        .map(|t| measure_joint(state, &t.alice, &t.bob))
        .collect::<Result<Vec<_>>>()?;
    eval_additive_convex_on(&joints, terms, quantum_bound)
}

/// |⟨B₃⟩| + ⟨B₁⟩² − ⟨B₁²⟩ + ⟨B₂⟩² − ⟨B₂²⟩ ≤ 0, the additive form of
/// Δ²B₁ + Δ²B₂ ≥ |⟨B₃⟩|. Returns the five terms and the bound 0.
pub fn sum_two_encoding<T: Real>(plan: &InferencePlan<T>) -> Result<(Vec<ConvexTerm<T>>, T)> {
    plan.require(3)?;
    let p = &plan.pairs;
    let square = |m: &Measurement<T>| m.relabeled(|v| v * v).with_label(format!("{}^2", m.label()));
    let terms = vec![
        ConvexTerm::new("abs_b3", p[2].alice.clone(), p[2].bob.clone(), |x: T, _| x.abs()),
        ConvexTerm::new("mean_sq_b1", p[0].alice.clone(), p[0].bob.clone(), |x: T, _| x * x),
        ConvexTerm::new("neg_b1_sq", p[0].alice.clone(), square(&p[0].bob), |x: T, _| -x),
        ConvexTerm::new("mean_sq_b2", p[1].alice.clone(), p[1].bob.clone(), |x: T, _| x * x),
        ConvexTerm::new("neg_b2_sq", p[1].alice.clone(), square(&p[1].bob), |x: T, _| -x),
    ];
    Ok((terms, T::zero()))
}

/// sign·Σ_i α_i ⟨J_i^B⟩ ≤ √n/4 over the first `n_measurements` qubit axes.
/// With sign = −1 this detects anti-correlated states.
pub fn linear_encoding<T: Real>(n_measurements: usize, sign: T) -> Result<(Vec<ConvexTerm<T>>, T)> {
    if !(n_measurements == 2 || n_measurements == 3) {
        return Err(Error::Malformed(format!("linear encoding takes 2 or 3 settings, got {n_measurements}")));
    }
    let ops = spin_operators::<T>(Spin::HALF);
    let terms = Axis::ALL[..n_measurements]
        .iter()
        .map(|&axis| {
            let m = Measurement::spin(&ops, axis);
            ConvexTerm::new(format!("alpha_{}", axis.label()), m.clone(), m, move |x: T, alpha: T| sign * alpha * x)
        })
        .collect();
    Ok((terms, T::from_usize_lossy(n_measurements).sqrt() / T::lit(4.0)))
}
