//! Linear correlation criteria |Σ_i ⟨J_i^A J_i^B⟩| ≤ bound.

use crate::error::{Error, Result};
use crate::measurement::{measure_joint, Measurement};
use crate::scalar::Real;
use crate::spin::{spin_operators, Axis, Spin};
use crate::state::BipartiteState;

use super::{CriterionResult, Direction};

/// ⟨J_i^A J_i^B⟩ from the Born-rule joint distribution of the two spectral
/// measurements.
pub fn spin_correlation<T: Real>(state: &BipartiteState<T>, spin_a: Spin, spin_b: Spin, axis: Axis) -> Result<T> {
    let a = Measurement::spin(&spin_operators::<T>(spin_a), axis);
    let b = Measurement::spin(&spin_operators::<T>(spin_b), axis);
    Ok(measure_joint(state, &a, &b)?.correlation())
}

fn correlation_sum<T: Real>(state: &BipartiteState<T>, spin: Spin, axes: &[Axis]) -> Result<(T, Vec<(String, T)>)> {
    for (context, found) in [("alice spin dimension", state.dim_a()), ("bob spin dimension", state.dim_b())] {
        if found != spin.dim() {
            return Err(Error::DimensionMismatch {
                context,
                expected: spin.dim(),
                found,
            });
        }
    }
    let mut total = T::zero();
    let mut details = Vec::with_capacity(axes.len());
    for &axis in axes {
        let corr = spin_correlation(state, spin, spin, axis)?;
        total += corr;
        details.push((format!("corr_{0}{0}", axis.label()), corr));
    }
    Ok((total.abs(), details))
}

/// Two-qubit criterion over (x, y) when `n_measurements` = 2, (x, y, z) when 3.
pub fn eval_linear_qubit<T: Real>(state: &BipartiteState<T>, n_measurements: usize) -> Result<CriterionResult<T>> {
    let (id, axes, bound) = match n_measurements {
        2 => ("linear-2", &Axis::ALL[..2], T::lit(2.0).sqrt() / T::lit(4.0)),
        3 => ("linear-3", &Axis::ALL[..], T::lit(3.0).sqrt() / T::lit(4.0)),
        n => return Err(Error::Malformed(format!("linear qubit criterion takes 2 or 3 settings, got {n}"))),
    };
    let (lhs, details) = correlation_sum(state, Spin::HALF, axes)?;
    Ok(CriterionResult::new(id, lhs, bound, Direction::ViolatedIfLhsAbove).with_details(details))
}

/// |Σ_{x,y,z} ⟨J_i^A J_i^B⟩| ≤ √3·j² for two spin-j subsystems.
pub fn eval_linear_spin_j<T: Real>(state: &BipartiteState<T>, spin: Spin) -> Result<CriterionResult<T>> {
    let (lhs, details) = correlation_sum(state, spin, &Axis::ALL)?;
    let j = spin.value::<T>();
    let bound = T::lit(3.0).sqrt() * j * j;
    Ok(CriterionResult::new("linear-spin-j", lhs, bound, Direction::ViolatedIfLhsAbove).with_details(details))
}
