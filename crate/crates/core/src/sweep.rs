//! Parameter sweeps and bisection for verdict boundaries.

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{evaluate, CriterionId, CriterionResult};
use crate::error::{Error, Result};
use crate::families::StateFamily;
use crate::scalar::Real;

/// Interior probes used to check that the verdict switches once.
pub const MONOTONICITY_PROBES: usize = 9;

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow<T: Real> {
    pub parameter: f64,
    pub result: CriterionResult<T>,
}

/// Evaluates `criterion` at each value of `param`, in parallel. Rows come
/// back sorted by parameter value.
pub fn sweep<T: Real>(
    criterion: CriterionId,
    family: &StateFamily,
    param: &str,
    values: &[f64],
) -> Result<Vec<SweepRow<T>>> {
    let spec = family.id.param(param)?;
    for &v in values {
        spec.check(v)?;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .par_iter()
        .map(|&v| {
            let state = family.clone().with(param, v)?.state::<T>()?;
            Ok(SweepRow {
                parameter: v,
                result: evaluate(criterion, &state)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bisection {
    pub threshold: f64,
    pub lo: f64,
    pub hi: f64,
    pub evaluations: usize,
}

/// Locates the single switch of `pred` on [lo, hi].
///
/// The endpoints must disagree, and the endpoints plus nine evenly spaced
/// interior probes must switch exactly once. Bisection then runs on the
/// probe interval containing the switch until its width is at most `tol`.
pub fn bisect(lo: f64, hi: f64, tol: f64, mut pred: impl FnMut(f64) -> Result<bool>) -> Result<Bisection> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Bracket(format!("invalid bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Bracket(format!("tolerance {tol} must be positive")));
    }
    let n = MONOTONICITY_PROBES + 1;
    let points: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let verdicts = points.iter().map(|&x| pred(x)).collect::<Result<Vec<bool>>>()?;
    let mut evaluations = verdicts.len();
    if verdicts[0] == verdicts[n] {
        return Err(Error::Bracket(format!(
            "verdict is {} at both ends of [{lo}, {hi}]",
            verdicts[0]
        )));
    }
    let switches: Vec<usize> = (0..n).filter(|&k| verdicts[k] != verdicts[k + 1]).collect();
    if switches.len() != 1 {
        return Err(Error::Bracket(format!(
            "verdict switches {} times across the probe points",
            switches.len()
        )));
    }
    let low_verdict = verdicts[0];
    let (mut a, mut b) = (points[switches[0]], points[switches[0] + 1]);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        evaluations += 1;
        if pred(mid)? == low_verdict {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Bisection {
        threshold: 0.5 * (a + b),
        lo: a,
        hi: b,
        evaluations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryResult {
    pub criterion_id: String,
    pub family: StateFamily,
    pub parameter: String,
    pub threshold: f64,
    pub bracket: (f64, f64),
    pub tolerance: f64,
    pub evaluations: usize,
}

/// Bisects the violation verdict of `criterion` along `param`.
pub fn boundary_bisect<T: Real>(
    criterion: CriterionId,
    family: &StateFamily,
    param: &str,
    bracket: (f64, f64),
    tol: f64,
) -> Result<BoundaryResult> {
    let spec = family.id.param(param)?;
    spec.check(bracket.0)?;
    spec.check(bracket.1)?;
    let b = bisect(bracket.0, bracket.1, tol, |x| {
        let state = family.clone().with(param, x)?.state::<T>()?;
        Ok(evaluate(criterion, &state)?.violated)
    })?;
    let mut fixed = family.clone();
    fixed.params.remove(param);
    Ok(BoundaryResult {
        criterion_id: criterion.as_str().to_string(),
        family: fixed,
        parameter: param.to_string(),
        threshold: b.threshold,
        bracket: (b.lo, b.hi),
        tolerance: b.hi - b.lo,
        evaluations: b.evaluations,
    })
}
