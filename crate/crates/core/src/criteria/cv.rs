//! Quadrature criteria on two-mode Gaussian states.

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, PA, PB, XA, XB};
use crate::scalar::Real;

use super::{CriterionResult, Direction, GainMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReidMode<T> {
    /// Optimal inference: Schur-complement conditional variances.
    MinVariance,
    /// Linear inference with gains (g_x, g_p): Δ²(x^B + g_x x^A), Δ²(p^B + g_p p^A).
    Gains(T, T),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvVariant {
    Sum,
    Product,
}

fn two_mode<T: Real>(state: &GaussianState<T>) -> Result<()> {
    if state.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            context: "two-mode Gaussian criterion",
            expected: 2,
            found: state.n_modes(),
        });
    }
    Ok(())
}

/// Δ²(g·q^A + q^B) for q ∈ {x, p}.
fn gain_variance<T: Real>(state: &GaussianState<T>, alice: usize, bob: usize, g: T) -> Result<T> {
    let mut v = vec![T::zero(); 4];
    v[alice] = g;
    v[bob] = T::one();
    state.linear_combination_variance(&v)
}

fn inference_variances<T: Real>(state: &GaussianState<T>, mode: ReidMode<T>) -> Result<(T, T)> {
    two_mode(state)?;
    match mode {
        ReidMode::MinVariance => Ok((
            state.conditional_min_variance(XB, XA)?,
            state.conditional_min_variance(PB, PA)?,
        )),
        ReidMode::Gains(gx, gp) => Ok((gain_variance(state, XA, XB, gx)?, gain_variance(state, PA, PB, gp)?)),
    }
}

/// Δ_inf x^B·Δ_inf p^B ≥ 1.
pub fn eval_reid_cv<T: Real>(state: &GaussianState<T>, mode: ReidMode<T>) -> Result<CriterionResult<T>> {
    let (vx, vp) = inference_variances(state, mode)?;
    Ok(CriterionResult::new("reid-cv", vx.sqrt() * vp.sqrt(), T::one(), Direction::ViolatedIfLhsBelow)
        .with_detail("var_inf_x", vx)
        .with_detail("var_inf_p", vp)
        .with_detail("var_product", vx * vp))
}

/// Δ²_inf x^B + Δ²_inf p^B ≥ 2 with optimal inference.
pub fn eval_sum_two_cv<T: Real>(state: &GaussianState<T>) -> Result<CriterionResult<T>> {
    let (vx, vp) = inference_variances(state, ReidMode::MinVariance)?;
    Ok(CriterionResult::new("sum-two", vx + vp, T::lit(2.0), Direction::ViolatedIfLhsBelow)
        .with_detail("var_inf_x", vx)
        .with_detail("var_inf_p", vp))
}

/// Collective quadrature criteria; the default gains (−1, +1) give
/// Δ²(x^B − x^A) and Δ²(p^B + p^A).
pub fn eval_collective_cv<T: Real>(
    state: &GaussianState<T>,
    variant: CvVariant,
    gains: &GainMode<T>,
) -> Result<CriterionResult<T>> {
    two_mode(state)?;
    let (gx, gp) = match gains {
        GainMode::Fixed(g) if g.len() == 2 => (g[0], g[1]),
        GainMode::Fixed(g) => return Err(Error::Malformed(format!("2 gains required, got {}", g.len()))),
        GainMode::Optimize => {
            let opt = |a: usize, b: usize, k: usize| {
                let va = state.covariance(a, a);
                if va < T::ZERO_PROB {
                    Err(Error::ZeroVariance(k))
                } else {
                    Ok(-state.covariance(a, b) / va)
                }
            };
            (opt(XA, XB, 0)?, opt(PA, PB, 1)?)
        }
    };
    let vx = gain_variance(state, XA, XB, gx)?;
    let vp = gain_variance(state, PA, PB, gp)?;
    let r = match variant {
        CvVariant::Sum => CriterionResult::new("collective-cv-sum", vx + vp, T::lit(2.0), Direction::ViolatedIfLhsBelow),
        CvVariant::Product => {
            CriterionResult::new("collective-cv-product", vx.sqrt() * vp.sqrt(), T::one(), Direction::ViolatedIfLhsBelow)
        }
    };
    Ok(r.with_detail("gain_x", gx)
        .with_detail("gain_p", gp)
        .with_detail("collective_var_x", vx)
        .with_detail("collective_var_p", vp))
}

/// Separability bound Δ²(x^A − x^B) + Δ²(p^A + p^B) ≥ 4.
pub fn eval_duan_simon<T: Real>(state: &GaussianState<T>) -> Result<CriterionResult<T>> {
    two_mode(state)?;
    let one = T::one();
    let vx = state.linear_combination_variance(&[one, T::zero(), -one, T::zero()])?;
    let vp = state.linear_combination_variance(&[T::zero(), one, T::zero(), one])?;
    Ok(CriterionResult::new("duan-simon", vx + vp, T::lit(4.0), Direction::ViolatedIfLhsBelow)
        .with_detail("var_xa_minus_xb", vx)
        .with_detail("var_pa_plus_pb", vp)
        .with_note("entanglement witness, not a steering test; collective-cv-sum is the steering analogue with half the bound"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{symmetric_two_mode, SymmetricTwoModeParams};

    fn sym(nbar: f64, mu: f64) -> GaussianState<f64> {
        symmetric_two_mode(SymmetricTwoModeParams::new(nbar, mu).unwrap()).unwrap()
    }

    fn default_gains() -> GainMode<f64> {
        GainMode::Fixed(vec![-1.0, 1.0])
    }

    #[test]
    fn reid_examples() {
        let r = eval_reid_cv(&sym(1.0, 0.9), ReidMode::MinVariance).unwrap();
        assert!((r.lhs - 0.84).abs() < 1e-12 && r.violated);
        assert!((r.detail("var_product").unwrap() - 0.7056).abs() < 1e-12);
        let r = eval_reid_cv(&sym(1.0, 0.75f64.sqrt()), ReidMode::MinVariance).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-9);
        let r = eval_reid_cv(&GaussianState::<f64>::vacuum(2), ReidMode::MinVariance).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && !r.violated);
    }

    #[test]
    fn reid_with_gains() {
        let r = eval_reid_cv(&sym(1.0, 0.9), ReidMode::Gains(-1.0, 1.0)).unwrap();
        let expect = 6.0 - 4.0 * 0.9 * 2f64.sqrt();
        assert!((r.lhs - expect).abs() < 1e-12);
    }

    #[test]
    fn collective_sum_examples() {
        let r = eval_collective_cv(&sym(1.0, 0.9), CvVariant::Sum, &default_gains()).unwrap();
        assert!((r.lhs - (12.0 - 8.0 * 0.9 * 2f64.sqrt())).abs() < 1e-12);
        assert!(r.violated && r.bound == 2.0);
    }

    #[test]
    fn optimized_collective_equals_reid() {
        let s = sym(2.0, 0.8);
        let opt = eval_collective_cv(&s, CvVariant::Product, &GainMode::Optimize).unwrap();
        let reid = eval_reid_cv(&s, ReidMode::MinVariance).unwrap();
        assert!((opt.lhs - reid.lhs).abs() < 1e-12);
        let fixed = eval_collective_cv(&s, CvVariant::Product, &default_gains()).unwrap();
        assert!(opt.margin >= fixed.margin - 1e-12);
    }

    #[test]
    fn zero_gains_never_violate() {
        let r = eval_collective_cv(&sym(1.0, 1.0), CvVariant::Sum, &GainMode::Fixed(vec![0.0, 0.0])).unwrap();
        assert!(!r.violated);
    }

    #[test]
    fn duan_simon_examples() {
        let r = eval_duan_simon(&sym(1.0, 0.8)).unwrap();
        assert!((r.lhs - (12.0 - 8.0 * 0.8 * 2f64.sqrt())).abs() < 1e-12 && r.violated);
        let r = eval_duan_simon(&GaussianState::<f64>::vacuum(2)).unwrap();
        assert!((r.lhs - 4.0).abs() < 1e-15 && !r.violated);
        assert!(eval_duan_simon(&GaussianState::<f64>::vacuum(1)).is_err());
    }

    #[test]
    fn symmetric_variances_equal() {
        for (n, mu) in [(0.5, 0.3), (2.0, 0.9), (10.0, 1.0)] {
            let r = eval_duan_simon(&sym(n, mu)).unwrap();
            let vx = r.detail("var_xa_minus_xb").unwrap();
            let vp = r.detail("var_pa_plus_pb").unwrap();
            assert!((vx - vp).abs() < 1e-12);
        }
    }

    #[test]
    fn sum_two_bound() {
        let r = eval_sum_two_cv(&sym(1.0, 0.9)).unwrap();
        assert!((r.lhs - 1.68).abs() < 1e-12 && r.bound == 2.0 && r.violated);
    }
}
