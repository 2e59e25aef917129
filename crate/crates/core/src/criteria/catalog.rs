//! The built-in criterion catalog and dispatch on state kind.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::scalar::Real;
use crate::spin::{spin_operators, Axis, Spin};
use crate::state::BipartiteState;

use super::{
    eval_additive_convex, eval_additive_sum_three_spin, eval_additive_sum_two, eval_bowen, eval_collective,
    eval_collective_cv, eval_duan_simon, eval_linear_qubit, eval_linear_spin_j, eval_product_criterion, eval_reid_cv,
    eval_sum_two_cv, optimal_gain, sum_two_encoding, CollectiveTerm, CollectiveVariant, CriterionResult, CvVariant,
    Direction, GainMode, InferencePlan, ReidMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionId {
    ReidCv,
    ProductSpin,
    Bowen,
    SumTwo,
    SumThreeSpin,
    CollectiveCvSum,
    CollectiveCvProduct,
    CollectiveSpinSum,
    Linear2,
    Linear3,
    LinearSpinJ,
    DuanSimon,
    CustomConvex,
}

pub const CATALOG_IDS: [&str; 13] = [
    "reid-cv",
    "product-spin",
    "bowen",
    "sum-two",
    "sum-three-spin",
    "collective-cv-sum",
    "collective-cv-product",
    "collective-spin-sum",
    "linear-2",
    "linear-3",
    "linear-spin-j",
    "duan-simon",
    "custom-convex",
];

impl CriterionId {
    pub const ALL: [CriterionId; 13] = [
        CriterionId::ReidCv,
        CriterionId::ProductSpin,
        CriterionId::Bowen,
        CriterionId::SumTwo,
        CriterionId::SumThreeSpin,
        CriterionId::CollectiveCvSum,
        CriterionId::CollectiveCvProduct,
        CriterionId::CollectiveSpinSum,
        CriterionId::Linear2,
        CriterionId::Linear3,
        CriterionId::LinearSpinJ,
        CriterionId::DuanSimon,
        CriterionId::CustomConvex,
    ];

    pub fn as_str(self) -> &'static str {
        CATALOG_IDS[self as usize]
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CATALOG_IDS
            .iter()
            .position(|id| *id == s)
            .map(|k| CriterionId::ALL[k])
            .ok_or_else(|| Error::UnknownCriterion(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub id: CriterionId,
    /// The inequality that holds for every LHS (or separable) model.
    pub form: &'static str,
    pub direction: Direction,
    pub bound: &'static str,
    pub tests: &'static str,
    pub states: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    use CriterionId::*;
    use Direction::*;
    let e = |id, form, direction, bound, tests, states| CatalogEntry {
        id,
        form,
        direction,
        bound,
        tests,
        states,
    };
    vec![
        e(ReidCv, "dinf(xB) * dinf(pB) >= 1", ViolatedIfLhsBelow, "1", "steering", "gaussian"),
        e(ProductSpin, "dinf(B1) * dinf(B2) >= |<B3>|inf / 2", ViolatedIfLhsBelow, "|<B3>|inf / 2", "steering", "finite"),
        e(Bowen, "dinf(B1) * dinf(B2) >= |<B3>| / 2", ViolatedIfLhsBelow, "|<B3>| / 2", "steering", "finite"),
        e(SumTwo, "dinf2(B1) + dinf2(B2) >= |<B3>|inf", ViolatedIfLhsBelow, "|<B3>|inf (2 for quadratures)", "steering", "finite, gaussian"),
        e(SumThreeSpin, "dinf2(Jx) + dinf2(Jy) + dinf2(Jz) >= j", ViolatedIfLhsBelow, "j", "steering", "finite"),
        e(CollectiveCvSum, "d2(gx xA + xB) + d2(gp pA + pB) >= 2", ViolatedIfLhsBelow, "2", "steering", "gaussian"),
        e(CollectiveCvProduct, "d(gx xA + xB) * d(gp pA + pB) >= 1", ViolatedIfLhsBelow, "1", "steering", "gaussian"),
        e(CollectiveSpinSum, "sum_i d2(gi JiA + JiB) >= j", ViolatedIfLhsBelow, "j", "steering", "finite"),
        e(Linear2, "|<JxA JxB> + <JyA JyB>| <= sqrt(2)/4", ViolatedIfLhsAbove, "sqrt(2)/4", "steering", "qubits"),
        e(Linear3, "|sum_i <JiA JiB>| <= sqrt(3)/4", ViolatedIfLhsAbove, "sqrt(3)/4", "steering", "qubits"),
        e(LinearSpinJ, "|sum_i <JiA JiB>| <= sqrt(3) j^2", ViolatedIfLhsAbove, "sqrt(3) j^2", "steering", "finite"),
        e(DuanSimon, "d2(xA - xB) + d2(pA + pB) >= 4", ViolatedIfLhsBelow, "4", "entanglement", "gaussian"),
        e(CustomConvex, "sum_j E[f_j(<Bj>_A, A)] <= c", ViolatedIfLhsAbove, "caller-supplied c (0 by default)", "steering", "finite"),
    ]
}

/// A state any catalog entry can be evaluated on.
#[derive(Debug, Clone)]
pub enum AnyState<T: Real> {
    Finite(BipartiteState<T>),
    Gaussian(GaussianState<T>),
}

impl<T: Real> AnyState<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyState::Finite(_) => "finite-dimensional",
            AnyState::Gaussian(_) => "gaussian",
        }
    }
}

fn incompatible<T: Real>(id: CriterionId, state: &AnyState<T>) -> Error {
    Error::Incompatible {
        criterion: id.as_str().into(),
        family: state.kind().into(),
    }
}

/// Evaluates `id` with its default configuration: matched spin components
/// with conditional-mean estimators on finite states, gains (−1, +1) for the
/// collective quadrature criteria.
pub fn evaluate<T: Real>(id: CriterionId, state: &AnyState<T>) -> Result<CriterionResult<T>> {
    use CriterionId::*;
    match state {
        AnyState::Gaussian(g) => match id {
            ReidCv => eval_reid_cv(g, ReidMode::MinVariance),
            SumTwo => eval_sum_two_cv(g),
            CollectiveCvSum => eval_collective_cv(g, CvVariant::Sum, &default_cv_gains()),
            CollectiveCvProduct => eval_collective_cv(g, CvVariant::Product, &default_cv_gains()),
            DuanSimon => eval_duan_simon(g),
            _ => Err(incompatible(id, state)),
        },
        AnyState::Finite(s) => {
            let spin_a = Spin::from_dim(s.dim_a())?;
            let spin_b = Spin::from_dim(s.dim_b())?;
            let plan = || InferencePlan::spin_triple(spin_a, spin_b);
            match id {
                ProductSpin => eval_product_criterion(s, &plan()),
                Bowen => eval_bowen(s, &plan()),
                SumTwo => eval_additive_sum_two(s, &plan()),
                SumThreeSpin => eval_additive_sum_three_spin(s, &plan(), spin_b),
                CollectiveSpinSum => eval_spin_collective(s, spin_a, spin_b),
                Linear2 => eval_linear_qubit(s, 2),
                Linear3 => eval_linear_qubit(s, 3),
                LinearSpinJ => {
                    if spin_a != spin_b {
                        return Err(Error::DimensionMismatch {
                            context: "linear-spin-j needs equal spins",
                            expected: s.dim_a(),
                            found: s.dim_b(),
                        });
                    }
                    eval_linear_spin_j(s, spin_b)
                }
                CustomConvex => {
                    let (terms, bound) = sum_two_encoding(&plan())?;
                    eval_additive_convex(s, &terms, bound)
                }
                ReidCv | CollectiveCvSum | CollectiveCvProduct | DuanSimon => Err(incompatible(id, state)),
            }
        }
    }
}

fn default_cv_gains<T: Real>() -> GainMode<T> {
    GainMode::Fixed(vec![-T::one(), T::one()])
}

/// Optimal gains, falling back to 0 where Alice's variance vanishes (the
/// collective variance is then independent of the gain).
fn eval_spin_collective<T: Real>(s: &BipartiteState<T>, spin_a: Spin, spin_b: Spin) -> Result<CriterionResult<T>> {
    let ops_a = spin_operators::<T>(spin_a);
    let ops_b = spin_operators::<T>(spin_b);
    let terms: Vec<CollectiveTerm<T>> = Axis::ALL
        .iter()
        .map(|&a| CollectiveTerm {
            alice: ops_a.component(a).clone(),
            bob: ops_b.component(a).clone(),
        })
        .collect();
    let gains = terms
        .iter()
        .enumerate()
        .map(|(k, t)| match optimal_gain(s, t, k) {
            Err(Error::ZeroVariance(_)) => Ok(T::zero()),
            other => other,
        })
        .collect::<Result<Vec<T>>>()?;
    eval_collective(s, &terms, CollectiveVariant::SumSpin, &GainMode::Fixed(gains), None)
}
