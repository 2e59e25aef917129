//! Born-rule statistics: measurements, joint and conditional distributions,
//! inference variances and assemblages.
//!
//! Outcome values are attached to effects, never implied by position, so the
//! ±½ spin convention is explicit wherever it is used.

use crate::eigen::{hermitian_eigensystem, hermitian_eigenvalues};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::spin::{Axis, SpinOperators};
use crate::state::{trace_out_a, BipartiteState, DensityMatrix, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementKind {
    Projective,
    Povm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T: Real> {
    pub value: T,
    pub effect: ComplexMatrix<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement<T: Real> {
    label: String,
    outcomes: Vec<Outcome<T>>,
    kind: MeasurementKind,
}

impl<T: Real> Measurement<T> {
    pub fn new(label: impl Into<String>, outcomes: Vec<Outcome<T>>, kind: MeasurementKind) -> Result<Self> {
        let label = label.into();
        let bad = |reason: String| Error::InvalidMeasurement {
            label: label.clone(),
            reason,
        };
        let dim = outcomes
            .first()
            .map(|o| o.effect.rows())
            .ok_or_else(|| bad("no outcomes".into()))?;
        let mut total = ComplexMatrix::zeros(dim, dim);
        for (k, o) in outcomes.iter().enumerate() {
            if o.effect.rows() != dim || !o.effect.is_square() {
                return Err(bad(format!("effect {k} has the wrong shape")));
            }
            if !o.value.is_finite() {
                return Err(bad(format!("outcome {k} has a non-finite value")));
            }
            if !o.effect.is_hermitian(T::SPECTRAL_TOL) {
                return Err(bad(format!("effect {k} is not Hermitian")));
            }
            let min = *hermitian_eigenvalues(&o.effect.hermitian_part())?
                .last()
                .expect("nonempty");
            if min < -T::SPECTRAL_TOL {
                return Err(bad(format!("effect {k} is not positive (eigenvalue {min})")));
            }
            total = total.checked_add(&o.effect)?;
        }
        if total.max_abs_diff(&ComplexMatrix::identity(dim)) > T::STRUCTURAL_TOL {
            return Err(bad("effects do not sum to the identity".into()));
        }
        if kind == MeasurementKind::Projective {
            for (i, oi) in outcomes.iter().enumerate() {
                for (j, oj) in outcomes.iter().enumerate() {
                    let prod = oi.effect.matmul(&oj.effect)?;
                    let target = if i == j { oi.effect.clone() } else { ComplexMatrix::zeros(dim, dim) };
                    if prod.max_abs_diff(&target) > T::SPECTRAL_TOL {
                        let what = if i == j { "idempotent" } else { "orthogonal" };
                        return Err(bad(format!("effects {i},{j} are not {what}")));
                    }
                }
            }
        }
        Ok(Self { label, outcomes, kind })
    }

    pub fn projective(label: impl Into<String>, outcomes: Vec<Outcome<T>>) -> Result<Self> {
        Self::new(label, outcomes, MeasurementKind::Projective)
    }

    pub fn povm(label: impl Into<String>, outcomes: Vec<Outcome<T>>) -> Result<Self> {
        Self::new(label, outcomes, MeasurementKind::Povm)
    }

    /// Spectral measurement of an observable; see [`observable_to_measurement`].
    pub fn from_observable(label: impl Into<String>, obs: &Observable<T>) -> Self {
        let mut m = observable_to_measurement(obs);
        m.label = label.into();
        m
    }

    /// Projective measurement of J_axis with outcomes m = j, …, −j.
    pub fn spin(ops: &SpinOperators<T>, axis: Axis) -> Self {
        Self::from_observable(format!("J{}", axis.label()), ops.component(axis))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn outcomes(&self) -> &[Outcome<T>] {
        &self.outcomes
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].effect.rows()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn values(&self) -> Vec<T> {
        self.outcomes.iter().map(|o| o.value).collect()
    }

    /// Σ_k value_k · effect_k.
    pub fn observable(&self) -> Observable<T> {
        let dim = self.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for o in &self.outcomes {
            acc = &acc + &o.effect.scale(o.value);
        }
        Observable::new(acc.hermitian_part()).expect("sum of Hermitian effects")
    }

    /// Same effects with outcome values passed through `f`.
    pub fn relabeled(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            label: self.label.clone(),
            outcomes: self
                .outcomes
                .iter()
                .map(|o| Outcome {
                    value: f(o.value),
                    effect: o.effect.clone(),
                })
                .collect(),
            kind: self.kind,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// P(k) = Tr[E_k ρ].
    pub fn probabilities(&self, rho: &DensityMatrix<T>) -> Result<Vec<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "measurement on state",
                expected: rho.dim(),
                found: self.dim(),
            });
        }
        self.outcomes
            .iter()
            .map(|o| Ok(o.effect.trace_product(rho.matrix())?.re.max(T::zero())))
            .collect()
    }

    pub fn mean(&self, rho: &DensityMatrix<T>) -> Result<T> {
        Ok(self
            .probabilities(rho)?
            .iter()
            .zip(&self.outcomes)
            .map(|(p, o)| *p * o.value)
            .sum())
    }
}

/// Projective measurement onto the eigenspaces of `obs`. Eigenvalues within
/// `T::MERGE_TOL` of each other are merged; outcomes are ordered descending.
pub fn observable_to_measurement<T: Real>(obs: &Observable<T>) -> Measurement<T> {
    let eig = hermitian_eigensystem(obs.matrix()).expect("observable is Hermitian");
    let n = obs.dim();
    let mut groups: Vec<(Vec<T>, Vec<usize>)> = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        match groups.last_mut() {
            Some((vals, idx)) if (vals[0] - lambda).abs() <= T::MERGE_TOL => {
                vals.push(lambda);
                idx.push(k);
            }
            _ => groups.push((vec![lambda], vec![k])),
        }
    }
    let outcomes = groups
        .into_iter()
        .map(|(vals, idx)| {
            let value = vals.iter().copied().sum::<T>() / T::from_usize_lossy(vals.len());
            let mut effect = ComplexMatrix::zeros(n, n);
            for k in idx {
                effect = &effect + &ComplexMatrix::outer(&eig.vector(k));
            }
            Outcome {
                value,
                effect: effect.hermitian_part(),
            }
        })
        .collect();
    Measurement {
        label: "observable".into(),
        outcomes,
        kind: MeasurementKind::Projective,
    }
}

/// Alice's and Bob's measurement sets and the (a, b) pairs actually performed.
#[derive(Debug, Clone)]
pub struct MeasurementStrategy<T: Real> {
    pub alice: Vec<Measurement<T>>,
    pub bob: Vec<Measurement<T>>,
    pub pairing: Vec<(usize, usize)>,
}

impl<T: Real> MeasurementStrategy<T> {
    pub fn new(alice: Vec<Measurement<T>>, bob: Vec<Measurement<T>>, pairing: Vec<(usize, usize)>) -> Result<Self> {
        if pairing.is_empty() {
            return Err(Error::InvalidStrategy("pairing is empty".into()));
        }
        for &(a, b) in &pairing {
            if a >= alice.len() || b >= bob.len() {
                return Err(Error::InvalidStrategy(format!("pair ({a}, {b}) out of range")));
            }
        }
        for side in [&alice, &bob] {
            if let Some(first) = side.first() {
                if side.iter().any(|m| m.dim() != first.dim()) {
                    return Err(Error::InvalidStrategy("measurements on one side differ in dimension".into()));
                }
            }
        }
        Ok(Self { alice, bob, pairing })
    }

    /// Pairs the i-th Alice measurement with the i-th Bob measurement.
    pub fn matched(alice: Vec<Measurement<T>>, bob: Vec<Measurement<T>>) -> Result<Self> {
        if alice.len() != bob.len() {
            return Err(Error::InvalidStrategy("matched strategy needs equal counts".into()));
        }
        let pairing = (0..alice.len()).map(|i| (i, i)).collect();
        Self::new(alice, bob, pairing)
    }

    /// Every Alice setting against every Bob setting.
    pub fn all_pairs(alice: Vec<Measurement<T>>, bob: Vec<Measurement<T>>) -> Result<Self> {
        let pairing = (0..alice.len())
            .flat_map(|a| (0..bob.len()).map(move |b| (a, b)))
            .collect();
        Self::new(alice, bob, pairing)
    }

    pub fn dim_a(&self) -> usize {
        self.alice[0].dim()
    }

    pub fn dim_b(&self) -> usize {
        self.bob[0].dim()
    }
}

/// P(A, B) for one measurement pair, row-major over (A, B).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T: Real> {
    a_values: Vec<T>,
    b_values: Vec<T>,
    probs: Vec<T>,
}

impl<T: Real> JointDistribution<T> {
    /// Entries down to −1e-12 (f64) are clamped to zero; the total must be 1
    /// within structural tolerance.
    pub fn new(a_values: Vec<T>, b_values: Vec<T>, mut probs: Vec<T>) -> Result<Self> {
        if probs.len() != a_values.len() * b_values.len() || probs.is_empty() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for a {}x{} table",
                probs.len(),
                a_values.len(),
                b_values.len()
            )));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -T::ZERO_PROB {
                return Err(Error::InvalidDistribution(format!("entry {p} is negative")));
            }
            *p = p.max(T::zero());
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::STRUCTURAL_TOL {
            return Err(Error::InvalidDistribution(format!("total probability {total}")));
        }
        Ok(Self {
            a_values,
            b_values,
            probs,
        })
    }

    pub fn a_values(&self) -> &[T] {
        &self.a_values
    }

    pub fn b_values(&self) -> &[T] {
        &self.b_values
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn n_a(&self) -> usize {
        self.a_values.len()
    }

    pub fn n_b(&self) -> usize {
        self.b_values.len()
    }

    pub fn p(&self, a: usize, b: usize) -> T {
        self.probs[a * self.b_values.len() + b]
    }

    pub fn alice_marginal(&self) -> Vec<T> {
        (0..self.n_a()).map(|a| (0..self.n_b()).map(|b| self.p(a, b)).sum()).collect()
    }

    pub fn bob_marginal(&self) -> Vec<T> {
        (0..self.n_b()).map(|b| (0..self.n_a()).map(|a| self.p(a, b)).sum()).collect()
    }

    pub fn bob_mean(&self) -> T {
        self.bob_marginal().iter().zip(&self.b_values).map(|(p, v)| *p * *v).sum()
    }

    /// Unconditional Δ²B.
    pub fn bob_variance(&self) -> T {
        let mean = self.bob_mean();
        self.bob_marginal()
            .iter()
            .zip(&self.b_values)
            .map(|(p, v)| *p * (*v - mean) * (*v - mean))
            .sum()
    }

    /// Σ A·B·P(A,B).
    pub fn correlation(&self) -> T {
        let mut acc = T::zero();
        for (a, va) in self.a_values.iter().enumerate() {
            for (b, vb) in self.b_values.iter().enumerate() {
                acc += self.p(a, b) * *va * *vb;
            }
        }
        acc
    }

    /// ⟨B⟩_A for each Alice outcome, `None` where P(A) is below `T::ZERO_PROB`.
    pub fn conditional_means(&self) -> Vec<Option<T>> {
        (0..self.n_a())
            .map(|a| {
                conditional_distribution(self, a)
                    .ok()
                    .map(|(cond, _)| cond.iter().zip(&self.b_values).map(|(p, v)| *p * *v).sum())
            })
            .collect()
    }

    /// p·self + (1−p)·other over identical outcome sets.
    pub fn mix(&self, p: T, other: &Self) -> Result<Self> {
        if self.a_values != other.a_values || self.b_values != other.b_values {
            return Err(Error::InvalidDistribution("mixing tables with different outcomes".into()));
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(x, y)| p * *x + (T::one() - p) * *y)
            .collect();
        Self::new(self.a_values.clone(), self.b_values.clone(), probs)
    }
}

/// P(A,B) = Tr[W (E_A ⊗ F_B)].
pub fn measure_joint<T: Real>(
    state: &BipartiteState<T>,
    a: &Measurement<T>,
    b: &Measurement<T>,
) -> Result<JointDistribution<T>> {
    let mut probs = Vec::with_capacity(a.len() * b.len());
    for oa in a.outcomes() {
        for ob in b.outcomes() {
            probs.push(state.joint_weight(&oa.effect, &ob.effect)?);
        }
    }
    JointDistribution::new(a.values(), b.values(), probs)
}

/// (P(B|A), P(A)) for Alice outcome index `given_a`.
pub fn conditional_distribution<T: Real>(j: &JointDistribution<T>, given_a: usize) -> Result<(Vec<T>, T)> {
    if given_a >= j.n_a() {
        return Err(Error::InvalidDistribution(format!("no alice outcome {given_a}")));
    }
    let row: Vec<T> = (0..j.n_b()).map(|b| j.p(given_a, b)).collect();
    let weight: T = row.iter().copied().sum();
    if weight < T::ZERO_PROB {
        return Err(Error::ZeroProbability(given_a));
    }
    Ok((row.into_iter().map(|p| p / weight).collect(), weight))
}

/// Alice's estimate B_est(A) of Bob's outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimator<T: Real> {
    /// ⟨B⟩_A, the optimal estimate.
    ConditionalMean,
    /// B_est(A) = −g·A + ⟨B + g·A⟩.
    Linear(T),
    /// Explicit estimate per Alice outcome, in outcome order.
    Table(Vec<T>),
}

/// ⟨(B − B_est(A))²⟩ over P(A,B).
pub fn inference_variance<T: Real>(j: &JointDistribution<T>, est: &Estimator<T>) -> Result<T> {
    let estimates: Vec<T> = match est {
        Estimator::ConditionalMean => return Ok(min_inference_variance(j)),
        Estimator::Linear(g) => {
            let mut shift = T::zero();
            for (a, va) in j.a_values.iter().enumerate() {
                for (b, vb) in j.b_values.iter().enumerate() {
                    shift += j.p(a, b) * (*vb + *g * *va);
                }
            }
            j.a_values.iter().map(|va| shift - *g * *va).collect()
        }
        Estimator::Table(t) => {
            if t.len() != j.n_a() {
                return Err(Error::InvalidEstimator(format!(
                    "table has {} entries for {} alice outcomes",
                    t.len(),
                    j.n_a()
                )));
            }
            t.clone()
        }
    };
    let mut acc = T::zero();
    for (a, est_a) in estimates.iter().enumerate() {
        for (b, vb) in j.b_values.iter().enumerate() {
            let d = *vb - *est_a;
            acc += j.p(a, b) * d * d;
        }
    }
    Ok(acc)
}

/// Σ_A P(A) Δ²(B|A); outcomes with P(A) below `T::ZERO_PROB` contribute nothing.
pub fn min_inference_variance<T: Real>(j: &JointDistribution<T>) -> T {
    let mut acc = T::zero();
    for a in 0..j.n_a() {
        if let Ok((cond, weight)) = conditional_distribution(j, a) {
            let mean: T = cond.iter().zip(&j.b_values).map(|(p, v)| *p * *v).sum();
            let var: T = cond
                .iter()
                .zip(&j.b_values)
                .map(|(p, v)| *p * (*v - mean) * (*v - mean))
                .sum();
            acc += weight * var;
        }
    }
    acc
}

/// |⟨B⟩|_inf = Σ_A P(A) |⟨B⟩_A|.
pub fn inferred_abs_mean<T: Real>(j: &JointDistribution<T>) -> T {
    let weights = j.alice_marginal();
    j.conditional_means()
        .iter()
        .zip(weights)
        .filter_map(|(m, w)| m.map(|m| w * m.abs()))
        .sum()
}

/// Δ²(g·A + B) on the joint state.
pub fn collective_variance<T: Real>(
    state: &BipartiteState<T>,
    a_obs: &Observable<T>,
    b_obs: &Observable<T>,
    g: T,
) -> Result<T> {
    let ia = ComplexMatrix::identity(state.dim_a());
    let ib = ComplexMatrix::identity(state.dim_b());
    let op = &state.lift(a_obs.matrix(), &ib)?.scale(g) + &state.lift(&ia, b_obs.matrix())?;
    let op = Observable::new(op)?;
    state.density().variance(&op)
}

/// Unnormalized conditional states ρ̃_a^A = Tr_A[W (Π_a^A ⊗ I)], one list per
/// Alice setting.
#[derive(Debug, Clone)]
pub struct Assemblage<T: Real> {
    members: Vec<Vec<(T, ComplexMatrix<T>)>>,
}

impl<T: Real> Assemblage<T> {
    /// Validates positivity of every member and the no-signalling condition.
    pub fn new(members: Vec<Vec<(T, ComplexMatrix<T>)>>) -> Result<Self> {
        if members.is_empty() || members.iter().any(|m| m.is_empty()) {
            return Err(Error::Malformed("assemblage needs at least one outcome per setting".into()));
        }
        for setting in &members {
            for (_, rho) in setting {
                if !rho.is_hermitian(T::SPECTRAL_TOL) {
                    return Err(Error::NotHermitian(rho.hermiticity_defect().to_f64_lossy()));
                }
                let min = *hermitian_eigenvalues(&rho.hermitian_part())?.last().expect("nonempty");
                if min < -T::SPECTRAL_TOL {
                    return Err(Error::NotPositive(min.to_f64_lossy()));
                }
            }
        }
        let out = Self { members };
        let defect = out.no_signalling_defect();
        if defect > T::SPECTRAL_TOL {
            return Err(Error::Malformed(format!("assemblage signals (defect {defect})")));
        }
        Ok(out)
    }

    pub fn settings(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self, setting: usize) -> &[(T, ComplexMatrix<T>)] {
        &self.members[setting]
    }

    /// Σ_A ρ̃_a^A per setting.
    pub fn marginals(&self) -> Vec<ComplexMatrix<T>> {
        self.members
            .iter()
            .map(|setting| {
                let d = setting[0].1.rows();
                setting.iter().fold(ComplexMatrix::zeros(d, d), |acc, (_, r)| &acc + r)
            })
            .collect()
    }

    /// Largest entrywise spread of the marginals across settings.
    pub fn no_signalling_defect(&self) -> T {
        let marg = self.marginals();
        marg.iter()
            .skip(1)
            .map(|m| m.max_abs_diff(&marg[0]))
            .fold(T::zero(), T::max)
    }
}

pub fn assemblage_from_state<T: Real>(
    state: &BipartiteState<T>,
    alice_measurements: &[Measurement<T>],
) -> Result<Assemblage<T>> {
    let ib = ComplexMatrix::identity(state.dim_b());
    let mut members = Vec::with_capacity(alice_measurements.len());
    for m in alice_measurements {
        let mut setting = Vec::with_capacity(m.len());
        for o in m.outcomes() {
            let lifted = state.lift(&o.effect, &ib)?;
            let prod = state.matrix().matmul(&lifted)?;
            let reduced = trace_out_a(&prod, state.dim_a(), state.dim_b()).hermitian_part();
            setting.push((o.value, reduced));
        }
        members.push(setting);
    }
    Assemblage::new(members)
}

/// Born-rule outcome distribution of a single measurement, as (value, prob).
pub fn outcome_distribution<T: Real>(m: &Measurement<T>, rho: &DensityMatrix<T>) -> Result<Vec<(T, T)>> {
    Ok(m.values().into_iter().zip(m.probabilities(rho)?).collect())
}
