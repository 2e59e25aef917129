//! LHS-model feasibility by linear programming, with rigorous certification.
//!
//! `lhs_feasible` searches for a hidden-state model over a finite grid of
//! Bob states and Alice's deterministic strategies. Grid infeasibility is
//! evidence only: the Farkas dual becomes a [`SteeringFunctional`], and
//! [`certify_steering`] bounds it over all hidden states exactly, by taking
//! the largest eigenvalue of the aggregated Bob operator per strategy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eigen::max_eigenvalue;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::lp::{EqualityProblem, Phase1};
use crate::measurement::{measure_joint, JointDistribution, Measurement, MeasurementStrategy};
use crate::random;
use crate::scalar::Real;
use crate::spin::{spin_operators, Axis, Spin};
use crate::state::{BipartiteState, DensityMatrix};

/// Refuse to enumerate more deterministic strategies than this.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// Qubit spin measurements along mutually unbiased axes: X, Z for two, X, Y, Z for three.
pub fn qubit_mub<T: Real>(count: usize) -> Result<Vec<Measurement<T>>> {
    let axes: &[Axis] = match count {
        2 => &[Axis::X, Axis::Z],
        3 => &Axis::ALL,
        _ => {
            return Err(Error::OutOfRange {
                name: "mub count".into(),
                value: count as f64,
                range: "{2, 3}".into(),
            })
        }
    };
    let ops = spin_operators::<T>(Spin::HALF);
    Ok(axes.iter().map(|&a| Measurement::spin(&ops, a)).collect())
}

/// Measured statistics: one joint table per pairing entry of the strategy.
#[derive(Debug, Clone)]
pub struct Phenomenon<T: Real> {
    strategy: MeasurementStrategy<T>,
    tables: Vec<JointDistribution<T>>,
}

impl<T: Real> Phenomenon<T> {
    pub fn new(strategy: MeasurementStrategy<T>, tables: Vec<JointDistribution<T>>) -> Result<Self> {
        if tables.len() != strategy.pairing.len() {
            return Err(Error::DimensionMismatch {
                context: "tables per pairing entry",
                expected: strategy.pairing.len(),
                found: tables.len(),
            });
        }
        for (&(a, b), t) in strategy.pairing.iter().zip(&tables) {
            if t.n_a() != strategy.alice[a].len() || t.n_b() != strategy.bob[b].len() {
                return Err(Error::InvalidDistribution(format!(
                    "table for pair ({a}, {b}) is {}x{}, measurements have {}x{} outcomes",
                    t.n_a(),
                    t.n_b(),
                    strategy.alice[a].len(),
                    strategy.bob[b].len()
                )));
            }
        }
        let tol = T::SPECTRAL_TOL;
        for a in 0..strategy.alice.len() {
            let marginals: Vec<Vec<T>> = strategy
                .pairing
                .iter()
                .zip(&tables)
                .filter(|((pa, _), _)| *pa == a)
                .map(|(_, t)| t.alice_marginal())
                .collect();
            for m in marginals.iter().skip(1) {
                let gap = m.iter().zip(&marginals[0]).map(|(x, y)| (*x - *y).abs()).fold(T::zero(), T::max);
                if gap > tol {
                    return Err(Error::InvalidDistribution(format!(
                        "Alice marginals for setting {a} depend on Bob's setting by {gap}"
                    )));
                }
            }
        }
        Ok(Self { strategy, tables })
    }

    /// Born-rule statistics of `state` for every pairing entry.
    pub fn from_state(state: &BipartiteState<T>, strategy: MeasurementStrategy<T>) -> Result<Self> {
        if strategy.dim_a() != state.dim_a() || strategy.dim_b() != state.dim_b() {
            return Err(Error::DimensionMismatch {
                context: "measurement strategy vs state",
                expected: state.dim_a() * state.dim_b(),
                found: strategy.dim_a() * strategy.dim_b(),
            });
        }
        let tables = strategy
            .pairing
            .iter()
            .map(|&(a, b)| measure_joint(state, &strategy.alice[a], &strategy.bob[b]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(strategy, tables)
    }

    pub fn strategy(&self) -> &MeasurementStrategy<T> {
        &self.strategy
    }

    pub fn tables(&self) -> &[JointDistribution<T>] {
        &self.tables
    }

    /// p·self + (1−p)·other over the same strategy.
    pub fn mix(&self, p: T, other: &Self) -> Result<Self> {
        if other.tables.len() != self.tables.len() {
            return Err(Error::DimensionMismatch {
                context: "phenomenon mixture",
                expected: self.tables.len(),
                found: other.tables.len(),
            });
        }
        let tables = self
            .tables
            .iter()
            .zip(&other.tables)
            .map(|(a, b)| a.mix(p, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.strategy.clone(), tables)
    }

    fn alice_outcome_counts(&self) -> Vec<usize> {
        self.strategy.alice.iter().map(Measurement::len).collect()
    }
}

/// Finite set of candidate hidden states for Bob.
#[derive(Debug, Clone)]
pub struct HiddenStateGrid<T: Real> {
    states: Vec<DensityMatrix<T>>,
    resolution: usize,
}

impl<T: Real> HiddenStateGrid<T> {
    /// `points` pure states plus the maximally mixed state. Qubits use a
    /// golden-spiral Bloch-sphere placement; larger dimensions draw Haar
    /// states from a ChaCha stream seeded with `seed`.
    pub fn new(dim: usize, points: usize, seed: u64) -> Result<Self> {
        if points == 0 {
            return Err(Error::EmptyGrid);
        }
        let mut states = match dim {
            0 | 1 => {
                return Err(Error::OutOfRange {
                    name: "grid dimension".into(),
                    value: dim as f64,
                    range: ">= 2".into(),
                })
            }
            2 => golden_spiral(points),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..points).map(|_| random::pure_state(dim, &mut rng)).collect()
            }
        };
        states.push(DensityMatrix::maximally_mixed(dim));
        Ok(Self { states, resolution: points })
    }

    pub fn from_states(states: Vec<DensityMatrix<T>>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::EmptyGrid);
        };
        let dim = first.dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                context: "grid state dimension",
                expected: dim,
                found: bad.dim(),
            });
        }
        let resolution = states.len();
        Ok(Self { states, resolution })
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}

fn golden_spiral<T: Real>(n: usize) -> Vec<DensityMatrix<T>> {
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    let nn = T::from_usize_lossy(n);
    (0..n)
        .map(|k| {
            let kk = T::from_usize_lossy(k);
            let z = T::one() - (T::lit(2.0) * kk + T::one()) / nn;
            let r = (T::one() - z * z).max(T::zero()).sqrt();
            let phi = kk * golden;
            bloch_state(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// (I + x σx + y σy + z σz) / 2.
pub fn bloch_state<T: Real>(x: T, y: T, z: T) -> DensityMatrix<T> {
    use num_complex::Complex;
    let h = T::lit(0.5);
    let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Complex::new(h * (T::one() + z), T::zero()),
        (1, 1) => Complex::new(h * (T::one() - z), T::zero()),
        (0, 1) => Complex::new(h * x, -h * y),
        _ => Complex::new(h * x, h * y),
    });
    DensityMatrix::new(m).expect("Bloch vector inside the unit ball")
}

/// One fixed outcome index per Alice setting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterministicStrategy {
    pub assignment: Vec<usize>,
}

/// Every deterministic strategy for the given outcome counts, in mixed-radix
/// order with the first setting varying fastest.
pub fn enumerate_strategies(outcome_counts: &[usize]) -> Result<Vec<DeterministicStrategy>> {
    let total = outcome_counts
        .iter()
        .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
        .unwrap_or(u128::MAX);
    if total > ENUMERATION_CAP {
        return Err(Error::EnumerationOverflow(total));
    }
    if total == 0 {
        return Err(Error::InvalidStrategy("a setting has no outcomes".into()));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut current = vec![0usize; outcome_counts.len()];
    for _ in 0..total {
        out.push(DeterministicStrategy {
            assignment: current.clone(),
        });
        for (digit, &radix) in current.iter_mut().zip(outcome_counts) {
            *digit += 1;
            if *digit < radix {
                break;
            }
            *digit = 0;
        }
    }
    Ok(out)
}

/// Nonnegative weights over (strategy, grid state) reproducing the tables.
#[derive(Debug, Clone)]
pub struct LhsWitness<T: Real> {
    strategies: Vec<DeterministicStrategy>,
    grid_len: usize,
    weights: Vec<T>,
    pub max_residual: T,
}

impl<T: Real> LhsWitness<T> {
    pub fn strategies(&self) -> &[DeterministicStrategy] {
        &self.strategies
    }

    /// Weight of strategy `k` with hidden state `lambda`.
    pub fn weight(&self, k: usize, lambda: usize) -> T {
        self.weights[k * self.grid_len + lambda]
    }

    /// (strategy, grid index, weight) for weights above the zero threshold.
    pub fn support(&self) -> Vec<(usize, usize, T)> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > T::ZERO_PROB)
            .map(|(i, &w)| (i / self.grid_len, i % self.grid_len, w))
            .collect()
    }

    /// p·self + (1−p)·other; both must come from the same strategy set and grid.
    pub fn blend(&self, p: T, other: &Self) -> Result<Self> {
        if self.weights.len() != other.weights.len() || self.grid_len != other.grid_len {
            return Err(Error::DimensionMismatch {
                context: "witness blend",
                expected: self.weights.len(),
                found: other.weights.len(),
            });
        }
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| p * *a + (T::one() - p) * *b)
            .collect();
        Ok(Self {
            strategies: self.strategies.clone(),
            grid_len: self.grid_len,
            weights,
            max_residual: T::zero(),
        })
    }

    /// Largest deviation between the model's predictions and the tables.
    pub fn residual(&self, phen: &Phenomenon<T>, grid: &HiddenStateGrid<T>) -> Result<T> {
        let problem = build_problem(phen, grid, &self.strategies)?;
        Ok(problem.residual(&self.weights))
    }
}

#[derive(Debug, Clone)]
pub struct DualCertificate<T: Real> {
    /// One entry per (pairing entry, A, B) row, then the normalization row.
    pub y: Vec<T>,
    /// Phase-1 optimum, equal to yᵀb.
    pub infeasibility: T,
}

impl<T: Real> DualCertificate<T> {
    pub fn scaled(&self, c: T) -> Self {
        Self {
            y: self.y.iter().map(|&v| v * c).collect(),
            infeasibility: self.infeasibility * c,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Feasibility<T: Real> {
    Feasible(LhsWitness<T>),
    GridInfeasible(DualCertificate<T>),
}

impl<T: Real> Feasibility<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

fn bob_probabilities<T: Real>(
    strategy: &MeasurementStrategy<T>,
    grid: &HiddenStateGrid<T>,
) -> Result<Vec<Vec<Vec<T>>>> {
    strategy
        .bob
        .iter()
        .map(|m| grid.states().iter().map(|rho| m.probabilities(rho)).collect())
        .collect()
}

fn build_problem<T: Real>(
    phen: &Phenomenon<T>,
    grid: &HiddenStateGrid<T>,
    strategies: &[DeterministicStrategy],
) -> Result<EqualityProblem<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let strategy = phen.strategy();
    if grid.dim() != strategy.dim_b() {
        return Err(Error::DimensionMismatch {
            context: "grid vs Bob dimension",
            expected: strategy.dim_b(),
            found: grid.dim(),
        });
    }
    let bob_p = bob_probabilities(strategy, grid)?;
    let offsets = row_offsets(phen);
    let rows = offsets.last().copied().unwrap_or(0) + 1;
    let l = grid.len();
    let cols = strategies.len() * l;
    let mut a = vec![T::zero(); rows * cols];
    for (k, s) in strategies.iter().enumerate() {
        for lambda in 0..l {
            let col = k * l + lambda;
            for (p, &(ai, bi)) in strategy.pairing.iter().enumerate() {
                let n_b = phen.tables[p].n_b();
                let outcome = s.assignment[ai];
                for (bo, &prob) in bob_p[bi][lambda].iter().enumerate() {
                    a[(offsets[p] + outcome * n_b + bo) * cols + col] = prob;
                }
            }
            a[(rows - 1) * cols + col] = T::one();
        }
    }
    let mut b: Vec<T> = phen.tables.iter().flat_map(|t| t.probs().iter().copied()).collect();
    b.push(T::one());
    EqualityProblem::new(rows, cols, a, b)
}

/// Starting row of each pairing entry, followed by the total table row count.
fn row_offsets<T: Real>(phen: &Phenomenon<T>) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(phen.tables.len() + 1);
    let mut acc = 0;
    offsets.push(0);
    for t in &phen.tables {
        acc += t.n_a() * t.n_b();
        offsets.push(acc);
    }
    offsets
}

/// Searches for an LHS model restricted to `grid`.
pub fn lhs_feasible<T: Real>(phen: &Phenomenon<T>, grid: &HiddenStateGrid<T>) -> Result<Feasibility<T>> {
    let strategies = enumerate_strategies(&phen.alice_outcome_counts())?;
    let problem = build_problem(phen, grid, &strategies)?;
    match problem.solve(T::SPECTRAL_TOL)? {
        Phase1::Feasible { x, max_residual } => Ok(Feasibility::Feasible(LhsWitness {
            strategies,
            grid_len: grid.len(),
            weights: x,
            max_residual,
        })),
        Phase1::Infeasible { y, infeasibility } => Ok(Feasibility::GridInfeasible(DualCertificate { y, infeasibility })),
    }
}

/// Linear functional Σ f[p][A, B] · P_p(A, B) over the pairing entries.
#[derive(Debug, Clone, Serialize)]
pub struct SteeringFunctional<T: Real> {
    /// Row-major (A, B) coefficients per pairing entry.
    pub coefficients: Vec<Vec<T>>,
    /// Bound over the grid that produced the functional, if any.
    pub grid_bound: Option<T>,
    pub observed_value: T,
}

impl<T: Real> SteeringFunctional<T> {
    /// Functional with the given coefficients, evaluated on `phen`.
    pub fn new(phen: &Phenomenon<T>, coefficients: Vec<Vec<T>>) -> Result<Self> {
        let mut f = Self {
            coefficients,
            grid_bound: None,
            observed_value: T::zero(),
        };
        f.observed_value = f.evaluate(phen)?;
        Ok(f)
    }

    /// f[p][A, B] = sign · α_A · β_B: the correlation sum Σ_p sign·⟨A_p B_p⟩.
    pub fn correlation(phen: &Phenomenon<T>, sign: T) -> Result<Self> {
        let coefficients = phen
            .tables
            .iter()
            .map(|t| {
                t.a_values()
                    .iter()
                    .flat_map(|&a| t.b_values().iter().map(move |&b| sign * a * b))
                    .collect()
            })
            .collect();
        Self::new(phen, coefficients)
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|r| r.iter().map(|&v| v * c).collect()).collect(),
            grid_bound: self.grid_bound.map(|g| g * c),
            observed_value: self.observed_value * c,
        }
    }

    /// Σ f·P on `phen`'s tables.
    pub fn evaluate(&self, phen: &Phenomenon<T>) -> Result<T> {
        self.check_shape(phen)?;
        Ok(self
            .coefficients
            .iter()
            .zip(&phen.tables)
            .map(|(f, t)| f.iter().zip(t.probs()).map(|(a, b)| *a * *b).sum::<T>())
            .sum())
    }

    /// max |f|.
    pub fn scale(&self) -> T {
        self.coefficients.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    fn check_shape(&self, phen: &Phenomenon<T>) -> Result<()> {
        if self.coefficients.len() != phen.tables.len() {
            return Err(Error::DimensionMismatch {
                context: "functional blocks per pairing entry",
                expected: phen.tables.len(),
                found: self.coefficients.len(),
            });
        }
        for (f, t) in self.coefficients.iter().zip(&phen.tables) {
            if f.len() != t.probs().len() {
                return Err(Error::DimensionMismatch {
                    context: "functional block size",
                    expected: t.probs().len(),
                    found: f.len(),
                });
            }
        }
        if self.coefficients.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Malformed("non-finite functional coefficient".into()));
        }
        Ok(())
    }
}

/// Converts a Farkas dual into a functional whose grid bound is −y_norm.
pub fn functional_from_dual<T: Real>(
    phen: &Phenomenon<T>,
    grid: &HiddenStateGrid<T>,
    dual: &DualCertificate<T>,
) -> Result<SteeringFunctional<T>> {
    let offsets = row_offsets(phen);
    let rows = offsets[phen.tables.len()] + 1;
    if dual.y.len() != rows {
        return Err(Error::DimensionMismatch {
            context: "dual vector length",
            expected: rows,
            found: dual.y.len(),
        });
    }
    let strategies = enumerate_strategies(&phen.alice_outcome_counts())?;
    let problem = build_problem(phen, grid, &strategies)?;
    let scale = dual.y.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if !(scale > T::zero()) || dual.y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Separation("dual vector is zero or non-finite".into()));
    }
    let worst_column = problem.dual_columns(&dual.y).into_iter().fold(T::neg_infinity(), T::max);
    let observed: T = dual.y.iter().zip(problem.b()).map(|(a, b)| *a * *b).sum();
    if worst_column > T::SPECTRAL_TOL * scale || observed <= worst_column {
        return Err(Error::Separation(format!(
            "grid columns reach {worst_column}, data reaches {observed}"
        )));
    }
    let coefficients = (0..phen.tables.len())
        .map(|p| dual.y[offsets[p]..offsets[p + 1]].to_vec())
        .collect();
    let mut f = SteeringFunctional::new(phen, coefficients)?;
    f.grid_bound = Some(-dual.y[rows - 1]);
    Ok(f)
}

/// Outcome of the exact, grid-free bound computation.
#[derive(Debug, Clone, Serialize)]
pub struct Certification<T: Real> {
    pub certified: bool,
    /// max over deterministic strategies of λ_max of the aggregated Bob operator.
    pub lhs_bound: T,
    /// Σ f·P recomputed from the tables.
    pub observed_value: T,
    /// Required excess over the bound: tolerance × max |f|.
    pub threshold: T,
    pub maximizer: DeterministicStrategy,
}

/// Exact LHS bound of `functional` and the steering verdict for `phen`.
pub fn certify_steering<T: Real>(phen: &Phenomenon<T>, functional: &SteeringFunctional<T>) -> Result<Certification<T>> {
    let observed_value = functional.evaluate(phen)?;
    let strategy = phen.strategy();
    let strategies = enumerate_strategies(&phen.alice_outcome_counts())?;
    let dim = strategy.dim_b();
    let mut best: Option<(T, usize)> = None;
    for (k, s) in strategies.iter().enumerate() {
        let mut op = ComplexMatrix::zeros(dim, dim);
        for ((&(ai, bi), f), t) in strategy.pairing.iter().zip(&functional.coefficients).zip(&phen.tables) {
            let a = s.assignment[ai];
            for (bo, outcome) in strategy.bob[bi].outcomes().iter().enumerate() {
                let c = f[a * t.n_b() + bo];
                if c != T::zero() {
                    op = &op + &outcome.effect.scale(c);
                }
            }
        }
        let top = max_eigenvalue(&op.hermitian_part())?;
        if best.is_none_or(|(v, _)| top > v) {
            best = Some((top, k));
        }
    }
    let (lhs_bound, k) = best.expect("at least one strategy");
    let threshold = T::SPECTRAL_TOL * functional.scale();
    Ok(Certification {
        certified: functional.scale() > T::zero() && observed_value > lhs_bound + threshold,
        lhs_bound,
        observed_value,
        threshold,
        maximizer: strategies[k].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn werner(mu: f64) -> BipartiteState<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)];
        let singlet = DensityMatrix::pure(&psi).unwrap();
        let mixed = DensityMatrix::maximally_mixed(4);
        BipartiteState::new(DensityMatrix::mixture(&[(mu, &singlet), (1.0 - mu, &mixed)]).unwrap(), 2, 2).unwrap()
    }

    fn mub_phen(mu: f64, n: usize) -> Phenomenon<f64> {
        let ms = qubit_mub::<f64>(n).unwrap();
        let strategy = MeasurementStrategy::matched(ms.clone(), ms).unwrap();
        Phenomenon::from_state(&werner(mu), strategy).unwrap()
    }

    #[test]
    fn golden_spiral_states_are_pure() {
        let grid = HiddenStateGrid::<f64>::new(2, 50, 0).unwrap();
        assert_eq!(grid.len(), 51);
        for s in &grid.states()[..50] {
            let ev = s.eigenvalues();
            assert!((ev[0] - 1.0).abs() < 1e-12 && ev[1].abs() < 1e-12);
        }
    }

    #[test]
    fn qutrit_grid_is_seeded() {
        let a = HiddenStateGrid::<f64>::new(3, 10, 7).unwrap();
        let b = HiddenStateGrid::<f64>::new(3, 10, 7).unwrap();
        assert_eq!(a.states()[4].matrix(), b.states()[4].matrix());
        assert!(matches!(HiddenStateGrid::<f64>::new(2, 0, 0), Err(Error::EmptyGrid)));
    }

    #[test]
    fn strategy_enumeration_counts_and_caps() {
        assert_eq!(enumerate_strategies(&[2, 3]).unwrap().len(), 6);
        assert!(matches!(
            enumerate_strategies(&[10; 7]),
            Err(Error::EnumerationOverflow(10_000_000))
        ));
        assert!(matches!(enumerate_strategies(&[usize::MAX; 4]), Err(Error::EnumerationOverflow(_))));
    }

    #[test]
    fn low_visibility_werner_is_feasible() {
        let grid = HiddenStateGrid::new(2, 200, 0).unwrap();
        match lhs_feasible(&mub_phen(0.4, 3), &grid).unwrap() {
            Feasibility::Feasible(w) => assert!(w.max_residual <= 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn high_visibility_werner_is_certified() {
        let phen = mub_phen(0.9, 3);
        let grid = HiddenStateGrid::new(2, 200, 0).unwrap();
        let Feasibility::GridInfeasible(dual) = lhs_feasible(&phen, &grid).unwrap() else {
            panic!("expected grid infeasibility");
        };
        let f = functional_from_dual(&phen, &grid, &dual).unwrap();
        let cert = certify_steering(&phen, &f).unwrap();
        assert!(cert.certified, "{cert:?}");
        let scaled = functional_from_dual(&phen, &grid, &dual.scaled(7.5)).unwrap();
        assert!(certify_steering(&phen, &scaled).unwrap().certified);
    }

    #[test]
    fn correlation_functional_bound() {
        for (mu, expect) in [(0.9, true), (0.5, false)] {
            let phen = mub_phen(mu, 3);
            let f = SteeringFunctional::correlation(&phen, -1.0).unwrap();
            let cert = certify_steering(&phen, &f).unwrap();
            assert!((cert.lhs_bound - 3f64.sqrt() / 4.0).abs() < 1e-9);
            assert!((cert.observed_value - 0.75 * mu).abs() < 1e-12);
            assert_eq!(cert.certified, expect);
        }
    }

    #[test]
    fn inconsistent_marginals_rejected() {
        let ms = qubit_mub::<f64>(2).unwrap();
        let strategy = MeasurementStrategy::all_pairs(ms[..1].to_vec(), ms).unwrap();
        let even = JointDistribution::new(vec![0.5, -0.5], vec![0.5, -0.5], vec![0.25; 4]).unwrap();
        let skew = JointDistribution::new(vec![0.5, -0.5], vec![0.5, -0.5], vec![0.4, 0.4, 0.1, 0.1]).unwrap();
        assert!(Phenomenon::new(strategy.clone(), vec![even.clone(), even.clone()]).is_ok());
        assert!(Phenomenon::new(strategy, vec![even, skew]).is_err());
    }
}
