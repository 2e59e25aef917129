//! Phase-1 simplex for feasibility of {x ≥ 0 : A x = b}.
//!
//! Dense tableau with one artificial per row. Pricing is Dantzig's rule,
//! falling back to Bland's anti-cycling rule on runs of degenerate pivots.
//! At an infeasible optimum the simplex multipliers form a Farkas certificate
//! y with yᵀA ≤ 0 and yᵀb > 0.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pivot iterations before the solver gives up.
pub const MAX_ITERATIONS: usize = 200_000;

/// Consecutive degenerate pivots before pricing switches to Bland's rule.
const BLAND_AFTER: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct EqualityProblem<T: Real> {
    rows: usize,
    cols: usize,
    a: Vec<T>,
    b: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Phase1<T: Real> {
    /// x ≥ 0 with max |A x − b| within the feasibility tolerance.
    Feasible { x: Vec<T>, max_residual: T },
    /// Farkas vector y over the original rows and the phase-1 optimum yᵀb.
    Infeasible { y: Vec<T>, infeasibility: T },
}

impl<T: Real> EqualityProblem<T> {
    /// `a` is row-major `rows × cols`.
    pub fn new(rows: usize, cols: usize, a: Vec<T>, b: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || a.len() != rows * cols || b.len() != rows {
            return Err(Error::Solver(format!(
                "constraint shape {rows}x{cols} with {} entries and {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::Solver("non-finite constraint entry".into()));
        }
        Ok(Self { rows, cols, a, b })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn a(&self, i: usize, j: usize) -> T {
        self.a[i * self.cols + j]
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    /// max_i |(A x)_i − b_i|.
    pub fn residual(&self, x: &[T]) -> T {
        (0..self.rows)
            .map(|i| {
                let ax: T = (0..self.cols).map(|j| self.a(i, j) * x[j]).sum();
                (ax - self.b[i]).abs()
            })
            .fold(T::zero(), T::max)
    }

    /// yᵀ A_j for every column j.
    pub fn dual_columns(&self, y: &[T]) -> Vec<T> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| y[i] * self.a(i, j)).sum())
            .collect()
    }

    /// Feasible iff the phase-1 optimum is at most `feas_tol`; every row
    /// residual is then bounded by `feas_tol` as well.
    pub fn solve(&self, feas_tol: T) -> Result<Phase1<T>> {
        let (m, n) = (self.rows, self.cols);
        let width = n + m + 1;
        let rhs = n + m;
        let sign: Vec<T> = self.b.iter().map(|&v| if v < T::zero() { -T::one() } else { T::one() }).collect();
        let mut t = vec![T::zero(); m * width];
        for i in 0..m {
            for j in 0..n {
                t[i * width + j] = sign[i] * self.a(i, j);
            }
            t[i * width + n + i] = T::one();
            t[i * width + rhs] = sign[i] * self.b[i];
        }
        let mut basis: Vec<usize> = (n..n + m).collect();
        // Reduced costs of the phase-1 objective Σ artificials; the last slot
        // holds minus its current value.
        let mut cost = vec![T::zero(); width];
        for i in 0..m {
            for j in 0..n {
                cost[j] -= t[i * width + j];
            }
            cost[rhs] -= t[i * width + rhs];
        }
        let tol = T::ZERO_PROB;

        let mut iterations = 0;
        let mut degenerate_run = 0;
        loop {
            // Dantzig pricing, with Bland's rule while the objective stalls.
            let enter = if degenerate_run >= BLAND_AFTER {
                (0..n + m).find(|&j| cost[j] < -tol)
            } else {
                (0..n + m)
                    .filter(|&j| cost[j] < -tol)
                    .min_by(|&a, &b| cost[a].partial_cmp(&cost[b]).expect("finite costs"))
            };
            let Some(enter) = enter else {
                break;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..m {
                let piv = t[i * width + enter];
                if piv > tol {
                    let ratio = t[i * width + rhs] / piv;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) if ratio < best || (ratio == best && basis[i] < basis[r]) => Some((i, ratio)),
                        keep => keep,
                    };
                }
            }
            let Some((row, step)) = leave else {
                return Err(Error::Solver("phase-1 objective unbounded".into()));
            };
            degenerate_run = if step <= tol { degenerate_run + 1 } else { 0 };
            pivot(&mut t, &mut cost, width, m, row, enter);
            basis[row] = enter;
            iterations += 1;
            if iterations > MAX_ITERATIONS {
                return Err(Error::Solver(format!("no convergence after {MAX_ITERATIONS} pivots")));
            }
        }

        let objective = -cost[rhs];
        if objective <= feas_tol {
            let mut x = vec![T::zero(); n];
            for (i, &var) in basis.iter().enumerate() {
                if var < n {
                    x[var] = t[i * width + rhs].max(T::zero());
                }
            }
            let max_residual = self.residual(&x);
            Ok(Phase1::Feasible { x, max_residual })
        } else {
            // Artificial i has cost 1, so its reduced cost is 1 − y_i.
            let y = (0..m).map(|i| sign[i] * (T::one() - cost[n + i])).collect();
            Ok(Phase1::Infeasible {
                y,
                infeasibility: objective,
            })
        }
    }
}

fn pivot<T: Real>(t: &mut [T], cost: &mut [T], width: usize, m: usize, row: usize, col: usize) {
    let p = t[row * width + col];
    for v in &mut t[row * width..(row + 1) * width] {
        *v /= p;
    }
    let pivot_row: Vec<T> = t[row * width..(row + 1) * width].to_vec();
    for i in 0..m {
        if i == row {
            continue;
        }
        let f = t[i * width + col];
        if f != T::zero() {
            for (v, pr) in t[i * width..(i + 1) * width].iter_mut().zip(&pivot_row) {
                *v -= f * *pr;
            }
            t[i * width + col] = T::zero();
        }
    }
    let f = cost[col];
    if f != T::zero() {
        for (v, pr) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * *pr;
        }
        cost[col] = T::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_feasible_system() {
        // x + y = 1, x − y = 0.2
        let p = EqualityProblem::new(2, 2, vec![1.0f64, 1.0, 1.0, -1.0], vec![1.0, 0.2]).unwrap();
        match p.solve(1e-9).unwrap() {
            Phase1::Feasible { x, max_residual } => {
                assert!((x[0] - 0.6).abs() < 1e-12 && (x[1] - 0.4).abs() < 1e-12);
                assert!(max_residual < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_handled() {
        let p = EqualityProblem::new(1, 2, vec![-1.0, -2.0], vec![-2.0]).unwrap();
        assert!(matches!(p.solve(1e-9).unwrap(), Phase1::Feasible { .. }));
    }

    #[test]
    fn infeasible_system_gives_farkas_vector() {
        // x + y = 1, x + y = 2
        let p = EqualityProblem::new(2, 2, vec![1.0, 1.0, 1.0, 1.0], vec![1.0, 2.0]).unwrap();
        match p.solve(1e-9).unwrap() {
            Phase1::Infeasible { y, infeasibility } => {
                assert!(infeasibility > 0.5);
                assert!(p.dual_columns(&y).iter().all(|&v| v <= 1e-12));
                let yb: f64 = y.iter().zip(p.b()).map(|(a, b)| a * b).sum();
                assert!((yb - infeasibility).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sign_constraint_infeasibility() {
        // x − y = −1 with y = 0 forced by a second row: x + 0y... → x = −1 impossible.
        let p = EqualityProblem::new(2, 2, vec![1.0, -1.0, 0.0, 1.0], vec![-1.0, 0.0]).unwrap();
        match p.solve(1e-9).unwrap() {
            Phase1::Infeasible { y, .. } => {
                assert!(p.dual_columns(&y).iter().all(|&v| v <= 1e-12));
                let yb: f64 = y.iter().zip(p.b()).map(|(a, b)| a * b).sum();
                assert!(yb > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_rows_are_fine() {
        let p = EqualityProblem::new(3, 3, vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0], vec![1.0, 1.0, 0.3]).unwrap();
        match p.solve(1e-9).unwrap() {
            Phase1::Feasible { max_residual, x } => {
                assert!(max_residual < 1e-12);
                assert!(x.iter().all(|&v| v >= 0.0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shape_errors() {
        assert!(EqualityProblem::<f64>::new(2, 2, vec![1.0; 3], vec![0.0; 2]).is_err());
        assert!(EqualityProblem::new(1, 1, vec![f64::NAN], vec![0.0]).is_err());
    }
}
