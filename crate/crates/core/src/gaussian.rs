//! Continuous-variable states described by covariance matrices.
//!
//! Quadratures are ordered (x₁, p₁, …, xₙ, pₙ) with [x, p] = 2i, so the vacuum
//! has covariance I and Δx·Δp ≥ 1.

use num_complex::Complex;

use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Quadrature indices of a two-mode state.
pub const XA: usize = 0;
pub const PA: usize = 1;
pub const XB: usize = 2;
pub const PB: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState<T: Real> {
    n_modes: usize,
    cov: Vec<T>,
    mean: Vec<T>,
}

impl<T: Real> GaussianState<T> {
    /// `cov` is row-major 2n × 2n.
    pub fn new(n_modes: usize, cov: Vec<T>, mean: Vec<T>) -> Result<Self> {
        let n = 2 * n_modes;
        if n_modes == 0 || cov.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "covariance matrix",
                expected: n * n,
                found: cov.len(),
            });
        }
        if mean.len() != n {
            return Err(Error::DimensionMismatch {
                context: "mean vector",
                expected: n,
                found: mean.len(),
            });
        }
        let mut asym = T::zero();
        for i in 0..n {
            for j in 0..n {
                asym = asym.max((cov[i * n + j] - cov[j * n + i]).abs());
            }
        }
        if asym > T::STRUCTURAL_TOL {
            return Err(Error::NotHermitian(asym.to_f64_lossy()));
        }
        let state = Self { n_modes, cov, mean };
        let min = state.physicality_margin()?;
        let scale = state.cov.iter().fold(T::one(), |m, v| m.max(v.abs()));
        if min < -T::SPECTRAL_TOL * scale {
            return Err(Error::NotPositive(min.to_f64_lossy()));
        }
        Ok(state)
    }

    pub fn vacuum(n_modes: usize) -> Self {
        let n = 2 * n_modes;
        let cov = (0..n * n).map(|k| if k / n == k % n { T::one() } else { T::zero() }).collect();
        Self {
            n_modes,
            cov,
            mean: vec![T::zero(); n],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cov(&self) -> &[T] {
        &self.cov
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn covariance(&self, i: usize, j: usize) -> T {
        self.cov[i * 2 * self.n_modes + j]
    }

    /// Smallest eigenvalue of cov + iΩ; non-negative for physical states.
    pub fn physicality_margin(&self) -> Result<T> {
        let n = 2 * self.n_modes;
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            let omega = if i / 2 != j / 2 {
                T::zero()
            } else if i % 2 == 0 && j == i + 1 {
                T::one()
            } else if i % 2 == 1 && j + 1 == i {
                -T::one()
            } else {
                T::zero()
            };
            Complex::new(self.cov[i * n + j], omega)
        });
        Ok(*hermitian_eigenvalues(&m)?.last().expect("nonempty"))
    }

    /// vᵀ·cov·v, the variance of Σ v_k q_k.
    pub fn linear_combination_variance(&self, coeffs: &[T]) -> Result<T> {
        let n = 2 * self.n_modes;
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                context: "quadrature coefficients",
                expected: n,
                found: coeffs.len(),
            });
        }
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += coeffs[i] * self.cov[i * n + j] * coeffs[j];
            }
        }
        Ok(acc)
    }

    /// Variance of `target` conditioned on `given`: σ_tt − σ_tg²/σ_gg.
    pub fn conditional_min_variance(&self, target: usize, given: usize) -> Result<T> {
        let n = 2 * self.n_modes;
        if target == given || target >= n || given >= n {
            return Err(Error::OutOfRange {
                name: "quadrature index".into(),
                value: given as f64,
                range: format!("distinct indices below {n}, target {target}"),
            });
        }
        let sgg = self.covariance(given, given);
        if sgg < T::ZERO_PROB {
            return Err(Error::DegenerateConditioning(given));
        }
        let stg = self.covariance(target, given);
        Ok(self.covariance(target, target) - stg * stg / sgg)
    }
}

/// Two-parameter symmetric family: mean photon number n̄ per mode and mixing μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricTwoModeParams<T: Real> {
    pub nbar: T,
    pub mu: T,
}

impl<T: Real> SymmetricTwoModeParams<T> {
    pub fn new(nbar: T, mu: T) -> Result<Self> {
        if !(nbar >= T::zero() && nbar.is_finite()) {
            return Err(out_of_range("nbar", nbar, "[0, inf)"));
        }
        if !(mu >= T::zero() && mu <= T::one()) {
            return Err(out_of_range("mu", mu, "[0, 1]"));
        }
        Ok(Self { nbar, mu })
    }

    /// γ = 1 + 2n̄.
    pub fn gamma(&self) -> T {
        T::one() + self.nbar * T::lit(2.0)
    }

    /// δ = 2μ√(n̄(1+n̄)).
    pub fn delta(&self) -> T {
        T::lit(2.0) * self.mu * (self.nbar * (T::one() + self.nbar)).sqrt()
    }
}

/// Covariance [[γ,0,δ,0],[0,γ,0,−δ],[δ,0,γ,0],[0,−δ,0,γ]], zero mean.
pub fn symmetric_two_mode<T: Real>(params: SymmetricTwoModeParams<T>) -> Result<GaussianState<T>> {
    let g = params.gamma();
    let d = params.delta();
    let z = T::zero();
    #[rustfmt::skip]
    let cov = vec![
        g, z, d, z,
        z, g, z, -d,
        d, z, g, z,
        z, -d, z, g,
    ];
    GaussianState::new(2, cov, vec![z; 4])
}

/// Outcome of a closed-form threshold that may leave the family's μ range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold<T> {
    Within(T),
    /// The formula exceeds 1, so no member of the family crosses it.
    Unreachable(T),
}

impl<T: Real> Threshold<T> {
    fn classify(value: T) -> Self {
        if value > T::one() {
            Threshold::Unreachable(value)
        } else {
            Threshold::Within(value)
        }
    }

    pub fn value(self) -> T {
        match self {
            Threshold::Within(v) | Threshold::Unreachable(v) => v,
        }
    }

    pub fn is_reachable(self) -> bool {
        matches!(self, Threshold::Within(_))
    }
}

fn positive_nbar<T: Real>(nbar: T) -> Result<T> {
    if nbar > T::zero() && nbar.is_finite() {
        Ok(nbar)
    } else {
        Err(out_of_range("nbar", nbar, "(0, inf)"))
    }
}

/// μ above which the sum-variance separability bound of 4 is violated.
pub fn boundary_entanglement_mu<T: Real>(nbar: T) -> Result<T> {
    let n = positive_nbar(nbar)?;
    Ok(n / (n * (T::one() + n)).sqrt())
}

/// μ above which Δ²(x^B−x^A) + Δ²(p^B+p^A) drops below 2.
pub fn boundary_collective_steering_mu<T: Real>(nbar: T) -> Result<Threshold<T>> {
    let n = positive_nbar(nbar)?;
    let v = (T::one() + T::lit(4.0) * n) / (T::lit(4.0) * (n * (T::one() + n)).sqrt());
    Ok(Threshold::classify(v))
}

/// μ above which the optimal-inference product Δ_inf x^B·Δ_inf p^B drops below 1.
pub fn boundary_reid_steering_mu<T: Real>(nbar: T) -> Result<T> {
    let n = positive_nbar(nbar)?;
    Ok(((T::one() + T::lit(2.0) * n) / (T::lit(2.0) * (T::one() + n))).sqrt())
}

fn out_of_range<T: Real>(name: &str, value: T, range: &str) -> Error {
    Error::OutOfRange {
        name: name.into(),
        value: value.to_f64_lossy(),
        range: range.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sym(nbar: f64, mu: f64) -> GaussianState<f64> {
        symmetric_two_mode(SymmetricTwoModeParams::new(nbar, mu).unwrap()).unwrap()
    }

    #[test]
    fn vacuum_limit() {
        assert_eq!(sym(0.0, 0.7), GaussianState::vacuum(2));
    }

    #[test]
    fn pure_two_mode_squeezed_parameters() {
        let p = SymmetricTwoModeParams::new(1.0, 1.0).unwrap();
        assert_relative_eq!(p.gamma(), 3.0);
        assert_relative_eq!(p.delta(), 2.0 * 2f64.sqrt(), epsilon = 1e-15);
        let s = symmetric_two_mode(p).unwrap();
        assert!(s.physicality_margin().unwrap().abs() < 1e-9);
    }

    #[test]
    fn thermal_uncorrelated_state() {
        let s = sym(1.0, 0.0);
        for i in 0..4 {
            assert_eq!(s.covariance(i, i), 3.0);
        }
        assert!(s.physicality_margin().unwrap() > 1.0);
    }

    #[test]
    fn epr_variance() {
        let s = sym(1.0, 1.0);
        let v = s.linear_combination_variance(&[1.0, 0.0, -1.0, 0.0]).unwrap();
        assert_relative_eq!(v, 6.0 - 4.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_eq!(s.linear_combination_variance(&[0.0; 4]).unwrap(), 0.0);
        assert!(s.linear_combination_variance(&[1.0; 3]).is_err());
        assert_relative_eq!(sym(2.0, 0.0).linear_combination_variance(&[1.0, 0.0, -1.0, 0.0]).unwrap(), 10.0);
    }

    #[test]
    fn schur_conditional_variance() {
        let s = sym(1.0, 1.0);
        assert_relative_eq!(s.conditional_min_variance(XB, XA).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(sym(1.0, 0.0).conditional_min_variance(PB, PA).unwrap(), 3.0);
        assert!(s.conditional_min_variance(XB, XB).is_err());
    }

    #[test]
    fn degenerate_conditioning() {
        let cov = vec![
            0.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ];
        let s = GaussianState { n_modes: 2, cov, mean: vec![0.0; 4] };
        assert_eq!(s.conditional_min_variance(XB, XA), Err(Error::DegenerateConditioning(XA)));
    }

    #[test]
    fn unphysical_covariance_rejected() {
        let cov = vec![0.5, 0.0, 0.0, 0.5];
        assert!(matches!(GaussianState::new(1, cov, vec![0.0; 2]), Err(Error::NotPositive(_))));
        let asym = vec![1.0, 0.1, 0.0, 1.0];
        assert!(matches!(GaussianState::new(1, asym, vec![0.0; 2]), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn parameter_ranges() {
        assert!(SymmetricTwoModeParams::new(-0.1, 0.5).is_err());
        assert!(SymmetricTwoModeParams::new(1.0, 1.01).is_err());
        assert!(SymmetricTwoModeParams::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn boundary_values() {
        assert_relative_eq!(boundary_entanglement_mu(1.0).unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(boundary_entanglement_mu(3.0).unwrap(), 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_relative_eq!(boundary_reid_steering_mu(1.0).unwrap(), 0.75f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(boundary_reid_steering_mu(0.5).unwrap(), (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        let c = boundary_collective_steering_mu(1.0).unwrap();
        assert_eq!(c, Threshold::Within(5.0 / (4.0 * 2f64.sqrt())));
        assert_relative_eq!(boundary_collective_steering_mu(0.25).unwrap().value(), 2.0 / (4.0 * 0.3125f64.sqrt()), epsilon = 1e-15);
        assert!(!boundary_collective_steering_mu(0.1).unwrap().is_reachable());
        assert!(boundary_entanglement_mu(0.0).is_err());
        assert!(boundary_reid_steering_mu(-1.0).is_err());
    }

    #[test]
    fn boundaries_approach_one() {
        let big = 1e8f64;
        assert!((1.0 - boundary_entanglement_mu(big).unwrap()) < 1e-7);
        assert!((1.0 - boundary_reid_steering_mu(big).unwrap()) < 1e-7);
        assert!((boundary_collective_steering_mu(big).unwrap().value() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn single_precision_family() {
        let s = symmetric_two_mode(SymmetricTwoModeParams::<f32>::new(1.0, 0.9).unwrap()).unwrap();
        let v = s.conditional_min_variance(XB, XA).unwrap();
        assert!((v - 0.84).abs() < 1e-5);
    }
}
