//! Observables, density matrices and bipartite states.

use num_complex::Complex;
use num_traits::Zero;

use crate::eigen::{hermitian_eigensystem, hermitian_eigenvalues, Eigensystem};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// A Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable<T: Real>(ComplexMatrix<T>);

impl<T: Real> Observable<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows(), m.cols()));
        }
        let defect = m.hermiticity_defect();
        if defect > T::STRUCTURAL_TOL * m.max_abs().max(T::one()) {
            return Err(Error::NotHermitian(defect.to_f64_lossy()));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    pub fn eigensystem(&self) -> Eigensystem<T> {
        hermitian_eigensystem(&self.0).expect("observable is Hermitian")
    }

    /// Real linear combination Σ c_k O_k of same-dimension observables.
    pub fn combination(terms: &[(T, &Observable<T>)]) -> Result<Self> {
        let dim = terms.first().map(|(_, o)| o.dim()).ok_or_else(|| {
            Error::Malformed("empty observable combination".into())
        })?;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (coef, obs) in terms {
            if obs.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "observable combination",
                    expected: dim,
                    found: obs.dim(),
                });
            }
            acc = acc.checked_add(&obs.0.scale(*coef))?;
        }
        Ok(Self(acc))
    }

    pub fn square(&self) -> Self {
        Self(self.0.matmul(&self.0).expect("square matrix").hermitian_part())
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real>(ComplexMatrix<T>);

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity (structural tol), unit trace (structural tol) and
    /// positivity (spectral tol).
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows(), m.cols()));
        }
        let defect = m.hermiticity_defect();
        if defect > T::STRUCTURAL_TOL {
            return Err(Error::NotHermitian(defect.to_f64_lossy()));
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > T::STRUCTURAL_TOL || tr.im.abs() > T::STRUCTURAL_TOL {
            return Err(Error::InvalidTrace(tr.re.to_f64_lossy()));
        }
        let m = m.hermitian_part();
        let min = *hermitian_eigenvalues(&m)?.last().expect("nonempty");
        if min < -T::SPECTRAL_TOL {
            return Err(Error::NotPositive(min.to_f64_lossy()));
        }
        Ok(Self(m))
    }

    /// |ψ⟩⟨ψ| after normalizing ψ.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let n = crate::linalg::norm(psi);
        if n <= T::zero() {
            return Err(Error::Malformed("zero state vector".into()));
        }
        let v: Vec<_> = psi.iter().map(|z| z / n).collect();
        Self::new(ComplexMatrix::outer(&v))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale(T::one() / T::from_usize_lossy(dim)))
    }

    /// Convex mixture Σ p_k ρ_k; weights are renormalized.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let dim = parts
            .first()
            .map(|(_, r)| r.dim())
            .ok_or_else(|| Error::Malformed("empty mixture".into()))?;
        let total: T = parts.iter().map(|(p, _)| *p).sum();
        if parts.iter().any(|(p, _)| *p < T::zero()) || total <= T::zero() {
            return Err(Error::Malformed("mixture weights must be non-negative".into()));
        }
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (p, rho) in parts {
            acc = acc.checked_add(&rho.0.scale(*p / total))?;
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.0).expect("density matrix is Hermitian")
    }

    /// Tr(O ρ), real part; errors if the imaginary residue exceeds tolerance.
    pub fn expectation(&self, obs: &Observable<T>) -> Result<T> {
        expectation(obs, self)
    }

    pub fn variance(&self, obs: &Observable<T>) -> Result<T> {
        let mean = self.expectation(obs)?;
        let sq = self.expectation(&obs.square())?;
        Ok((sq - mean * mean).max(T::zero()))
    }
}

/// Tr(obs · ρ).
pub fn expectation<T: Real>(obs: &Observable<T>, rho: &DensityMatrix<T>) -> Result<T> {
    if obs.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "expectation value",
            expected: rho.dim(),
            found: obs.dim(),
        });
    }
    let z = obs.matrix().trace_product(rho.matrix())?;
    let scale = obs.matrix().max_abs().max(T::one());
    if z.im.abs() > T::STRUCTURAL_TOL * scale {
        return Err(Error::NotHermitian(z.im.abs().to_f64_lossy()));
    }
    Ok(z.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Density matrix on H_A ⊗ H_B with the split recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState<T: Real> {
    state: DensityMatrix<T>,
    dim_a: usize,
    dim_b: usize,
}

impl<T: Real> BipartiteState<T> {
    pub fn new(state: DensityMatrix<T>, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != state.dim() {
            return Err(Error::DimensionMismatch {
                context: "bipartite split",
                expected: state.dim(),
                found: dim_a * dim_b,
            });
        }
        Ok(Self { state, dim_a, dim_b })
    }

    pub fn product(rho_a: &DensityMatrix<T>, rho_b: &DensityMatrix<T>) -> Self {
        let joint = DensityMatrix(rho_a.matrix().kron(rho_b.matrix()));
        Self {
            state: joint,
            dim_a: rho_a.dim(),
            dim_b: rho_b.dim(),
        }
    }

    /// Σ_k p_k ρ_A^k ⊗ ρ_B^k, separable by construction.
    pub fn separable(parts: &[(T, DensityMatrix<T>, DensityMatrix<T>)]) -> Result<Self> {
        let (_, a0, b0) = parts
            .first()
            .ok_or_else(|| Error::Malformed("empty separable decomposition".into()))?;
        let products: Vec<_> = parts
            .iter()
            .map(|(p, a, b)| (*p, Self::product(a, b).state))
            .collect();
        let refs: Vec<_> = products.iter().map(|(p, r)| (*p, r)).collect();
        Self::new(DensityMatrix::mixture(&refs)?, a0.dim(), b0.dim())
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn density(&self) -> &DensityMatrix<T> {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.state.matrix()
    }

    pub fn reduced(&self, keep: Subsystem) -> DensityMatrix<T> {
        partial_trace(self, keep)
    }

    /// Local operators a ⊗ b lifted to the joint space.
    pub fn lift(&self, a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if a.rows() != self.dim_a {
            return Err(Error::DimensionMismatch {
                context: "alice operator",
                expected: self.dim_a,
                found: a.rows(),
            });
        }
        if b.rows() != self.dim_b {
            return Err(Error::DimensionMismatch {
                context: "bob operator",
                expected: self.dim_b,
                found: b.rows(),
            });
        }
        Ok(a.kron(b))
    }

    /// ⟨a ⊗ b⟩ for Hermitian a, b.
    pub fn correlation(&self, a: &Observable<T>, b: &Observable<T>) -> Result<T> {
        let op = Observable(self.lift(a.matrix(), b.matrix())?);
        expectation(&op, &self.state)
    }

    /// Tr[W (E ⊗ F)] for arbitrary (non-Hermitian allowed) operators; real part.
    pub fn joint_weight(&self, e: &ComplexMatrix<T>, f: &ComplexMatrix<T>) -> Result<T> {
        Ok(self.matrix().trace_product(&self.lift(e, f)?)?.re)
    }

    /// Applies U_A ⊗ U_B: ρ → (U_A⊗U_B) ρ (U_A⊗U_B)†.
    pub fn conjugate_local(&self, ua: &ComplexMatrix<T>, ub: &ComplexMatrix<T>) -> Result<Self> {
        let u = self.lift(ua, ub)?;
        let m = u.matmul(self.matrix())?.matmul(&u.adjoint())?;
        Self::new(DensityMatrix::new(m)?, self.dim_a, self.dim_b)
    }
}

/// Reduced density matrix of the kept subsystem.
pub fn partial_trace<T: Real>(state: &BipartiteState<T>, keep: Subsystem) -> DensityMatrix<T> {
    let (da, db) = (state.dim_a, state.dim_b);
    let w = state.matrix();
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).fold(Complex::zero(), |acc, k| acc + w[(i * db + k, j * db + k)])
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).fold(Complex::zero(), |acc, k| acc + w[(k * db + i, k * db + j)])
        }),
    };
    DensityMatrix(out.hermitian_part())
}

/// Partial trace of an arbitrary operator on H_A ⊗ H_B over subsystem A.
pub(crate) fn trace_out_a<T: Real>(m: &ComplexMatrix<T>, da: usize, db: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(db, db, |i, j| {
        (0..da).fold(Complex::zero(), |acc, k| acc + m[(k * db + i, k * db + j)])
    })
}
