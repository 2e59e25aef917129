//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot entry with a diagonal
//! unitary, then applies a real Givens rotation that zeroes it. Sweeps repeat
//! until the off-diagonal Frobenius mass is negligible relative to the matrix
//! norm.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigensystem<T: Real> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigensystem<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    pub fn max_value(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::neg_infinity)
    }

    pub fn min_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::infinity)
    }

    /// Σ λ_k v_k v_k†.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vector(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * v[j].conj() * lambda;
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix (checked to `T::STRUCTURAL_TOL`).
pub fn hermitian_eigensystem<T: Real>(m: &ComplexMatrix<T>) -> Result<Eigensystem<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let scale = m.max_abs().max(T::one());
    let defect = m.hermiticity_defect();
    if defect > T::STRUCTURAL_TOL * scale {
        return Err(Error::NotHermitian(defect.to_f64_lossy()));
    }
    Ok(jacobi(m.hermitian_part()))
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    hermitian_eigensystem(m).map(|e| e.values)
}

fn off_diagonal_mass<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>) -> Eigensystem<T> {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let total: T = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let threshold = (T::epsilon() * T::epsilon()) * total.max(T::min_positive_value());

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Eigensystem { values, vectors }
}

fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g <= T::min_positive_value() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Phase that makes the pivot real and positive.
    let phase = apq.conj() / g;

    let tau = (aqq - app) / (g + g);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let cs = T::one() / (T::one() + t * t).sqrt();
    let sn = t * cs;

    // U acts on the (p, q) plane: columns p and q of the rotation.
    let u_pp = Complex::new(cs, T::zero());
    let u_qp = phase * (-sn);
    let u_pq = Complex::new(sn, T::zero());
    let u_qq = phase * cs;

    let n = a.rows();
    // A ← A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    // A ← U† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

    // V ← V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn max_eigenvalue<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    hermitian_eigensystem(m).map(|e| e.max_value())
}

/// Orthonormality defect max |V†V − I|.
pub fn orthonormality_defect<T: Real>(vectors: &ComplexMatrix<T>) -> T {
    let gram = vectors.adjoint().matmul(vectors).expect("square");
    gram.max_abs_diff(&ComplexMatrix::identity(vectors.cols()))
}

pub(crate) fn unit<T: Real>(n: usize, k: usize) -> Vec<Complex<T>> {
    (0..n)
        .map(|i| if i == k { Complex::one() } else { Complex::zero() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> M {
        let g = M::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        g.hermitian_part()
    }

    fn check_residuals(m: &M, e: &Eigensystem<f64>) {
        for k in 0..m.rows() {
            let v = e.vector(k);
            let mv = m.mul_vec(&v);
            for (a, b) in mv.iter().zip(&v) {
                assert!((a - b * e.values[k]).norm() < 1e-9);
            }
        }
        assert!(orthonormality_defect(&e.vectors) < 1e-9);
    }

    #[test]
    fn diagonal_input_keeps_standard_basis() {
        let m = M::from_real_diag(&[2.0, 1.0]);
        let e = hermitian_eigensystem(&m).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
        assert!(e.vectors.max_abs_diff(&M::identity(2)) < 1e-15);
    }

    #[test]
    fn ascending_diagonal_is_sorted_descending() {
        let m = M::from_real_diag(&[-1.0, 3.0, 0.5]);
        let e = hermitian_eigensystem(&m).unwrap();
        assert_eq!(e.values, vec![3.0, 0.5, -1.0]);
        check_residuals(&m, &e);
    }

    #[test]
    fn spin_half_x_spectrum() {
        let jx = M::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let e = hermitian_eigensystem(&jx).unwrap();
        assert!((e.values[0] - 0.5).abs() < 1e-12);
        assert!((e.values[1] + 0.5).abs() < 1e-12);
        check_residuals(&jx, &e);
    }

    #[test]
    fn complex_pivot_is_handled() {
        let jy = M::from_vec(2, 2, vec![c(0., 0.), c(0., -0.5), c(0., 0.5), c(0., 0.)]).unwrap();
        let e = hermitian_eigensystem(&jy).unwrap();
        check_residuals(&jy, &e);
        assert!((e.values[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 4, 6, 9, 16] {
            for _ in 0..20 {
                let m = random_hermitian(n, &mut rng);
                let e = hermitian_eigensystem(&m).unwrap();
                check_residuals(&m, &e);
                assert!(e.reconstruct().max_abs_diff(&m) < 1e-8);
                assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let m = M::from_real_diag(&[1.0, 1.0, -1.0, -1.0]);
        let e = hermitian_eigensystem(&m).unwrap();
        check_residuals(&m, &e);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let m = ComplexMatrix::<f32>::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = hermitian_eigensystem(&m).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-5);
        assert!((e.values[1] - 1.0).abs() < 1e-5);
    }
}
