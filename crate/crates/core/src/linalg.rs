//! Dense complex matrices, row-major.
//!
//! Dimensions in this crate stay small (a few dozen at most), so everything is
//! a plain `Vec` with straightforward loops.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |i, j| Complex::new(T::lit(rows[i][j]), T::zero()))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// Rank-one projector |v⟩⟨v| (not normalized).
    pub fn outer(v: &[Complex<T>]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex<T>> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::DimensionMismatch {
                context: "trace of product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut acc = Complex::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` indexes the coarse blocks.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix sum", |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix difference", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        context: &'static str,
        f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.checked_sub(&other.matmul(self)?)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// max |M − M†|, or infinity for non-square input.
    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Returns `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * T::lit(0.5)
        })
    }

    /// ⟨u|M|v⟩.
    pub fn sandwich(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::zero();
        for i in 0..self.rows {
            let mut row = Complex::zero();
            for j in 0..self.cols {
                row += self[(i, j)] * v[j];
            }
            acc += u[i].conj() * row;
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

// Operator sugar for same-shape matrices; panics on mismatch like slice indexing.
impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        self.checked_add(rhs).expect("matrix shapes agree")
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        self.checked_sub(rhs).expect("matrix shapes agree")
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("inner dimensions agree")
    }
}

/// Kronecker product with block ordering a ⊗ b.
pub fn tensor_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}

pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Euclidean norm of a complex vector.
pub fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// ⟨u|v⟩.
pub fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
