//! Spin-j angular momentum operators.
//!
//! Basis convention: |j, m⟩ ordered by descending m, so index 0 is m = +j.
//! For j = 1/2 this is (|+½⟩, |−½⟩).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::state::Observable;

/// Half-integer spin stored as 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub const HALF: Spin = Spin { twice: 1 };
    pub const ONE: Spin = Spin { twice: 2 };

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { twice })
    }

    /// Accepts j as a real; 2j must be a positive integer.
    pub fn new(j: f64) -> Result<Self> {
        let t = 2.0 * j;
        if !(t.is_finite() && t >= 1.0 && (t - t.round()).abs() < 1e-12) {
            return Err(Error::InvalidSpin(j));
        }
        Self::from_twice(t.round() as u32)
    }

    /// Spin whose representation has dimension `dim` = 2j+1.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidSpin((dim as f64 - 1.0) / 2.0));
        }
        Self::from_twice(dim as u32 - 1)
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    pub fn value<T: Real>(self) -> T {
        T::from_u32(self.twice).expect("small integer") / T::lit(2.0)
    }

    /// m values in basis order (descending).
    pub fn m_values<T: Real>(self) -> Vec<T> {
        let j = self.value::<T>();
        (0..self.dim()).map(|k| j - T::from_usize_lossy(k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpinOperators<T: Real> {
    pub spin: Spin,
    pub jx: Observable<T>,
    pub jy: Observable<T>,
    pub jz: Observable<T>,
}

impl<T: Real> SpinOperators<T> {
    pub fn component(&self, axis: Axis) -> &Observable<T> {
        match axis {
            Axis::X => &self.jx,
            Axis::Y => &self.jy,
            Axis::Z => &self.jz,
        }
    }

    /// n·J for a real direction (not normalized).
    pub fn along(&self, n: [T; 3]) -> Observable<T> {
        Observable::combination(&[(n[0], &self.jx), (n[1], &self.jy), (n[2], &self.jz)])
            .expect("components share a dimension")
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// max entry of |[Jx,Jy] − iJz| over the three cyclic permutations.
    pub fn commutation_defect(&self) -> T {
        let i = Complex::new(T::zero(), T::one());
        let triples = [
            (&self.jx, &self.jy, &self.jz),
            (&self.jy, &self.jz, &self.jx),
            (&self.jz, &self.jx, &self.jy),
        ];
        triples
            .iter()
            .map(|(a, b, c)| {
                let comm = a.matrix().commutator(b.matrix()).expect("same dim");
                comm.max_abs_diff(&c.matrix().scale_complex(i))
            })
            .fold(T::zero(), T::max)
    }

    /// max entry of |J² − j(j+1) I|.
    pub fn casimir_defect(&self) -> T {
        let j = self.spin.value::<T>();
        let sq = |o: &Observable<T>| o.matrix().matmul(o.matrix()).expect("square");
        let total = &(&sq(&self.jx) + &sq(&self.jy)) + &sq(&self.jz);
        total.max_abs_diff(&ComplexMatrix::identity(self.dim()).scale(j * (j + T::one())))
    }
}

/// Ladder-operator construction of Jx, Jy, Jz.
pub fn spin_operators<T: Real>(spin: Spin) -> SpinOperators<T> {
    let n = spin.dim();
    let j = spin.value::<T>();
    let ms = spin.m_values::<T>();
    // J+ raises m: index k (m) → index k-1 (m+1).
    let mut raise = ComplexMatrix::zeros(n, n);
    for k in 1..n {
        let m = ms[k];
        let amp = (j * (j + T::one()) - m * (m + T::one())).max(T::zero()).sqrt();
        raise[(k - 1, k)] = Complex::new(amp, T::zero());
    }
    let lower = raise.adjoint();
    let half = T::lit(0.5);
    let jx = (&raise + &lower).scale(half);
    // (J+ − J−)/(2i) = −i/2 (J+ − J−)
    let jy = (&raise - &lower).scale_complex(Complex::new(T::zero(), -half));
    let jz = ComplexMatrix::from_real_diag(&ms);
    SpinOperators {
        spin,
        jx: Observable::new(jx).expect("Hermitian by construction"),
        jy: Observable::new(jy).expect("Hermitian by construction"),
        jz: Observable::new(jz).expect("Hermitian by construction"),
    }
}

/// Convenience: operators for a real j, validating 2j ∈ ℕ⁺.
pub fn spin_operators_for<T: Real>(j: f64) -> Result<SpinOperators<T>> {
    Ok(spin_operators(Spin::new(j)?))
}
