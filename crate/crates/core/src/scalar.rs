//! Scalar abstraction shared by every numeric module.
//!
//! All math in this crate is written against [`Real`], implemented for `f32`
//! and `f64`. Tolerances live here as associated constants so each precision
//! carries thresholds it can actually meet.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Hermiticity, trace and POVM-completeness checks.
    const STRUCTURAL_TOL: Self;
    /// Eigen-residuals, positivity, idempotence, commutators.
    const SPECTRAL_TOL: Self;
    /// Outcomes with probability below this carry zero weight in averages.
    const ZERO_PROB: Self;
    /// Eigenvalues closer than this are merged into one outcome.
    const MERGE_TOL: Self;
    /// Criterion margins this close to zero are boundary saturation.
    const SATURATION_TOL: Self;

    /// Converts an `f64` literal; every value used in this crate is representable.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const STRUCTURAL_TOL: f64 = 1e-10;
    const SPECTRAL_TOL: f64 = 1e-9;
    const ZERO_PROB: f64 = 1e-12;
    const MERGE_TOL: f64 = 1e-8;
    const SATURATION_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const STRUCTURAL_TOL: f32 = 2e-5;
    const SPECTRAL_TOL: f32 = 1e-4;
    const ZERO_PROB: f32 = 1e-6;
    const MERGE_TOL: f32 = 1e-3;
    const SATURATION_TOL: f32 = 1e-6;
}
