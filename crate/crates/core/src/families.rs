//! Parametrized state families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::Serialize;

use crate::criteria::AnyState;
use crate::eigen::unit;
use crate::error::{Error, Result};
use crate::gaussian::{symmetric_two_mode, GaussianState, SymmetricTwoModeParams};
use crate::scalar::Real;
use crate::spin::Spin;
use crate::state::{BipartiteState, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    Werner,
    SymmetricGaussian,
    Singlet,
}

/// A named real parameter with its closed admissible range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
    pub default: Option<f64>,
}

impl ParamSpec {
    fn range(&self) -> String {
        if self.max.is_infinite() {
            format!("[{}, inf)", self.min)
        } else {
            format!("[{}, {}]", self.min, self.max)
        }
    }

    pub fn check(&self, value: f64) -> Result<f64> {
        if value.is_finite() && value >= self.min && value <= self.max {
            Ok(value)
        } else {
            Err(Error::OutOfRange {
                name: self.name.into(),
                value,
                range: self.range(),
            })
        }
    }
}

const WERNER: &[ParamSpec] = &[ParamSpec {
    name: "mu",
    min: 0.0,
    max: 1.0,
    default: None,
}];

const SYMMETRIC_GAUSSIAN: &[ParamSpec] = &[
    ParamSpec {
        name: "nbar",
        min: 0.0,
        max: f64::INFINITY,
        default: None,
    },
    ParamSpec {
        name: "mu",
        min: 0.0,
        max: 1.0,
        default: None,
    },
];

const SINGLET: &[ParamSpec] = &[ParamSpec {
    name: "j",
    min: 0.5,
    max: 10.0,
    default: Some(0.5),
}];

impl FamilyId {
    pub const ALL: [FamilyId; 3] = [FamilyId::Werner, FamilyId::SymmetricGaussian, FamilyId::Singlet];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::Werner => "werner",
            FamilyId::SymmetricGaussian => "symmetric-gaussian",
            FamilyId::Singlet => "singlet",
        }
    }

    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            FamilyId::Werner => WERNER,
            FamilyId::SymmetricGaussian => SYMMETRIC_GAUSSIAN,
            FamilyId::Singlet => SINGLET,
        }
    }

    pub fn param(self, name: &str) -> Result<&'static ParamSpec> {
        self.params().iter().find(|p| p.name == name).ok_or_else(|| {
            Error::Malformed(format!("family {} has no parameter {name}", self.as_str()))
        })
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnknownFamily(s.into()))
    }
}

/// A family with values for some or all of its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateFamily {
    pub id: FamilyId,
    pub params: BTreeMap<String, f64>,
}

impl StateFamily {
    /// Parameters with defaults are filled in; the rest may be set later.
    pub fn new(id: FamilyId) -> Self {
        let params = id
            .params()
            .iter()
            .filter_map(|p| p.default.map(|d| (p.name.to_string(), d)))
            .collect();
        Self { id, params }
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        let spec = self.id.param(name)?;
        self.params.insert(name.to_string(), spec.check(value)?);
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        self.id.param(name)?;
        self.params.get(name).copied().ok_or_else(|| {
            Error::Malformed(format!("family {} requires parameter {name}", self.id))
        })
    }

    pub fn state<T: Real>(&self) -> Result<AnyState<T>> {
        match self.id {
            FamilyId::Werner => Ok(AnyState::Finite(werner_state(T::lit(self.get("mu")?))?)),
            FamilyId::SymmetricGaussian => Ok(AnyState::Gaussian(symmetric_gaussian(
                T::lit(self.get("nbar")?),
                T::lit(self.get("mu")?),
            )?)),
            FamilyId::Singlet => Ok(AnyState::Finite(singlet_state(Spin::new(self.get("j")?)?))),
        }
    }
}

/// μ |ψ_S⟩⟨ψ_S| + (1 − μ) I/4 for μ ∈ [0, 1].
pub fn werner_state<T: Real>(mu: T) -> Result<BipartiteState<T>> {
    WERNER[0].check(mu.to_f64_lossy())?;
    let singlet = singlet_state::<T>(Spin::HALF);
    let mixed = DensityMatrix::maximally_mixed(4);
    let rho = DensityMatrix::mixture(&[(mu, singlet.density()), (T::one() - mu, &mixed)])?;
    BipartiteState::new(rho, 2, 2)
}

/// Σ_m (−1)^(j−m) |m⟩|−m⟩ / √(2j+1), the total-spin-zero state of two spin-j systems.
pub fn singlet_state<T: Real>(spin: Spin) -> BipartiteState<T> {
    let d = spin.dim();
    let amp = T::one() / T::from_usize_lossy(d).sqrt();
    let mut psi = vec![Complex::new(T::zero(), T::zero()); d * d];
    for k in 0..d {
        let sign = if k % 2 == 0 { amp } else { -amp };
        // Index k is m = j − k on A; B carries −m at index d − 1 − k.
        let basis = unit::<T>(d * d, k * d + (d - 1 - k));
        for (p, e) in psi.iter_mut().zip(basis) {
            *p += e * sign;
        }
    }
    let rho = DensityMatrix::pure(&psi).expect("unit vector");
    BipartiteState::new(rho, d, d).expect("dimensions agree")
}

pub fn symmetric_gaussian<T: Real>(nbar: T, mu: T) -> Result<GaussianState<T>> {
    symmetric_two_mode(SymmetricTwoModeParams::new(nbar, mu)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::spin_operators;
    use crate::state::Subsystem;

    #[test]
    fn werner_endpoints() {
        let w0 = werner_state(0.0).unwrap();
        assert!(w0.matrix().max_abs_diff(DensityMatrix::<f64>::maximally_mixed(4).matrix()) < 1e-15);
        let w1 = werner_state(1.0).unwrap();
        let ops = spin_operators::<f64>(Spin::HALF);
        assert!((w1.correlation(&ops.jz, &ops.jz).unwrap() + 0.25).abs() < 1e-12);
    }

    #[test]
    fn werner_half_spectrum() {
        let ev = werner_state(0.5).unwrap().density().eigenvalues();
        let mut sorted = ev.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in sorted.iter().zip([0.625f64, 0.125, 0.125, 0.125]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_range_enforced() {
        assert!(werner_state(1.2).is_err());
        assert!(werner_state(-0.1).is_err());
        assert!(StateFamily::new(FamilyId::Werner).with("mu", 1.2).is_err());
    }

    #[test]
    fn spin_one_singlet_has_zero_total_spin() {
        let s = singlet_state::<f64>(Spin::ONE);
        let ops = spin_operators::<f64>(Spin::ONE);
        for o in [&ops.jx, &ops.jy, &ops.jz] {
            assert!((s.correlation(o, o).unwrap() + 2.0 / 3.0).abs() < 1e-12);
        }
        let rb = s.reduced(Subsystem::B);
        assert!(rb.matrix().max_abs_diff(DensityMatrix::<f64>::maximally_mixed(3).matrix()) < 1e-12);
    }

    #[test]
    fn family_lookup_and_params() {
        assert_eq!("symmetric-gaussian".parse::<FamilyId>().unwrap(), FamilyId::SymmetricGaussian);
        assert!(matches!("bell".parse::<FamilyId>(), Err(Error::UnknownFamily(_))));
        let fam = StateFamily::new(FamilyId::SymmetricGaussian).with("nbar", 1.0).unwrap();
        assert!(fam.state::<f64>().is_err());
        let fam = fam.with("mu", 0.5).unwrap();
        assert!(matches!(fam.state::<f64>().unwrap(), AnyState::Gaussian(_)));
        assert_eq!(StateFamily::new(FamilyId::Singlet).get("j").unwrap(), 0.5);
        assert!(StateFamily::new(FamilyId::Werner).with("nbar", 1.0).is_err());
    }
}
