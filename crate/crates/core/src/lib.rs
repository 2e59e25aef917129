//! EPR-steering criteria on finite-dimensional and Gaussian bipartite states.
//!
//! The numeric modules are generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases at the crate root fix the scalar to `f64`.

pub mod eigen;
pub mod criteria;
pub mod error;
pub mod families;
pub mod gaussian;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod measurement;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod spin;
pub mod state;
pub mod sweep;

pub use criteria::{CriterionId, Direction};
pub use error::{Error, Result};
pub use families::{FamilyId, StateFamily};
pub use measurement::MeasurementKind;
pub use scalar::Real;
pub use spin::{Axis, Spin};
pub use state::Subsystem;

pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type Observable = state::Observable<f64>;
pub type DensityMatrix = state::DensityMatrix<f64>;
pub type BipartiteState = state::BipartiteState<f64>;
pub type SpinOperators = spin::SpinOperators<f64>;
pub type Measurement = measurement::Measurement<f64>;
pub type MeasurementStrategy = measurement::MeasurementStrategy<f64>;
pub type JointDistribution = measurement::JointDistribution<f64>;
pub type Assemblage = measurement::Assemblage<f64>;
pub type Estimator = measurement::Estimator<f64>;
pub type GaussianState = gaussian::GaussianState<f64>;
pub type SymmetricTwoModeParams = gaussian::SymmetricTwoModeParams<f64>;
pub type CriterionResult = criteria::CriterionResult<f64>;
pub type AnyState = criteria::AnyState<f64>;
pub type Phenomenon = oracle::Phenomenon<f64>;
pub type HiddenStateGrid = oracle::HiddenStateGrid<f64>;
pub type SteeringFunctional = oracle::SteeringFunctional<f64>;
pub type Certification = oracle::Certification<f64>;
pub type Feasibility = oracle::Feasibility<f64>;
pub type SweepRow = sweep::SweepRow<f64>;
