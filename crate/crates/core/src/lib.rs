//! Quasi-Monte Carlo cubature: low-discrepancy point generators, variable
//! transforms, integrands, adaptive stopping criteria and quality metrics.

pub mod cubature;
pub mod error;
pub mod format;
pub mod integrands;
pub mod ld;
pub mod measures;
pub mod quality;

pub use cubature::{integrate, CriterionSpec, CubatureResult, SamplerSpec, ToleranceSpec};
pub use error::{QmcError, Result};
pub use integrands::{
    asian_call_problem, custom_problem, evaluate_f, keister_oracle, keister_problem, AsianCall,
    Problem,
};
pub use ld::{Family, Ordering, PointBlock, RandomizationKind};
pub use measures::{ladder_transform, Measure, TransformLadder, TransformStep};
