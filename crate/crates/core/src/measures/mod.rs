//! Variable transforms from the unit cube to target measures.

mod factor;
mod ladder;
mod normal;
mod step;

pub use factor::{CovarianceFactor, FactorMethod};
pub use ladder::{ladder_transform, TransformLadder};
pub use normal::{normal_log_pdf, normal_pdf, normal_quantile, LN_SQRT_2PI};
pub use step::{
    brownian_motion, brownian_motion_with, gaussian_transform, isotropic_gaussian_transform,
    kumaraswamy_cdf, kumaraswamy_quantile, kumaraswamy_transform, lebesgue_tail_transform,
    uniform_transform, GaussianMeasure, Measure, Space, TransformStep,
};
