//! Deterministic model mathematics: growth curves, citability kernels, and
//! the closed-form and quadrature predictors built on them.
//!
//! Everything here is a pure function of immutable inputs and safe to call
//! concurrently.

mod age;
mod curve;
mod kernel;
mod length;

pub use age::{
    age_survival_fraction, expected_total_age, expected_total_age_uniform, mean_reference_age,
    median_reference_age, AgeStatistics,
};
pub use curve::GrowthCurve;
pub use kernel::CitabilityKernel;
pub use length::{
    expected_list_length, expected_list_length_quadrature, exponential_growth_prediction,
};
