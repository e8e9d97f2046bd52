//! Age statistics of reference lists: total age, mean and median reference
//! age, and the age-survival fraction.

use crate::error::{Error, Result};
use crate::model::length::{check_t, finite_origin, integration_breakpoints};
use crate::model::{CitabilityKernel, GrowthCurve};
use crate::quad::{integrate_with_breakpoints, QuadratureOptions};
use crate::root::{smallest_at_or_below, BisectionOptions};

/// Summary statistics for the ages of items in a reference list.
#[derive(Debug, Clone, PartialEq)]
pub struct AgeStatistics {
    pub mean_age: f64,
    pub median_age: f64,
    /// Optional tabulated survival function: fraction of references with age
    /// at least the given value, nonincreasing with survival(0) = 1.
    pub survival: Option<Vec<(f64, f64)>>,
}

/// Expected total age of all items in a reference list published at `t`,
/// counting references into the observation window: the integral of
/// `(t - s) * q(t - s) * P'(s)` over the window.
pub fn expected_total_age(
    kernel: &CitabilityKernel,
    curve: &GrowthCurve,
    t: f64,
    quad: &QuadratureOptions,
) -> Result<f64> {
    let t0 = finite_origin(curve)?;
    check_t(curve, t, t0)?;
    let breaks = integration_breakpoints(kernel, curve, t0, t);
    integrate_with_breakpoints(
        |s| (t - s) * kernel.probability(t - s) * curve.derivative(s).unwrap_or(0.0),
        t0,
        t,
        &breaks,
        quad,
    )
}

/// Total age under the uniform model via the integration-by-parts identity:
/// `q` times the integral of the restricted cumulative count over the
/// window. Must agree with [`expected_total_age`] for a constant kernel.
pub fn expected_total_age_uniform(
    q: f64,
    curve: &GrowthCurve,
    t: f64,
    quad: &QuadratureOptions,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Config(format!(
            "citation probability must lie in [0, 1], got {q}"
        )));
    }
    Ok(q * integral_of_restricted(curve, t, quad)?)
}

fn integral_of_restricted(curve: &GrowthCurve, t: f64, quad: &QuadratureOptions) -> Result<f64> {
    let t0 = finite_origin(curve)?;
    check_t(curve, t, t0)?;
    let breaks = curve.knots_between(t0, t);
    integrate_with_breakpoints(|s| curve.restricted(s).unwrap_or(0.0), t0, t, &breaks, quad)
}

/// Mean age of a referenced item under the uniform model: the integral of
/// the restricted count over the window divided by its value at `t`.
///
/// Equals `(t - t0)` times the fraction of the bounding rectangle that lies
/// under the growth curve, so it is at most the window length. Quadratic
/// growth gives `(t - t0) / 3`; infinite-history exponential growth gives
/// the reciprocal of the growth rate.
pub fn mean_reference_age(curve: &GrowthCurve, t: f64, quad: &QuadratureOptions) -> Result<f64> {
    if let GrowthCurve::Exponential {
        growth_rate,
        origin: None,
        ..
    } = curve
    {
        return Ok(1.0 / growth_rate);
    }
    let denom = curve.restricted(t)?;
    if denom <= 0.0 {
        return Err(Error::Domain(
            "no citable articles in the window: the restricted count at t is zero".into(),
        ));
    }
    Ok(integral_of_restricted(curve, t, quad)? / denom)
}

/// Median age of a referenced item under the uniform model: the smallest age
/// at which the restricted count at `t - age` falls to half its value at
/// `t`, located by bisection (left edge on plateaus).
///
/// Growth quadratic in `(t - t0)` yields `(1 - 2^(-1/2)) * (t - t0)`, about
/// `0.293 * (t - t0)`; the `0.206` factor sometimes quoted for quadratic
/// growth is `1 - 2^(-1/3)` and actually belongs to cubic growth. Growth
/// linear in `(t - t0)` halves at the midpoint, and infinite-history
/// exponential growth gives `ln(2)` over the growth rate.
pub fn median_reference_age(curve: &GrowthCurve, t: f64, bisect: &BisectionOptions) -> Result<f64> {
    if let GrowthCurve::Exponential {
        growth_rate,
        origin: None,
        ..
    } = curve
    {
        return Ok(std::f64::consts::LN_2 / growth_rate);
    }
    let t0 = finite_origin(curve)?;
    check_t(curve, t, t0)?;
    let at_t = curve.restricted(t)?;
    if at_t <= 0.0 {
        return Err(Error::Domain(
            "no citable articles in the window: the restricted count at t is zero".into(),
        ));
    }
    smallest_at_or_below(
        |age| curve.restricted(t - age).unwrap_or(0.0),
        0.0,
        t - t0,
        0.5 * at_t,
        bisect,
    )
}

/// Fraction of referenced items with age at least `age` under the uniform
/// model: the restricted count at `t - age` over the restricted count at
/// `t`, clamped to zero before the origin. Nonincreasing in `age`. For
/// infinite-history exponential growth this is `exp(-growth_rate * age)`.
pub fn age_survival_fraction(curve: &GrowthCurve, t: f64, age: f64) -> Result<f64> {
    if !age.is_finite() || age < 0.0 {
        return Err(Error::Domain(format!(
            "reference age must be finite and >= 0, got {age}"
        )));
    }
    if let GrowthCurve::Exponential {
        growth_rate,
        origin: None,
        ..
    } = curve
    {
        return Ok((-growth_rate * age).exp());
    }
    let t0 = finite_origin(curve)?;
    check_t(curve, t, t0)?;
    let denom = curve.restricted(t)?;
    if denom <= 0.0 {
        return Err(Error::Domain(
            "no citable articles in the window: the restricted count at t is zero".into(),
        ));
    }
    let numer = if t - age <= t0 {
        0.0
    } else {
        curve.restricted(t - age)?
    };
    Ok(numer / denom)
}
