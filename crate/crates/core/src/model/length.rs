//! Predictors for expected reference-list length.
//!
//! The expected length at time `t` is the integral over publication times
//! `s` in the observation window of `q(t - s) * P'(s)`: each slice of
//! earlier literature is cited with the probability attached to its age.
//! Under the uniform model this collapses to `q * P*(t)` exactly.

use crate::error::{Error, Result};
use crate::model::{CitabilityKernel, GrowthCurve};
use crate::quad::{integrate_with_breakpoints, QuadratureOptions};

/// Expected reference-list length at time `t`, counting only references to
/// articles published at or after the curve's origin.
///
/// Uses the closed form `q * P*(t)` for constant kernels and for
/// infinite-history exponential growth; otherwise evaluates the age-weighted
/// integral by adaptive quadrature.
pub fn expected_list_length(
    kernel: &CitabilityKernel,
    curve: &GrowthCurve,
    t: f64,
    quad: &QuadratureOptions,
) -> Result<f64> {
    if let GrowthCurve::Exponential {
        scale,
        growth_rate,
        origin: None,
    } = curve
    {
        return exponential_growth_prediction(kernel, *scale, *growth_rate, t);
    }
    if let Some(q) = kernel.as_constant() {
        return Ok(q * curve.restricted(t)?);
    }
    expected_list_length_quadrature(kernel, curve, t, quad)
}

/// The quadrature route for the expected list length, with no constant-kernel
/// shortcut. Exposed so the closed forms can be checked against it.
pub fn expected_list_length_quadrature(
    kernel: &CitabilityKernel,
    curve: &GrowthCurve,
    t: f64,
    quad: &QuadratureOptions,
) -> Result<f64> {
    let t0 = finite_origin(curve)?;
    check_t(curve, t, t0)?;
    let breaks = integration_breakpoints(kernel, curve, t0, t);
    integrate_with_breakpoints(
        |s| kernel.probability(t - s) * curve.derivative(s).unwrap_or(0.0),
        t0,
        t,
        &breaks,
        quad,
    )
}

/// Expected list length under pure exponential literature growth
/// `scale * exp(growth_rate * t)` with infinite history.
///
/// Equals `scale * growth_rate * exp(growth_rate * t)` times the constant
/// age integral of `q(a) * exp(-growth_rate * a)`, so the ratio of the
/// prediction to `exp(growth_rate * t)` does not depend on `t`: no kernel
/// can make list length grow subexponentially while production is
/// exponential.
pub fn exponential_growth_prediction(
    kernel: &CitabilityKernel,
    scale: f64,
    growth_rate: f64,
    t: f64,
) -> Result<f64> {
    if !scale.is_finite() || scale < 0.0 {
        return Err(Error::Config(format!(
            "exponential scale must be finite and >= 0, got {scale}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    let constant = kernel.decay_weighted_integral(growth_rate)?;
    Ok(scale * growth_rate * (growth_rate * t).exp() * constant)
}

pub(crate) fn finite_origin(curve: &GrowthCurve) -> Result<f64> {
    curve.origin().ok_or_else(|| {
        Error::Domain(
            "this operation needs a finite observation origin; \
             infinite-history curves are handled by the exponential closed form"
                .into(),
        )
    })
}

pub(crate) fn check_t(curve: &GrowthCurve, t: f64, t0: f64) -> Result<()> {
    if !t.is_finite() || t < t0 {
        return Err(Error::Domain(format!(
            "time {t} precedes the observation origin {t0}"
        )));
    }
    if let Some(end) = curve.domain_end() {
        if t > end {
            return Err(Error::Domain(format!(
                "time {t} is beyond the tabulated range ending at {end}"
            )));
        }
    }
    Ok(())
}

/// Breakpoints in `s`-space for integrands of the form `g(t - s) * P'(s)`:
/// curve knots, kernel knots mapped through `s = t - a`, and the edge of the
/// kernel's support.
pub(crate) fn integration_breakpoints(
    kernel: &CitabilityKernel,
    curve: &GrowthCurve,
    t0: f64,
    t: f64,
) -> Vec<f64> {
    let mut breaks = curve.knots_between(t0, t);
    breaks.extend(
        kernel
            .knots_between(0.0, t - t0)
            .into_iter()
            .map(|age| t - age),
    );
    if let Some(end) = kernel.support_end() {
        let s = t - end;
        if s > t0 && s < t {
            breaks.push(s);
        }
    }
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> QuadratureOptions {
        QuadratureOptions::default()
    }

    #[test]
    fn zero_kernel_gives_zero_length() {
        let q = CitabilityKernel::constant(0.0).unwrap();
        for curve in [
            GrowthCurve::linear(50.0, 10.0, 2000.0).unwrap(),
            GrowthCurve::polynomial(vec![2.0, 1.0, 0.3], 2000.0).unwrap(),
        ] {
            assert_eq!(
                expected_list_length(&q, &curve, 2010.0, &opts()).unwrap(),
                0.0
            );
            assert_eq!(
                expected_list_length_quadrature(&q, &curve, 2010.0, &opts()).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn uniform_linear_growth_closed_form() {
        // q * r * (t - t0), from the antiderivative of the constant rate.
        let q = CitabilityKernel::constant(0.01).unwrap();
        let curve = GrowthCurve::linear(200.0, 0.0, 2006.0).unwrap();
        let t = 2016.0;
        let expected = 0.01 * 200.0 * 10.0;
        let shortcut = expected_list_length(&q, &curve, t, &opts()).unwrap();
        assert_eq!(shortcut, expected, "constant kernel must shortcut exactly");
        let via_quad = expected_list_length_quadrature(&q, &curve, t, &opts()).unwrap();
        assert!((via_quad - expected).abs() < 1e-9);
    }

    #[test]
    fn decaying_kernel_on_exponential_growth_matches_hand_integral() {
        // Integral of exp(-decay*a) * exp(-k*a) over all ages is 1/(k+decay),
        // so the prediction is scale * k * exp(k t) / (k + decay).
        let k = 0.08;
        let decay = 0.25;
        let scale = 3.0;
        let t = 12.0;
        let kernel = CitabilityKernel::exponential_decay(1.0, decay).unwrap();
        let curve = GrowthCurve::exponential(scale, k, None).unwrap();
        let expected = scale * k * (k * t).exp() / (k + decay);
        let got = expected_list_length(&kernel, &curve, t, &opts()).unwrap();
        assert!(
            ((got - expected) / expected).abs() < 1e-12,
            "got {got}, expected {expected}"
        );
    }

    #[test]
    fn exponential_prediction_examples() {
        // Constant kernel: the age integral is q/k, so L = scale * q * e^{kt}.
        let q = CitabilityKernel::constant(0.3).unwrap();
        let got = exponential_growth_prediction(&q, 2.0, 0.1, 5.0).unwrap();
        let expected = 2.0 * 0.3 * (0.5f64).exp();
        assert!(((got - expected) / expected).abs() < 1e-14);

        let zero = CitabilityKernel::constant(0.0).unwrap();
        assert_eq!(
            exponential_growth_prediction(&zero, 2.0, 0.1, 5.0).unwrap(),
            0.0
        );

        assert!(matches!(
            exponential_growth_prediction(&q, 2.0, -0.1, 5.0),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn ratio_to_exponential_is_time_invariant() {
        let kernel = CitabilityKernel::tabulated(vec![(0.0, 0.5), (4.0, 0.1), (9.0, 0.0)]).unwrap();
        let (scale, k) = (1.5, 0.12);
        let base = exponential_growth_prediction(&kernel, scale, k, 0.0).unwrap();
        for t in [1.0, 7.3, 20.0] {
            let v = exponential_growth_prediction(&kernel, scale, k, t).unwrap();
            let ratio = v * (-k * t).exp();
            assert!(
                ((ratio - base) / base).abs() < 1e-12,
                "ratio drifted at t={t}: {ratio} vs {base}"
            );
        }
    }

    #[test]
    fn time_before_origin_is_domain_error() {
        let q = CitabilityKernel::constant(0.1).unwrap();
        let curve = GrowthCurve::linear(10.0, 0.0, 2006.0).unwrap();
        assert!(matches!(
            expected_list_length(&q, &curve, 2005.0, &opts()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tabulated_kernel_and_curve_integrate_cleanly() {
        // Piecewise-linear kernel times piecewise-constant rate: Simpson is
        // exact on each subsegment once knots become breakpoints.
        let kernel = CitabilityKernel::tabulated(vec![(0.0, 0.4), (2.0, 0.4), (6.0, 0.0)]).unwrap();
        let curve = GrowthCurve::tabulated(vec![
            (2000.0, 0.0),
            (2003.0, 300.0),
            (2006.0, 900.0),
            (2010.0, 2100.0),
        ])
        .unwrap();
        let t = 2010.0;
        let got = expected_list_length(&kernel, &curve, t, &opts()).unwrap();

        // Hand-computed: rate is 100 on [2000,2003], 200 on [2003,2006],
        // 300 on [2006,2010]; q(t-s) is 0 for s<=2004, rises linearly to 0.4
        // at s=2008, then flat 0.4.
        // [2004,2006]: rate 200, mean q over the ramp = (0+0.2)/2 -> 200*2*0.1 = 40
        // [2006,2008]: rate 300, mean q = (0.2+0.4)/2 -> 300*2*0.3 = 180
        // [2008,2010]: rate 300, q = 0.4 -> 300*2*0.4 = 240
        let expected = 40.0 + 180.0 + 240.0;
        assert!(
            (got - expected).abs() < 1e-8,
            "got {got}, expected {expected}"
        );
    }
}
