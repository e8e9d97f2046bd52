//! Cumulative article-production curves.
//!
//! A [`GrowthCurve`] is the cumulative count of articles published up to a
//! point in time, together with its instantaneous publication rate. All
//! variants are nondecreasing and nonnegative on their supported domain.
//! Quantities restricted to the observation window start counting at the
//! curve's origin: `restricted(t)` is the cumulative count minus the count
//! at the origin, and is zero at the origin by construction.

use crate::error::{Error, Result};

/// Cumulative publication count as a function of time (years).
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthCurve {
    /// Straight-line growth: `start_count + rate * (t - origin)`.
    Linear {
        rate: f64,
        start_count: f64,
        origin: f64,
    },
    /// Polynomial in `(t - origin)` with nonnegative coefficients
    /// (constant term first). Nonnegative coefficients guarantee the curve
    /// is nonnegative and nondecreasing for `t >= origin`.
    Polynomial { coefficients: Vec<f64>, origin: f64 },
    /// `scale * exp(growth_rate * t)`. With `origin: None` the curve has
    /// infinite history, which the predictors treat in closed form.
    Exponential {
        scale: f64,
        growth_rate: f64,
        origin: Option<f64>,
    },
    /// Yearly cumulative counts with monotone piecewise-linear
    /// interpolation. Defined only on the tabulated range; the origin is
    /// the first tabulated year.
    Tabulated { points: Vec<(f64, f64)> },
}

impl GrowthCurve {
    pub fn linear(rate: f64, start_count: f64, origin: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::Config(format!(
                "linear growth rate must be finite and >= 0, got {rate}"
            )));
        }
        if !start_count.is_finite() || start_count < 0.0 {
            return Err(Error::Config(format!(
                "linear start_count must be finite and >= 0, got {start_count}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::Config("linear origin must be finite".into()));
        }
        Ok(Self::Linear {
            rate,
            start_count,
            origin,
        })
    }

    pub fn polynomial(coefficients: Vec<f64>, origin: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Config(
                "polynomial needs at least one coefficient".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::Config(
                "polynomial coefficients must be finite and >= 0".into(),
            ));
        }
        if !origin.is_finite() {
            return Err(Error::Config("polynomial origin must be finite".into()));
        }
        Ok(Self::Polynomial {
            coefficients,
            origin,
        })
    }

    pub fn exponential(scale: f64, growth_rate: f64, origin: Option<f64>) -> Result<Self> {
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::Config(format!(
                "exponential scale must be finite and > 0, got {scale}"
            )));
        }
        if !growth_rate.is_finite() || growth_rate <= 0.0 {
            return Err(Error::Config(format!(
                "exponential growth rate must be finite and > 0, got {growth_rate}"
            )));
        }
        if let Some(t0) = origin {
            if !t0.is_finite() {
                return Err(Error::Config("exponential origin must be finite".into()));
            }
        }
        Ok(Self::Exponential {
            scale,
            growth_rate,
            origin,
        })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Config(
                "tabulated curve needs at least two (year, count) points".into(),
            ));
        }
        for pair in points.windows(2) {
            let ((y0, c0), (y1, c1)) = (pair[0], pair[1]);
            if !(y0.is_finite() && y1.is_finite() && c0.is_finite() && c1.is_finite()) {
                return Err(Error::Config("tabulated points must be finite".into()));
            }
            if y1 <= y0 {
                return Err(Error::Config(format!(
                    "tabulated years must be strictly increasing: {y0} then {y1}"
                )));
            }
            if c1 < c0 {
                return Err(Error::Config(format!(
                    "tabulated counts must be nondecreasing: {c0} then {c1}"
                )));
            }
        }
        if points[0].1 < 0.0 {
            return Err(Error::Config("tabulated counts must be >= 0".into()));
        }
        Ok(Self::Tabulated { points })
    }

    /// Start of the observation window; `None` for infinite history.
    pub fn origin(&self) -> Option<f64> {
        match self {
            Self::Linear { origin, .. } | Self::Polynomial { origin, .. } => Some(*origin),
            Self::Exponential { origin, .. } => *origin,
            Self::Tabulated { points } => Some(points[0].0),
        }
    }

    /// Last supported time, when the domain is bounded above.
    pub fn domain_end(&self) -> Option<f64> {
        match self {
            Self::Tabulated { points } => Some(points[points.len() - 1].0),
            _ => None,
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite, got {t}")));
        }
        if let Some(t0) = self.origin() {
            if t < t0 {
                return Err(Error::Domain(format!(
                    "time {t} precedes the curve origin {t0}"
                )));
            }
        }
        if let Some(end) = self.domain_end() {
            if t > end {
                return Err(Error::Domain(format!(
                    "time {t} is beyond the tabulated range ending at {end}"
                )));
            }
        }
        Ok(())
    }

    /// Cumulative count at time `t`.
    pub fn value(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(match self {
            Self::Linear {
                rate,
                start_count,
                origin,
            } => start_count + rate * (t - origin),
            Self::Polynomial {
                coefficients,
                origin,
            } => horner(coefficients, t - origin),
            Self::Exponential {
                scale, growth_rate, ..
            } => scale * (growth_rate * t).exp(),
            Self::Tabulated { points } => interpolate(points, t),
        })
    }

    /// Instantaneous publication rate at time `t`. For tabulated curves this
    /// is the slope of the containing segment (the right-hand segment at a
    /// table year, the final segment at the last year).
    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(match self {
            Self::Linear { rate, .. } => *rate,
            Self::Polynomial {
                coefficients,
                origin,
            } => horner_derivative(coefficients, t - origin),
            Self::Exponential {
                scale, growth_rate, ..
            } => scale * growth_rate * (growth_rate * t).exp(),
            Self::Tabulated { points } => segment_slope(points, t),
        })
    }

    /// Cumulative count since the origin: `value(t) - value(origin)`.
    /// For the infinite-history exponential the subtracted term vanishes.
    pub fn restricted(&self, t: f64) -> Result<f64> {
        match self.origin() {
            Some(t0) => Ok(self.value(t)? - self.value(t0)?),
            None => self.value(t),
        }
    }

    /// Interior knots of the curve in `(a, b)`, used as quadrature
    /// breakpoints. Smooth variants have none.
    pub fn knots_between(&self, a: f64, b: f64) -> Vec<f64> {
        match self {
            Self::Tabulated { points } => points
                .iter()
                .map(|(y, _)| *y)
                .filter(|y| *y > a && *y < b)
                .collect(),
            _ => Vec::new(),
        }
    }
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn horner_derivative(coefficients: &[f64], x: f64) -> f64 {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, c)| acc * x + i as f64 * c)
}

/// Piecewise-linear interpolation that reproduces table values exactly at
/// table years.
fn interpolate(points: &[(f64, f64)], t: f64) -> f64 {
    match points.binary_search_by(|(y, _)| y.partial_cmp(&t).unwrap()) {
        Ok(i) => points[i].1,
        Err(i) => {
            // check_domain guarantees points[i-1].0 < t < points[i].0.
            let (y0, c0) = points[i - 1];
            let (y1, c1) = points[i];
            c0 + (c1 - c0) * (t - y0) / (y1 - y0)
        }
    }
}

fn segment_slope(points: &[(f64, f64)], t: f64) -> f64 {
    let i = match points.binary_search_by(|(y, _)| y.partial_cmp(&t).unwrap()) {
        Ok(i) => i.min(points.len() - 2),
        Err(i) => i - 1,
    };
    let (y0, c0) = points[i];
    let (y1, c1) = points[i + 1];
    (c1 - c0) / (y1 - y0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_values_and_restriction() {
        let p = GrowthCurve::linear(200.0, 1000.0, 2006.0).unwrap();
        assert_eq!(p.value(2006.0).unwrap(), 1000.0);
        assert_eq!(p.value(2016.0).unwrap(), 3000.0);
        assert_eq!(p.restricted(2006.0).unwrap(), 0.0);
        assert_eq!(p.restricted(2016.0).unwrap(), 2000.0);
        assert_eq!(p.derivative(2010.0).unwrap(), 200.0);
    }

    #[test]
    fn polynomial_quadratic() {
        let p = GrowthCurve::polynomial(vec![0.0, 0.0, 3.0], 2000.0).unwrap();
        assert_eq!(p.value(2004.0).unwrap(), 48.0);
        assert_eq!(p.derivative(2004.0).unwrap(), 24.0);
    }

    #[test]
    fn exponential_with_and_without_origin() {
        let p = GrowthCurve::exponential(2.0, 0.1, None).unwrap();
        assert!((p.value(10.0).unwrap() - 2.0 * 1.0f64.exp()).abs() < 1e-12);
        assert_eq!(p.restricted(10.0).unwrap(), p.value(10.0).unwrap());

        let q = GrowthCurve::exponential(2.0, 0.1, Some(0.0)).unwrap();
        assert!((q.restricted(10.0).unwrap() - 2.0 * (1.0f64.exp() - 1.0)).abs() < 1e-12);
        assert!(q.value(-1.0).is_err());
    }

    #[test]
    fn tabulated_matches_table_exactly_and_interpolates() {
        let pts = vec![
            (2006.0, 0.0),
            (2007.0, 120.0),
            (2009.0, 120.0),
            (2010.0, 220.0),
        ];
        let p = GrowthCurve::tabulated(pts.clone()).unwrap();
        for (y, c) in &pts {
            assert_eq!(p.value(*y).unwrap(), *c, "exact at table year {y}");
        }
        assert_eq!(p.value(2006.5).unwrap(), 60.0);
        assert_eq!(p.derivative(2008.0).unwrap(), 0.0);
        assert_eq!(p.derivative(2009.5).unwrap(), 100.0);
        assert!(p.value(2011.0).is_err(), "no extrapolation past the table");
        assert_eq!(p.knots_between(2006.0, 2010.0), vec![2007.0, 2009.0]);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(GrowthCurve::linear(-1.0, 0.0, 0.0).is_err());
        assert!(GrowthCurve::polynomial(vec![1.0, -2.0], 0.0).is_err());
        assert!(GrowthCurve::exponential(1.0, 0.0, None).is_err());
        assert!(GrowthCurve::tabulated(vec![(0.0, 5.0), (1.0, 4.0)]).is_err());
        assert!(GrowthCurve::tabulated(vec![(0.0, 5.0)]).is_err());
    }

    #[test]
    fn nondecreasing_on_sample_grid() {
        let curves = [
            GrowthCurve::linear(3.0, 7.0, 0.0).unwrap(),
            GrowthCurve::polynomial(vec![1.0, 2.0, 0.5, 0.1], 0.0).unwrap(),
            GrowthCurve::exponential(5.0, 0.2, Some(0.0)).unwrap(),
            GrowthCurve::tabulated(vec![(0.0, 0.0), (3.0, 9.0), (10.0, 9.5)]).unwrap(),
        ];
        for p in &curves {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=100 {
                let t = 10.0 * i as f64 / 100.0;
                let v = p.value(t).unwrap();
                assert!(v >= prev, "curve decreased at t={t}");
                assert!(v >= 0.0);
                prev = v;
            }
        }
    }
}
