//! Citability kernels: the probability that a new article cites an
//! existing article of a given age.

use crate::error::{Error, Result};

/// Citation probability as a function of reference age (years).
///
/// Values are probabilities, so every variant is constrained to `[0, 1]`.
/// Tabulated kernels interpolate linearly between the given ages, hold the
/// first value for ages before the first point, and are zero beyond the
/// last tabulated age (no silent extrapolation).
#[derive(Debug, Clone, PartialEq)]
pub enum CitabilityKernel {
    /// Age-independent citability: the uniform model.
    Constant { probability: f64 },
    /// `initial * exp(-decay_rate * age)`.
    ExponentialDecay { initial: f64, decay_rate: f64 },
    /// Piecewise-linear `(age, probability)` table.
    Tabulated { points: Vec<(f64, f64)> },
}

impl CitabilityKernel {
    pub fn constant(probability: f64) -> Result<Self> {
        check_probability(probability)?;
        Ok(Self::Constant { probability })
    }

    pub fn exponential_decay(initial: f64, decay_rate: f64) -> Result<Self> {
        check_probability(initial)?;
        if !decay_rate.is_finite() || decay_rate < 0.0 {
            return Err(Error::Config(format!(
                "decay rate must be finite and >= 0, got {decay_rate}"
            )));
        }
        Ok(Self::ExponentialDecay {
            initial,
            decay_rate,
        })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config(
                "tabulated kernel needs at least one point".into(),
            ));
        }
        for (age, p) in &points {
            if !age.is_finite() || *age < 0.0 {
                return Err(Error::Config(format!(
                    "kernel ages must be finite and >= 0, got {age}"
                )));
            }
            check_probability(*p)?;
        }
        for pair in points.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Config(
                    "kernel ages must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self::Tabulated { points })
    }

    /// Citation probability for a reference of the given age.
    /// Negative ages are clamped to zero.
    pub fn probability(&self, age: f64) -> f64 {
        let age = age.max(0.0);
        match self {
            Self::Constant { probability } => *probability,
            Self::ExponentialDecay {
                initial,
                decay_rate,
            } => initial * (-decay_rate * age).exp(),
            Self::Tabulated { points } => {
                if age <= points[0].0 {
                    return points[0].1;
                }
                let last = points[points.len() - 1];
                if age > last.0 {
                    return 0.0;
                }
                match points.binary_search_by(|(a, _)| a.partial_cmp(&age).unwrap()) {
                    Ok(i) => points[i].1,
                    Err(i) => {
                        let (a0, p0) = points[i - 1];
                        let (a1, p1) = points[i];
                        p0 + (p1 - p0) * (age - a0) / (a1 - a0)
                    }
                }
            }
        }
    }

    /// `Some(q)` when the kernel is the uniform model.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Self::Constant { probability } => Some(*probability),
            _ => None,
        }
    }

    /// Largest age with nonzero support, when bounded.
    pub fn support_end(&self) -> Option<f64> {
        match self {
            Self::Tabulated { points } => Some(points[points.len() - 1].0),
            _ => None,
        }
    }

    /// Interior ages where the kernel is not smooth, for use as quadrature
    /// breakpoints.
    pub fn knots_between(&self, a: f64, b: f64) -> Vec<f64> {
        match self {
            Self::Tabulated { points } => points
                .iter()
                .map(|(age, _)| *age)
                .filter(|age| *age > a && *age < b)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// The improper integral of `q(a) * exp(-rate * a)` over all ages.
    ///
    /// This is the constant factor in the exponential-growth predictor.
    /// It converges for any `rate > 0` because every kernel is bounded;
    /// nonpositive rates are rejected as divergent.
    pub fn decay_weighted_integral(&self, rate: f64) -> Result<f64> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::Divergent(format!(
                "the age integral needs a positive exponential rate, got {rate}"
            )));
        }
        Ok(match self {
            Self::Constant { probability } => probability / rate,
            Self::ExponentialDecay {
                initial,
                decay_rate,
            } => initial / (rate + decay_rate),
            Self::Tabulated { points } => {
                // Closed form per linear segment, plus the clamped head
                // before the first tabulated age; zero beyond the last age.
                let (a0, p0) = points[0];
                let mut total = p0 * (1.0 - (-rate * a0).exp()) / rate;
                for pair in points.windows(2) {
                    let ((al, pl), (ar, pr)) = (pair[0], pair[1]);
                    let width = ar - al;
                    let slope = (pr - pl) / width;
                    let damp = (-rate * width).exp();
                    let head = (-rate * al).exp();
                    total += head
                        * (pl * (1.0 - damp) / rate
                            + slope * (1.0 - damp * (1.0 + rate * width)) / (rate * rate));
                }
                total
            }
        })
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!(
            "citation probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}
