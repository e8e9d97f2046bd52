//! Fitting yearly aggregates: ordinary least squares for the linear
//! relationships, affine estimation of the citation probability, binomial
//! goodness-of-fit for the length distribution, and first differences of
//! cumulative series.

use std::collections::BTreeMap;

use serde::Serialize;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete, DiscreteCDF};

use crate::error::{Error, Result};

/// Result of a least-squares line fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination in `[0, 1]`; defined as 0 when the
    /// response has no variance (see `degenerate_y`).
    pub r_squared: f64,
    pub n_points: usize,
    /// Residual sum of squares over `n - 2`; zero when `n == 2`.
    pub residual_variance: f64,
    /// Set when the response had zero variance and the 0 convention applied.
    pub degenerate_y: bool,
}

/// Ordinary least squares of `y` against `x`.
pub fn ols_fit(x: &[f64], y: &[f64]) -> Result<FitResult> {
    if x.len() != y.len() {
        return Err(Error::MisalignedSeries(format!(
            "x has {} points, y has {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "a line fit needs at least 2 points, got {n}"
        )));
    }
    let nf = n as f64;
    let x_mean = x.iter().sum::<f64>() / nf;
    let y_mean = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_mean;
        let dy = yi - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate(
            "all x values are identical; the slope is undefined".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let sse = (syy - slope * sxy).max(0.0);
    let degenerate_y = syy == 0.0;
    let r_squared = if degenerate_y {
        0.0
    } else {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    let residual_variance = if n > 2 { sse / (n - 2) as f64 } else { 0.0 };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        n_points: n,
        residual_variance,
        degenerate_y,
    })
}

/// Estimates the uniform-model citation probability from the affine
/// relationship between mean list length and cumulative production: the
/// slope of an OLS fit of the length series against the production series.
/// Series must cover the same years in the same order.
pub fn fit_affine_q(p_series: &[(i32, f64)], l_series: &[(i32, f64)]) -> Result<FitResult> {
    if p_series.len() != l_series.len() {
        return Err(Error::MisalignedSeries(format!(
            "production series has {} years, length series has {}",
            p_series.len(),
            l_series.len()
        )));
    }
    for (&(py, _), &(ly, _)) in p_series.iter().zip(l_series) {
        if py != ly {
            return Err(Error::MisalignedSeries(format!(
                "year mismatch: production has {py} where length series has {ly}"
            )));
        }
    }
    if p_series.len() < 3 {
        return Err(Error::Degenerate(format!(
            "the affine fit needs at least 3 aligned years, got {}",
            p_series.len()
        )));
    }
    let x: Vec<f64> = p_series.iter().map(|&(_, v)| v).collect();
    let y: Vec<f64> = l_series.iter().map(|&(_, v)| v).collect();
    ols_fit(&x, &y)
}

/// First differences of a consecutive yearly series, aligned to the later
/// year.
pub fn yearly_increment(series: &[(i32, f64)]) -> Result<Vec<(i32, f64)>> {
    if series.len() < 2 {
        return Err(Error::Degenerate(format!(
            "increments need at least 2 years, got {}",
            series.len()
        )));
    }
    let mut out = Vec::with_capacity(series.len() - 1);
    for pair in series.windows(2) {
        let ((y0, v0), (y1, v1)) = (pair[0], pair[1]);
        if y1 != y0 + 1 {
            return Err(Error::YearGap {
                expected: y0 + 1,
                found: y1,
            });
        }
        out.push((y1, v1 - v0));
    }
    Ok(out)
}

/// Histogram of reference-list lengths for one publication year.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthHistogram {
    /// Article count per integer list length.
    pub counts: BTreeMap<u64, u64>,
    pub year: i32,
}

impl LengthHistogram {
    pub fn new(year: i32) -> Self {
        Self {
            counts: BTreeMap::new(),
            year,
        }
    }

    pub fn from_lengths<I: IntoIterator<Item = u64>>(year: i32, lengths: I) -> Self {
        let mut h = Self::new(year);
        for len in lengths {
            *h.counts.entry(len).or_insert(0) += 1;
        }
        h
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_length(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }
}

/// Binomial fit of a length histogram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinomialFit {
    /// Estimated per-article citation probability (sample mean over the
    /// trial count; for a known trial count this is also the MLE).
    pub p_hat: f64,
    /// Pearson chi-square statistic over tail-pooled bins.
    pub gof_statistic: f64,
    /// Upper-tail probability of the statistic; 1.0 when too few bins
    /// remain to test.
    pub p_value: f64,
    /// Bins after pooling to an expected count of at least 5.
    pub bins: usize,
    pub degrees_of_freedom: usize,
}

/// Fits `Bin(n_trials, p)` to the histogram and tests the fit with a
/// Pearson chi-square whose bins are pooled to an expected count of at
/// least 5.
pub fn fit_binomial(hist: &LengthHistogram, n_trials: u64) -> Result<BinomialFit> {
    let total = hist.total();
    if total == 0 {
        return Err(Error::EmptyInput("histogram holds no articles".into()));
    }
    if let Some(max) = hist.max_length() {
        if max > n_trials {
            return Err(Error::Histogram(format!(
                "observed length {max} exceeds the trial count {n_trials}"
            )));
        }
    }
    if n_trials == 0 {
        return Err(Error::Histogram("trial count must be >= 1".into()));
    }
    let total_f = total as f64;
    let mean = hist
        .counts
        .iter()
        .map(|(&k, &c)| k as f64 * c as f64)
        .sum::<f64>()
        / total_f;
    let p_hat = mean / n_trials as f64;

    if p_hat <= 0.0 || p_hat >= 1.0 {
        // Degenerate estimate: the fitted distribution is a point mass that
        // matches the data exactly.
        return Ok(BinomialFit {
            p_hat: p_hat.clamp(0.0, 1.0),
            gof_statistic: 0.0,
            p_value: 1.0,
            bins: 1,
            degrees_of_freedom: 0,
        });
    }

    let dist = Binomial::new(p_hat, n_trials)
        .map_err(|e| Error::Histogram(format!("binomial fit: {e}")))?;

    // Walk the support far enough to cover both the observed range and all
    // but a negligible sliver of fitted mass, then hand the remaining tail
    // to the final cell.
    let sigma = (n_trials as f64 * p_hat * (1.0 - p_hat)).sqrt();
    let k_cap = ((mean + 12.0 * sigma).ceil() as u64)
        .max(hist.max_length().unwrap_or(0))
        .min(n_trials);

    let mut cells: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    for k in 0..=k_cap {
        let observed = hist.counts.get(&k).copied().unwrap_or(0) as f64;
        let expected = total_f * dist.pmf(k);
        cells.push((observed, expected));
    }
    if k_cap < n_trials {
        let tail = total_f * (1.0 - dist.cdf(k_cap));
        if let Some(last) = cells.last_mut() {
            last.1 += tail.max(0.0);
        }
    }

    // Pool left to right until each bin expects at least 5; fold any
    // leftover into the final bin.
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (obs, exp) in cells {
        acc.0 += obs;
        acc.1 += exp;
        if acc.1 >= 5.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }

    let statistic: f64 = bins
        .iter()
        .filter(|(_, exp)| *exp > 0.0)
        .map(|(obs, exp)| (obs - exp).powi(2) / exp)
        .sum();

    // One degree lost to the total, one to the estimated probability.
    let df = bins.len().saturating_sub(2);
    let p_value = if df == 0 {
        1.0
    } else {
        let chi = ChiSquared::new(df as f64)
            .map_err(|e| Error::Histogram(format!("chi-square with df {df}: {e}")))?;
        1.0 - chi.cdf(statistic)
    };

    Ok(BinomialFit {
        p_hat,
        gof_statistic: statistic,
        p_value,
        bins: bins.len(),
        degrees_of_freedom: df,
    })
}
