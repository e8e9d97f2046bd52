//! Bisection on monotone functions.

use crate::error::{Error, Result};

/// Controls for bisection searches.
#[derive(Debug, Clone, Copy)]
pub struct BisectionOptions {
    /// Width of the final bracket, in the argument's units.
    pub tol: f64,
    pub max_iter: u32,
}

impl Default for BisectionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 200,
        }
    }
}

/// Finds the smallest `x` in `[lo, hi]` with `g(x) <= target`, for a
/// nonincreasing `g`.
///
/// The bracket keeps `g(lo) > target` and `g(hi) <= target`, so on functions
/// with a flat stretch at the target level the search converges to the left
/// edge of the plateau rather than an arbitrary interior point.
pub fn smallest_at_or_below<F: Fn(f64) -> f64>(
    g: F,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    opts: &BisectionOptions,
) -> Result<f64> {
    if lo > hi || lo.is_nan() || hi.is_nan() {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    if g(lo) <= target {
        return Ok(lo);
    }
    if g(hi) > target {
        return Err(Error::Domain(
            "bracket does not contain a crossing: g(hi) is above the target".into(),
        ));
    }
    for _ in 0..opts.max_iter {
        if hi - lo <= opts.tol {
            return Ok(hi);
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Bracket no longer representable; hi is as close as f64 allows.
            return Ok(hi);
        }
        if g(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::Bisection(opts.max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTS: BisectionOptions = BisectionOptions {
        tol: 1e-12,
        max_iter: 200,
    };

    #[test]
    fn linear_crossing() {
        let x = smallest_at_or_below(|x| 10.0 - x, 0.0, 10.0, 7.0, &OPTS).unwrap();
        assert!((x - 3.0).abs() < 1e-9, "got {x}");
    }

    #[test]
    fn plateau_returns_left_edge() {
        // g holds the target value on [2, 5]; the smallest qualifying x is 2.
        let g = |x: f64| {
            if x < 2.0 {
                4.0 - x
            } else if x <= 5.0 {
                2.0
            } else {
                2.0 - (x - 5.0)
            }
        };
        let x = smallest_at_or_below(g, 0.0, 8.0, 2.0, &OPTS).unwrap();
        assert!((x - 2.0).abs() < 1e-9, "got {x}");
    }

    #[test]
    fn immediate_hit_at_lo() {
        let x = smallest_at_or_below(|x| -x, 1.0, 5.0, 0.0, &OPTS).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn missing_crossing_is_domain_error() {
        let err = smallest_at_or_below(|x| 10.0 - x, 0.0, 1.0, 2.0, &OPTS).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
