//! Error type shared across the toolkit.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation
    /// (e.g. evaluating a curve before its origin, or a zero denominator).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid parameters when constructing a curve, kernel or run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Adaptive quadrature exhausted its subdivision budget before reaching
    /// the requested absolute tolerance.
    #[error("quadrature did not converge: requested {requested:e}, error estimate {achieved:e}")]
    Quadrature { requested: f64, achieved: f64 },

    /// An improper integral does not converge for the given parameters.
    #[error("integral diverges: {0}")]
    Divergent(String),

    /// Bisection exhausted its iteration budget.
    #[error("bisection did not converge within {0} iterations")]
    Bisection(u32),

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Simulation would need more pairwise draws than the configured budget.
    #[error("pair budget exceeded: {required} pair draws needed, budget is {budget}")]
    Capacity { required: u64, budget: u64 },

    #[error("misaligned series: {0}")]
    MisalignedSeries(String),

    /// Input that makes an estimator ill-posed, e.g. zero-variance x in a fit.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("year gap in series: expected {expected}, found {found}")]
    YearGap { expected: i32, found: i32 },

    #[error("inconsistent histogram: {0}")]
    Histogram(String),

    #[error("malformed CSV{}: {message}", .line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Csv { line: Option<u64>, message: String },

    /// Missing or unexpected column in an input file.
    #[error("column error: {0}")]
    Column(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("network error: {0}")]
    Network(String),
}
