//! Unified error taxonomy for the command line: every failure is labeled
//! with a machine-readable category and mapped to a stable exit code.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Config,
    Io,
    Numeric,
    Network,
    DataQuality,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Config => "config",
            Category::Io => "io",
            Category::Numeric => "numeric",
            Category::Network => "network",
            Category::DataQuality => "data-quality",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Category::Config => 2,
            Category::Io => 3,
            Category::Numeric => 4,
            Category::Network => 5,
            Category::DataQuality => 6,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    pub fn new(category: Category, message: impl Into<String>) -> Self {
        Self {
            category,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(Category::Config, message)
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self::new(Category::DataQuality, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<refgrowth::Error> for CliError {
    fn from(err: refgrowth::Error) -> Self {
        use refgrowth::Error as E;
        let category = match &err {
            E::Config(_) | E::Capacity { .. } => Category::Config,
            E::Domain(_) | E::Quadrature { .. } | E::Divergent(_) | E::Bisection(_) => {
                Category::Numeric
            }
            E::EmptyInput(_)
            | E::MisalignedSeries(_)
            | E::Degenerate(_)
            | E::YearGap { .. }
            | E::Histogram(_)
            | E::Csv { .. }
            | E::Column(_) => Category::DataQuality,
            E::Io(_) => Category::Io,
            E::Network(_) => Category::Network,
        };
        Self::new(category, err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::new(Category::Io, err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        Self::new(Category::Config, format!("json: {err}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
