//! Modeling toolkit for the growth of reference lists in scholarly
//! literatures.
//!
//! The library covers four layers:
//!
//! - [`model`] — growth curves, citability kernels, and the closed-form and
//!   quadrature predictors for expected list length and reference-age
//!   statistics;
//! - [`montecarlo`] — synthetic corpora drawn from the Bernoulli citation
//!   process, with empirical statistics to check the predictors;
//! - [`inference`] — least-squares fits of yearly aggregates, affine
//!   estimation of the citation probability, and binomial goodness-of-fit
//!   of length distributions;
//! - [`corpus`] — article-level CSV ingestion with the standard filters,
//!   yearly aggregation, and a cached, rate-limited DOI metadata harvester.
//!
//! [`config`] loads curves, kernels and simulation runs from TOML, and
//! [`quad`]/[`root`] provide the shared numerics.

pub mod config;
pub mod corpus;
pub mod error;
pub mod inference;
pub mod model;
pub mod montecarlo;
pub mod quad;
pub mod root;

pub use error::{Error, Result};
