//! Predicts — and verifies by seeded Monte Carlo — when distance-based
//! neighbor relations in noisy high-dimensional data remain informative for
//! the underlying ground truth.
//!
//! The crate is organized around a simple decomposition: observed data is a
//! clean signal plus dense additive noise. Given a query point and two
//! candidate neighbors, [`geometry`] computes a standardized statistic whose
//! normal CDF predicts the probability that the noisy data ranks the
//! candidates the same way the clean data does. [`sim`] checks those
//! predictions empirically with reproducible parallel replicates,
//! [`diagnostics`] lifts them to whole point sets (neighbor-inversion
//! probabilities, growth-exponent phase classification, kNN-graph
//! truthfulness), and [`dimred`] reproduces the line-segment benchmark in
//! which PCA, Isomap and diffusion maps succeed or fail exactly where the
//! phase classification says neighbors stay truthful or turn random.

pub mod diagnostics;
pub mod dimred;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod noise;
pub mod sim;
pub mod stats;

mod linalg;

pub use error::{Error, Result};
pub use matrix::DataMatrix;
pub use noise::{NoiseSpec, SeedSpec};
