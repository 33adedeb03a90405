//! Dataset-level analyses: the diameter-driven neighbor-inversion
//! diagnostic, growth-exponent phase classification, and kNN-graph
//! truthfulness.
//!
//! Everything here is brute force over all pairs. The point sets are
//! desk-scale and correctness is the point, so there are no spatial
//! indexes; ties are broken by the lowest row index everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{predicted_preservation_prob, TripleSignal, TripleStats};
use crate::matrix::DataMatrix;
use crate::noise::NoiseSpec;
use crate::stats::ols_slope;

/// Exact diameter: the maximum pairwise Euclidean distance.
pub fn dataset_diameter(m: &DataMatrix) -> f64 {
    let n = m.n_rows();
    let mut best = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            best = best.max(m.dist_sq(i, j));
        }
    }
    best.sqrt()
}

/// One row's neighbor-inversion prediction: the probability that its true
/// furthest neighbor appears no further than its true closest neighbor
/// once noise is added.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointInversion {
    pub index: usize,
    pub closest: usize,
    pub furthest: usize,
    pub probability: f64,
}

/// All per-point inversion predictions plus their maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport {
    pub per_point: Vec<PointInversion>,
    pub max_probability: f64,
}

/// Analytic inversion probabilities for every row of `m` under `noise`.
///
/// For each point the candidate pair is (furthest, closest) by ground-truth
/// distance, ties to the lowest index, and the prediction is the normal
/// approximation evaluated on that triple.
pub fn inversion_probabilities(m: &DataMatrix, noise: &NoiseSpec) -> Result<InversionReport> {
    let n = m.n_rows();
    if n < 3 {
        return Err(Error::invalid(format!(
            "inversion diagnostics need at least 3 points, got {n}"
        )));
    }
    let mut per_point = Vec::with_capacity(n);
    let mut max_probability = 0.0f64;
    for i in 0..n {
        let mut closest = usize::MAX;
        let mut closest_sq = f64::INFINITY;
        let mut furthest = usize::MAX;
        let mut furthest_sq = f64::NEG_INFINITY;
        for j in 0..n {
            if j == i {
                continue;
            }
            let dist_sq = m.dist_sq(i, j);
            if dist_sq < closest_sq {
                closest_sq = dist_sq;
                closest = j;
            }
            if dist_sq > furthest_sq {
                furthest_sq = dist_sq;
                furthest = j;
            }
        }
        let triple = TripleSignal::new(
            m.row(i).to_vec(),
            m.row(furthest).to_vec(),
            m.row(closest).to_vec(),
        )?;
        let probability = predicted_preservation_prob(&TripleStats::from_triple(&triple), noise)?;
        max_probability = max_probability.max(probability);
        per_point.push(PointInversion { index: i, closest, furthest, probability });
    }
    Ok(InversionReport { per_point, max_probability })
}

/// A discriminator series over a dimension grid: the signal gap (or any
/// nonnegative growth proxy) per dimension, optionally with the empirical
/// sup of the coordinate gap.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSeries {
    dims: Vec<usize>,
    gaps: Vec<f64>,
    delta_inf_sup: Option<f64>,
}

impl GrowthSeries {
    pub fn new(dims: Vec<usize>, gaps: Vec<f64>, delta_inf_sup: Option<f64>) -> Result<Self> {
        if dims.len() != gaps.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} dims vs {} gaps",
                dims.len(),
                gaps.len()
            )));
        }
        if dims.is_empty() || dims[0] == 0 || dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("dims must be positive and strictly increasing"));
        }
        Ok(Self { dims, gaps, delta_inf_sup })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn delta_inf_sup(&self) -> Option<f64> {
        self.delta_inf_sup
    }
}

/// Phase classification of a growth exponent against the critical band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseLabel {
    /// Gap growth too slow: noisy neighbors drift to coin flips.
    Random,
    /// Gap growth dominates the noise floor: noisy neighbors stay truthful.
    Truthful,
    /// Within the band around the critical exponent 1/2; no call is made.
    Critical,
}

/// Fitted growth exponent with the band used to classify it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseVerdict {
    pub exponent: f64,
    pub band: (f64, f64),
    pub label: PhaseLabel,
}

/// The asymptotic threshold is exactly 1/2; a fitted exponent inside this
/// band is reported as Critical rather than guessed either way.
pub const DEFAULT_CRITICAL_BAND: (f64, f64) = (0.45, 0.55);

/// Least-squares fit of `log gap` against `log d`, classified against
/// [`DEFAULT_CRITICAL_BAND`].
pub fn estimate_growth_exponent(series: &GrowthSeries) -> Result<PhaseVerdict> {
    estimate_growth_exponent_with_band(series, DEFAULT_CRITICAL_BAND)
}

pub fn estimate_growth_exponent_with_band(
    series: &GrowthSeries,
    band: (f64, f64),
) -> Result<PhaseVerdict> {
    if series.dims.len() < 3 {
        return Err(Error::invalid(format!(
            "exponent fit needs at least 3 grid points, got {}",
            series.dims.len()
        )));
    }
    if band.0 > band.1 {
        return Err(Error::invalid("critical band bounds are out of order"));
    }
    if let Some(bad) = series.gaps.iter().find(|g| **g <= 0.0 || !g.is_finite()) {
        return Err(Error::domain(format!("gap series must be positive, found {bad}")));
    }
    let log_d: Vec<f64> = series.dims.iter().map(|&d| (d as f64).ln()).collect();
    let log_gap: Vec<f64> = series.gaps.iter().map(|g| g.ln()).collect();
    let exponent = ols_slope(&log_d, &log_gap)?;
    let label = if exponent < band.0 {
        PhaseLabel::Random
    } else if exponent > band.1 {
        PhaseLabel::Truthful
    } else {
        PhaseLabel::Critical
    };
    Ok(PhaseVerdict { exponent, band, label })
}

/// Directed k-nearest-neighbor graph with lowest-index tie-breaking.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnGraph {
    k: usize,
    neighbors: Vec<Vec<usize>>,
}

impl KnnGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Neighbor indices of `i`, nearest first.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn n_nodes(&self) -> usize {
        self.neighbors.len()
    }

    pub fn contains_edge(&self, from: usize, to: usize) -> bool {
        self.neighbors[from].contains(&to)
    }

    /// All directed edges in (source, order-of-closeness) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().map(move |&j| (i, j)))
    }
}

/// Brute-force directed kNN graph of the rows of `m`.
pub fn knn_graph(m: &DataMatrix, k: usize) -> Result<KnnGraph> {
    let n = m.n_rows();
    if k == 0 || k >= n {
        return Err(Error::invalid(format!("k must satisfy 1 <= k < n = {n}, got {k}")));
    }
    let mut neighbors = Vec::with_capacity(n);
    for i in 0..n {
        let mut order: Vec<(f64, usize)> =
            (0..n).filter(|&j| j != i).map(|j| (m.dist_sq(i, j), j)).collect();
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances").then(a.1.cmp(&b.1)));
        neighbors.push(order.into_iter().take(k).map(|(_, j)| j).collect());
    }
    Ok(KnnGraph { k, neighbors })
}

/// Fraction of directed kNN edges of `ground` that survive in the kNN graph
/// of `observed`; 1.0 means the noisy graph is fully truthful.
pub fn knn_agreement(ground: &DataMatrix, observed: &DataMatrix, k: usize) -> Result<f64> {
    if ground.n_rows() != observed.n_rows() || ground.n_cols() != observed.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "ground is {}x{}, observed is {}x{}",
            ground.n_rows(),
            ground.n_cols(),
            observed.n_rows(),
            observed.n_cols()
        )));
    }
    let g = knn_graph(ground, k)?;
    let o = knn_graph(observed, k)?;
    let mut kept = 0usize;
    let mut total = 0usize;
    for (i, j) in g.edges() {
        total += 1;
        if o.contains_edge(i, j) {
            kept += 1;
        }
    }
    Ok(kept as f64 / total as f64)
}
