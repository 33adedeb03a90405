//! Line-segment dimensionality-reduction benchmark: evenly spaced points on
//! the segment toward a power-decay direction, corrupted by seeded noise,
//! reduced to one dimension by PCA / Isomap / diffusion maps, and scored by
//! rank correlation against the true ordering.
//!
//! The solvers are deliberately small: shifted power iteration with
//! deflation on matrices no bigger than the point count, since the whole
//! experiment lives at desk scale.

use rayon::prelude::*;

use crate::diagnostics::knn_graph;
use crate::error::{Error, Result};
use crate::geometry::power_decay_sequence;
use crate::linalg::{eigenvalues_tied, top_eigenpairs};
use crate::matrix::DataMatrix;
use crate::noise::{NoiseSpec, SeedSpec};
use crate::stats::{average_ranks, mean, pearson, standard_error, KahanSum};

/// Kernel bandwidth rule for the diffusion map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// `epsilon = (median pairwise distance)^2`.
    Median,
    /// Fixed `epsilon > 0`.
    Fixed(f64),
}

/// A 1-d reduction method with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Pca,
    Isomap { k: usize },
    DiffusionMap { bandwidth: Bandwidth },
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::Pca => "pca".to_string(),
            Method::Isomap { k } => format!("isomap:{k}"),
            Method::DiffusionMap { .. } => "diffusion".to_string(),
        }
    }

    pub fn reduce(&self, m: &DataMatrix) -> Result<Vec<f64>> {
        match self {
            Method::Pca => pca_1d(m),
            Method::Isomap { k } => isomap_1d(m, *k),
            Method::DiffusionMap { bandwidth } => diffusion_map_1d(m, *bandwidth),
        }
    }
}

/// Correlation used to score a 1-d embedding against the true ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankMetric {
    /// Absolute Spearman rank correlation with average-rank ties; rank-based
    /// because the target is an ordering, absolute because a 1-d embedding
    /// has an arbitrary sign.
    #[default]
    SpearmanAbs,
    /// Absolute Pearson correlation, for sensitivity analysis.
    PearsonAbs,
}

/// `n` evenly spaced points on the segment from the origin to the
/// power-decay direction `z(alpha)` in `d` dimensions; row `i` is
/// `(i/(n-1)) z`.
pub fn make_line_points(n: usize, alpha: f64, d: usize) -> Result<DataMatrix> {
    if n < 2 {
        return Err(Error::invalid(format!("a line needs at least 2 points, got {n}")));
    }
    let z = power_decay_sequence(alpha, d)?;
    let rows = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            z.iter().map(|v| t * v).collect()
        })
        .collect();
    DataMatrix::from_rows(rows)
}

fn column_means(m: &DataMatrix) -> Vec<f64> {
    let n = m.n_rows() as f64;
    let d = m.n_cols();
    let mut means = vec![KahanSum::new(); d];
    for row in m.rows() {
        for (acc, v) in means.iter_mut().zip(row) {
            acc.add(*v);
        }
    }
    means.into_iter().map(|acc| acc.value() / n).collect()
}

/// Orients a score vector so its largest-magnitude entry (lowest index on
/// ties) is positive; 1-d embeddings carry an arbitrary sign.
fn orient(scores: &mut [f64]) {
    let mut best = 0;
    for (i, v) in scores.iter().enumerate() {
        if v.abs() > scores[best].abs() {
            best = i;
        }
    }
    if scores[best] < 0.0 {
        for v in scores.iter_mut() {
            *v = -*v;
        }
    }
}

/// Projections of the rows onto the top principal direction.
///
/// Works on the Gram form when the point count is the smaller side (the
/// usual case here), otherwise on the covariance form.
pub fn pca_1d(m: &DataMatrix) -> Result<Vec<f64>> {
    let n = m.n_rows();
    let d = m.n_cols();
    let means = column_means(m);
    let centered: Vec<Vec<f64>> = m
        .rows()
        .iter()
        .map(|row| row.iter().zip(&means).map(|(v, mu)| v - mu).collect())
        .collect();

    let total_sq: f64 =
        KahanSum::sum_iter(centered.iter().flat_map(|row| row.iter().map(|v| v * v)));
    let input_sq: f64 =
        KahanSum::sum_iter(m.rows().iter().flat_map(|row| row.iter().map(|v| v * v)));
    if total_sq <= 1e-24 * input_sq.max(1e-300) {
        return Err(Error::degenerate("all rows identical; no principal direction"));
    }

    let mut scores = if n <= d {
        // Gram route: G = Xc Xc^T, scores = sqrt(lambda) * top eigenvector
        let mut gram = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut acc = KahanSum::new();
                for (a, b) in centered[i].iter().zip(&centered[j]) {
                    acc.add(a * b);
                }
                gram[i][j] = acc.value();
                gram[j][i] = gram[i][j];
            }
        }
        let pairs = top_eigenpairs(&gram, 2)?;
        let (lambda, u) = &pairs[0];
        if eigenvalues_tied(pairs[0].0, pairs[1].0) {
            return Err(Error::degenerate("top two principal values are tied"));
        }
        if *lambda <= 0.0 {
            return Err(Error::degenerate("nonpositive leading principal value"));
        }
        u.iter().map(|ui| lambda.sqrt() * ui).collect::<Vec<f64>>()
    } else {
        // covariance route in d x d
        let mut cov = vec![vec![0.0; d]; d];
        for row in &centered {
            for a in 0..d {
                for b in 0..=a {
                    cov[a][b] += row[a] * row[b];
                }
            }
        }
        for a in 0..d {
            for b in 0..a {
                cov[b][a] = cov[a][b];
            }
        }
        let pairs = top_eigenpairs(&cov, 2.min(d))?;
        if pairs.len() > 1 && eigenvalues_tied(pairs[0].0, pairs[1].0) {
            return Err(Error::degenerate("top two principal values are tied"));
        }
        let (lambda, v) = &pairs[0];
        if *lambda <= 0.0 {
            return Err(Error::degenerate("nonpositive leading principal value"));
        }
        centered
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect::<Vec<f64>>()
    };
    orient(&mut scores);
    Ok(scores)
}

/// Single-source shortest paths on a dense weighted graph; `f64::INFINITY`
/// marks unreachable nodes.
fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        let mut best = f64::INFINITY;
        for v in 0..n {
            if !done[v] && dist[v] < best {
                best = dist[v];
                u = v;
            }
        }
        if u == usize::MAX {
            break;
        }
        done[u] = true;
        for &(v, w) in &adj[u] {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
            }
        }
    }
    dist
}

/// Isomap to one dimension: symmetrized kNN graph weighted by Euclidean
/// distance, all-pairs geodesics, classical MDS on the geodesic matrix.
/// A disconnected graph is an explicit failure, never silently repaired.
pub fn isomap_1d(m: &DataMatrix, k: usize) -> Result<Vec<f64>> {
    let n = m.n_rows();
    let graph = knn_graph(m, k)?;
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for i in 0..n {
        for &j in graph.neighbors(i) {
            let w = m.dist(i, j);
            // union symmetrization, deduplicated
            if !adj[i].iter().any(|&(v, _)| v == j) {
                adj[i].push((j, w));
            }
            if !adj[j].iter().any(|&(v, _)| v == i) {
                adj[j].push((i, w));
            }
        }
    }

    let mut geo_sq = vec![vec![0.0; n]; n];
    let mut unreachable = 0usize;
    for source in 0..n {
        let dist = dijkstra(&adj, source);
        for (j, &g) in dist.iter().enumerate() {
            if g.is_infinite() {
                unreachable += 1;
            }
            geo_sq[source][j] = g * g;
        }
    }
    if unreachable > 0 {
        return Err(Error::DisconnectedGraph { unreachable });
    }

    // classical MDS: B = -1/2 J D^2 J, embed on the top eigenvector
    let row_means: Vec<f64> = geo_sq.iter().map(|row| mean(row)).collect();
    let grand = mean(&row_means);
    let mut b = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            b[i][j] = -0.5 * (geo_sq[i][j] - row_means[i] - row_means[j] + grand);
        }
    }
    let pairs = top_eigenpairs(&b, 2)?;
    if eigenvalues_tied(pairs[0].0, pairs[1].0) {
        return Err(Error::degenerate("top two MDS eigenvalues are tied"));
    }
    let (lambda, u) = &pairs[0];
    if *lambda <= 0.0 {
        return Err(Error::degenerate("nonpositive leading MDS eigenvalue"));
    }
    let mut scores: Vec<f64> = u.iter().map(|ui| lambda.sqrt() * ui).collect();
    orient(&mut scores);
    Ok(scores)
}

/// Diffusion map to one dimension: Gaussian kernel, row-normalized to a
/// transition operator, embedded on the eigenvector of the second-largest
/// eigenvalue (the first is constant).
pub fn diffusion_map_1d(m: &DataMatrix, bandwidth: Bandwidth) -> Result<Vec<f64>> {
    let n = m.n_rows();
    if n < 3 {
        return Err(Error::invalid(format!("diffusion map needs at least 3 points, got {n}")));
    }
    let dists = m.pairwise_distances();
    let epsilon = match bandwidth {
        Bandwidth::Fixed(e) => {
            if !(e > 0.0) {
                return Err(Error::invalid(format!("bandwidth must be positive, got {e}")));
            }
            e
        }
        Bandwidth::Median => {
            let mut off_diag = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in (i + 1)..n {
                    off_diag.push(dists[i][j]);
                }
            }
            let med = crate::stats::median(&off_diag);
            if med <= 0.0 {
                return Err(Error::degenerate(
                    "coincident points give a zero median bandwidth",
                ));
            }
            med * med
        }
    };

    let mut kernel = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            kernel[i][j] = (-dists[i][j] * dists[i][j] / epsilon).exp();
        }
    }
    let degrees: Vec<f64> = kernel.iter().map(|row| KahanSum::sum_iter(row.iter().copied())).collect();

    // symmetric conjugate S = D^-1/2 K D^-1/2 shares eigenvalues with the
    // transition matrix D^-1 K; eigenvectors map back through D^-1/2
    let mut sym = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            sym[i][j] = kernel[i][j] / (degrees[i] * degrees[j]).sqrt();
        }
    }
    let pairs = top_eigenpairs(&sym, 3)?;
    if eigenvalues_tied(pairs[1].0, pairs[2].0) {
        return Err(Error::degenerate("second and third diffusion eigenvalues are tied"));
    }
    let mut scores: Vec<f64> =
        pairs[1].1.iter().zip(&degrees).map(|(v, deg)| v / deg.sqrt()).collect();
    orient(&mut scores);
    Ok(scores)
}

/// Absolute rank correlation between `scores` and a true ordering given as
/// a permutation (entry `i` is the true rank position of point `i`).
pub fn spearman_abs(true_order: &[usize], scores: &[f64]) -> Result<f64> {
    if true_order.len() != scores.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} order entries vs {} scores",
            true_order.len(),
            scores.len()
        )));
    }
    if true_order.len() < 3 {
        return Err(Error::TooFewSamples { need: 3, got: true_order.len() });
    }
    let mut check: Vec<usize> = true_order.to_vec();
    check.sort_unstable();
    if check.iter().enumerate().any(|(i, &v)| i != v) {
        return Err(Error::invalid("true_order is not a permutation of 0..n"));
    }
    let score_ranks = average_ranks(scores);
    let order_ranks: Vec<f64> = true_order.iter().map(|&r| (r + 1) as f64).collect();
    Ok(pearson(&score_ranks, &order_ranks)?.abs())
}

/// Full line-segment benchmark configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct LineExperimentConfig {
    /// Number of points on the segment.
    pub n: usize,
    /// Growth-rate parameter of the segment direction (`>= 2`, infinity for
    /// the all-ones direction).
    pub alpha: f64,
    /// Dimension grid, strictly increasing.
    pub dims: Vec<usize>,
    /// Noise law; `None` runs the noiseless control.
    pub noise: Option<NoiseSpec>,
    /// Noise replicates per (method, dimension) cell.
    pub replicates: usize,
    pub methods: Vec<Method>,
    pub seed: SeedSpec,
    pub metric: RankMetric,
}

impl LineExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::invalid("line experiment needs n >= 3"));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicate count must be at least 1"));
        }
        if self.dims.is_empty()
            || self.dims[0] == 0
            || self.dims.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::invalid("dimension grid must be strictly increasing and positive"));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("at least one method is required"));
        }
        for method in &self.methods {
            if let Method::Isomap { k } = method {
                if *k == 0 || *k >= self.n {
                    return Err(Error::invalid(format!(
                        "isomap neighbor count {k} must satisfy 1 <= k < n = {}",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One (method, dimension) cell of the benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub method: String,
    pub d: usize,
    /// Mean score over successful replicates; `None` when every replicate
    /// failed.
    pub mean_score: Option<f64>,
    pub stderr: Option<f64>,
    pub failures: usize,
    /// A cell is invalid when more than half its replicates failed.
    pub valid: bool,
}

/// All cells of a benchmark run, ordered by (method, dimension).
#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub cells: Vec<BenchCell>,
}

impl BenchResult {
    pub fn cell(&self, method: &str, d: usize) -> Option<&BenchCell> {
        self.cells.iter().find(|c| c.method == method && c.d == d)
    }
}

/// Runs the benchmark: for each dimension, generate the ground truth once,
/// add fresh seeded noise per replicate, reduce with every method, and
/// score against the true ordering. Failures (e.g. disconnected Isomap
/// graphs) are counted per cell, not repaired.
pub fn line_experiment(cfg: &LineExperimentConfig) -> Result<BenchResult> {
    cfg.validate()?;
    let true_order: Vec<usize> = (0..cfg.n).collect();
    let seed = cfg.seed;
    let mut cells: Vec<BenchCell> = Vec::with_capacity(cfg.methods.len() * cfg.dims.len());

    for &d in &cfg.dims {
        let ground = make_line_points(cfg.n, cfg.alpha, d)?;
        // per replicate: one noisy matrix shared by all methods
        let replicate_scores: Vec<Vec<Result<f64>>> = (0..cfg.replicates as u64)
            .into_par_iter()
            .map(|r| {
                let observed = match &cfg.noise {
                    Some(noise) => {
                        let rows: Vec<Vec<f64>> = ground
                            .rows()
                            .iter()
                            .enumerate()
                            .map(|(p, row)| {
                                let mut rng = seed.stream(r, p as u64);
                                row.iter().map(|v| v + noise.draw(&mut rng)).collect()
                            })
                            .collect();
                        DataMatrix::from_rows(rows).expect("noisy copy keeps the shape")
                    }
                    None => ground.clone(),
                };
                cfg.methods
                    .iter()
                    .map(|method| {
                        method.reduce(&observed).and_then(|scores| match cfg.metric {
                            RankMetric::SpearmanAbs => spearman_abs(&true_order, &scores),
                            RankMetric::PearsonAbs => {
                                let positions: Vec<f64> =
                                    true_order.iter().map(|&i| i as f64).collect();
                                pearson(&scores, &positions).map(f64::abs)
                            }
                        })
                    })
                    .collect()
            })
            .collect();

        for (mi, method) in cfg.methods.iter().enumerate() {
            let mut scores = Vec::with_capacity(cfg.replicates);
            let mut failures = 0usize;
            for rep in &replicate_scores {
                match &rep[mi] {
                    Ok(s) => scores.push(*s),
                    Err(_) => failures += 1,
                }
            }
            let valid = failures * 2 <= cfg.replicates;
            cells.push(BenchCell {
                method: method.label(),
                d,
                mean_score: (!scores.is_empty()).then(|| mean(&scores)),
                stderr: (scores.len() > 1).then(|| standard_error(&scores)),
                failures,
                valid,
            });
        }
    }
    // ordered by (method, d) for stable output
    cells.sort_by(|a, b| a.method.cmp(&b.method).then(a.d.cmp(&b.d)));
    Ok(BenchResult { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize, alpha: f64, d: usize) -> DataMatrix {
        make_line_points(n, alpha, d).unwrap()
    }

    #[test]
    fn line_points_shape_and_spacing() {
        let m = line(2, f64::INFINITY, 3);
        assert_eq!(m.rows(), &[vec![0.0; 3], vec![1.0; 3]]);

        let m = line(25, f64::INFINITY, 1);
        assert_eq!(m.n_rows(), 25);
        for (i, row) in m.rows().iter().enumerate() {
            assert!((row[0] - i as f64 / 24.0).abs() < 1e-15);
        }

        // consecutive distances all equal ||z|| / (n - 1)
        let m = line(25, 4.0, 64);
        let step = m.dist(0, 24) / 24.0;
        for i in 0..24 {
            assert!((m.dist(i, i + 1) - step).abs() < 1e-12);
        }

        assert!(make_line_points(1, 4.0, 8).is_err());
        assert!(make_line_points(10, 1.5, 8).is_err());
    }

    #[test]
    fn pca_recovers_noiseless_line() {
        for alpha in [2.0, 4.0, f64::INFINITY] {
            let m = line(25, alpha, 100);
            let scores = pca_1d(&m).unwrap();
            let rho = spearman_abs(&(0..25).collect::<Vec<_>>(), &scores).unwrap();
            assert_eq!(rho, 1.0, "alpha {alpha}");
        }
    }

    #[test]
    fn pca_hand_case_three_points() {
        let m = DataMatrix::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]])
            .unwrap();
        let scores = pca_1d(&m).unwrap();
        // proportional to (-1, 0, 1): centered, antisymmetric, unit spacing
        assert!((scores[1] - 0.0).abs() < 1e-9);
        assert!((scores[2] + scores[0]).abs() < 1e-9);
        assert!(((scores[2] - scores[0]).abs() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn pca_scaling_homogeneity() {
        let m = line(10, 5.0, 40);
        let scores = pca_1d(&m).unwrap();
        let scaled_rows: Vec<Vec<f64>> = m
            .rows()
            .iter()
            .map(|row| row.iter().map(|v| v * -3.0).collect())
            .collect();
        let scaled = pca_1d(&DataMatrix::from_rows(scaled_rows).unwrap()).unwrap();
        for (a, b) in scores.iter().zip(&scaled) {
            assert!((b.abs() - 3.0 * a.abs()).abs() < 1e-8);
        }
        let rho = spearman_abs(&(0..10).collect::<Vec<_>>(), &scaled).unwrap();
        assert_eq!(rho, 1.0);
    }

    #[test]
    fn pca_degenerate_on_identical_rows() {
        let m = DataMatrix::from_rows(vec![vec![0.1, 0.2]; 4]).unwrap();
        assert!(matches!(pca_1d(&m), Err(Error::Degenerate(_))));
    }

    #[test]
    fn pca_covariance_route_matches_gram_route() {
        // wide (n > d) forces the covariance route; compare against the
        // Gram route on the transpose-equivalent tall layout
        let gauss = NoiseSpec::gaussian(1.0).unwrap();
        let mut rng = SeedSpec::new(8).stream(0, 0);
        let rows: Vec<Vec<f64>> =
            (0..12).map(|_| (0..3).map(|_| gauss.draw(&mut rng)).collect()).collect();
        let m = DataMatrix::from_rows(rows).unwrap();
        assert!(m.n_rows() > m.n_cols());
        let scores = pca_1d(&m).unwrap();
        assert_eq!(scores.len(), 12);
        // projections reproduce pairwise differences along the top axis:
        // variance captured must dominate any single coordinate's variance
        let var_scores = crate::stats::sample_variance(&scores);
        for col in 0..3 {
            let column: Vec<f64> = m.rows().iter().map(|r| r[col]).collect();
            assert!(var_scores >= crate::stats::sample_variance(&column) - 1e-9);
        }
    }

    #[test]
    fn pca_rotation_invariance_of_ordering() {
        use rand::SeedableRng;
        let m = line(12, 6.0, 5);
        let base = pca_1d(&m).unwrap();
        // random rotation via Gram-Schmidt
        let gauss = NoiseSpec::gaussian(1.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let d = 5;
        let mut basis: Vec<Vec<f64>> = Vec::new();
        while basis.len() < d {
            let mut v: Vec<f64> = (0..d).map(|_| gauss.draw(&mut rng)).collect();
            for b in &basis {
                let proj: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
            let norm: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-8 {
                basis.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        let rotated_rows: Vec<Vec<f64>> = m
            .rows()
            .iter()
            .map(|row| {
                basis
                    .iter()
                    .map(|b| b.iter().zip(row).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect();
        let rotated = pca_1d(&DataMatrix::from_rows(rotated_rows).unwrap()).unwrap();
        let r = pearson(&base, &rotated).unwrap().abs();
        assert!((r - 1.0).abs() < 1e-6, "rotation changed the embedding: {r}");
    }

    #[test]
    fn isomap_path_graph_geodesics() {
        let m = DataMatrix::from_rows(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let scores = isomap_1d(&m, 1).unwrap();
        let rho = spearman_abs(&[0, 1, 2], &scores).unwrap();
        assert_eq!(rho, 1.0);
        // spacing is preserved exactly on a path graph
        assert!((scores[1] - scores[0] - (scores[2] - scores[1])).abs() < 1e-9);
    }

    #[test]
    fn isomap_disconnected_failure() {
        // two well-separated pairs with k = 1 cannot connect
        let m = DataMatrix::from_rows(vec![
            vec![0.0],
            vec![0.1],
            vec![100.0],
            vec![100.1],
        ])
        .unwrap();
        assert!(matches!(isomap_1d(&m, 1), Err(Error::DisconnectedGraph { .. })));
    }

    #[test]
    fn isomap_noiseless_line_perfect_and_matches_pca() {
        let m = line(25, 3.0, 200);
        let iso = isomap_1d(&m, 10).unwrap();
        let rho = spearman_abs(&(0..25).collect::<Vec<_>>(), &iso).unwrap();
        assert_eq!(rho, 1.0);
        let pca = pca_1d(&m).unwrap();
        let cross = spearman_abs(
            &(0..25).collect::<Vec<_>>(),
            &iso.iter().zip(&pca).map(|(a, b)| a + b * 0.0).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(cross, 1.0);
        // orderings coincide up to sign
        let r = pearson(&average_ranks(&iso), &average_ranks(&pca)).unwrap().abs();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diffusion_noiseless_line_perfect() {
        let m = line(25, f64::INFINITY, 50);
        let scores = diffusion_map_1d(&m, Bandwidth::Median).unwrap();
        let rho = spearman_abs(&(0..25).collect::<Vec<_>>(), &scores).unwrap();
        assert_eq!(rho, 1.0);
    }

    #[test]
    fn diffusion_degenerate_and_invalid_inputs() {
        let m = DataMatrix::from_rows(vec![vec![1.0, 1.0]; 5]).unwrap();
        assert!(matches!(diffusion_map_1d(&m, Bandwidth::Median), Err(Error::Degenerate(_))));
        let line3 = DataMatrix::from_rows(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert!(diffusion_map_1d(&line3, Bandwidth::Fixed(0.0)).is_err());
        let two = DataMatrix::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(diffusion_map_1d(&two, Bandwidth::Median).is_err());
    }

    #[test]
    fn diffusion_permutation_equivariance() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let m = line(10, 4.0, 30);
        let base = diffusion_map_1d(&m, Bandwidth::Median).unwrap();
        let mut perm: Vec<usize> = (0..10).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        perm.shuffle(&mut rng);
        let rows: Vec<Vec<f64>> = perm.iter().map(|&i| m.row(i).to_vec()).collect();
        let permuted = diffusion_map_1d(&DataMatrix::from_rows(rows).unwrap(), Bandwidth::Median)
            .unwrap();
        // scores follow their points; the global sign of a 1-d embedding is
        // arbitrary, so compare up to a common flip
        let same = perm
            .iter()
            .enumerate()
            .all(|(new_idx, &old_idx)| (permuted[new_idx] - base[old_idx]).abs() < 1e-8);
        let flipped = perm
            .iter()
            .enumerate()
            .all(|(new_idx, &old_idx)| (permuted[new_idx] + base[old_idx]).abs() < 1e-8);
        assert!(same || flipped);
    }

    #[test]
    fn spearman_examples() {
        assert_eq!(spearman_abs(&[0, 1, 2, 3], &[1.0, 2.0, 3.0, 4.0]).unwrap(), 1.0);
        assert_eq!(spearman_abs(&[0, 1, 2, 3], &[4.0, 3.0, 2.0, 1.0]).unwrap(), 1.0);
        let rho = spearman_abs(&[0, 1, 2], &[0.3, 0.1, 0.2]).unwrap();
        assert!((rho - 0.5).abs() < 1e-12);
        assert!(spearman_abs(&[0, 1], &[1.0, 2.0]).is_err());
        assert!(spearman_abs(&[0, 2, 2], &[1.0, 2.0, 3.0]).is_err());
        assert!(spearman_abs(&[0, 1, 2], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn noiseless_experiment_scores_one_everywhere() {
        let cfg = LineExperimentConfig {
            n: 25,
            alpha: 4.0,
            dims: vec![50, 200],
            noise: None,
            replicates: 2,
            methods: vec![
                Method::Pca,
                Method::Isomap { k: 10 },
                Method::DiffusionMap { bandwidth: Bandwidth::Median },
            ],
            seed: SeedSpec::new(1),
            metric: RankMetric::SpearmanAbs,
        };
        let result = line_experiment(&cfg).unwrap();
        assert_eq!(result.cells.len(), 6);
        for cell in &result.cells {
            assert_eq!(cell.failures, 0);
            assert!(cell.valid);
            assert_eq!(cell.mean_score, Some(1.0), "{} at d = {}", cell.method, cell.d);
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = LineExperimentConfig {
            n: 12,
            alpha: 3.0,
            dims: vec![64],
            noise: Some(NoiseSpec::uniform(1.25).unwrap()),
            replicates: 8,
            methods: vec![Method::Pca, Method::Isomap { k: 5 }],
            seed: SeedSpec::new(404),
            metric: RankMetric::SpearmanAbs,
        };
        let a = line_experiment(&cfg).unwrap();
        let b = line_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| line_experiment(&cfg)).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn experiment_validation() {
        let mut cfg = LineExperimentConfig {
            n: 25,
            alpha: 4.0,
            dims: vec![10],
            noise: None,
            replicates: 1,
            methods: vec![Method::Isomap { k: 30 }],
            seed: SeedSpec::new(0),
            metric: RankMetric::SpearmanAbs,
        };
        assert!(line_experiment(&cfg).is_err(), "isomap k >= n must be rejected");
        cfg.methods = vec![];
        assert!(line_experiment(&cfg).is_err());
        cfg.methods = vec![Method::Pca];
        cfg.n = 2;
        assert!(line_experiment(&cfg).is_err());
    }

    #[test]
    fn pearson_metric_flag() {
        let cfg = LineExperimentConfig {
            n: 10,
            alpha: f64::INFINITY,
            dims: vec![20],
            noise: None,
            replicates: 1,
            methods: vec![Method::Pca],
            seed: SeedSpec::new(2),
            metric: RankMetric::PearsonAbs,
        };
        let result = line_experiment(&cfg).unwrap();
        let score = result.cells[0].mean_score.unwrap();
        assert!((score - 1.0).abs() < 1e-9);
    }
}
