//! Seeded Monte Carlo verification engine: empirical preservation
//! probabilities, the standardized squared-distance-difference statistic
//! with normality diagnostics, relative contrast, and empirical noise
//! distances.
//!
//! Replicates are independent work units keyed by `(replicate, point)`
//! generator streams, so a run's output is a pure function of the seed and
//! config no matter how many workers execute it. Reductions happen in
//! replicate order after a parallel ordered collect.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{TripleSignal, TripleStats};
use crate::noise::{phi, std_normal_quantile, NoiseSpec, SeedSpec};
use crate::stats::{mean, wilson_half_width, KahanSum};

/// Replication count, seed, and the dimension grid to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    replicates: usize,
    seed: SeedSpec,
    dims: Vec<usize>,
}

impl SimConfig {
    pub fn new(replicates: usize, seed: SeedSpec, dims: Vec<usize>) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::invalid("replicate count must be at least 1"));
        }
        if dims.is_empty() {
            return Err(Error::invalid("dimension grid must be nonempty"));
        }
        if dims[0] == 0 || dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("dimension grid must be strictly increasing and positive"));
        }
        Ok(Self { replicates, seed, dims })
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    pub fn seed(&self) -> SeedSpec {
        self.seed
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

/// Per-dimension outputs of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct DimRecord {
    pub d: usize,
    /// Fraction of replicates in which the noisy `x` stayed at least as
    /// close to `y` as to `z`.
    pub p_hat: f64,
    /// Half-width of the 95% Wilson interval around `p_hat`.
    pub ci_half_width: f64,
    /// Standardized statistic draws, one per replicate, when collected.
    pub y_samples: Option<Vec<f64>>,
    /// Mean relative contrast of the noisy triple, when collected.
    pub rc_mean: Option<f64>,
    /// Mean distance between two fresh noise vectors, when collected.
    pub noise_dist_mean: Option<f64>,
}

/// Monte Carlo outputs over the full dimension grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub records: Vec<DimRecord>,
}

impl SimResult {
    pub fn record_for(&self, d: usize) -> Option<&DimRecord> {
        self.records.iter().find(|r| r.d == d)
    }
}

/// Which optional statistics a triple run should collect on top of the
/// preservation probability.
#[derive(Debug, Clone, Copy, Default)]
pub struct TripleSimOptions {
    pub collect_y: bool,
    pub collect_rc: bool,
    pub collect_noise_dist: bool,
}

/// Noisy squared distances of one replicate, checkpointed at each grid
/// dimension. Prefix consistency of the streams makes the checkpoint at `d`
/// identical to a standalone run at `d`.
fn triple_replicate_sums(
    triple: &TripleSignal,
    noise: &NoiseSpec,
    seed: &SeedSpec,
    replicate: u64,
    dims: &[usize],
) -> Vec<(f64, f64, f64)> {
    let mut rng_x = seed.stream(replicate, 0);
    let mut rng_y = seed.stream(replicate, 1);
    let mut rng_z = seed.stream(replicate, 2);
    let x = triple.x();
    let y = triple.y();
    let z = triple.z();
    let mut xy = KahanSum::new();
    let mut xz = KahanSum::new();
    let mut yz = KahanSum::new();
    let mut out = Vec::with_capacity(dims.len());
    let mut next = 0;
    let max_d = *dims.last().expect("validated nonempty");
    for i in 0..max_d {
        let nx = noise.draw(&mut rng_x);
        let ny = noise.draw(&mut rng_y);
        let nz = noise.draw(&mut rng_z);
        let exy = (x[i] - y[i]) + (nx - ny);
        let exz = (x[i] - z[i]) + (nx - nz);
        let eyz = (y[i] - z[i]) + (ny - nz);
        xy.add(exy * exy);
        xz.add(exz * exz);
        yz.add(eyz * eyz);
        while next < dims.len() && dims[next] == i + 1 {
            out.push((xy.value(), xz.value(), yz.value()));
            next += 1;
        }
    }
    out
}

/// Full simulation driver for one triple.
pub fn run_triple_sim(
    triple: &TripleSignal,
    noise: &NoiseSpec,
    cfg: &SimConfig,
    opts: TripleSimOptions,
) -> Result<SimResult> {
    let max_d = *cfg.dims.last().expect("validated nonempty");
    if max_d > triple.dim() {
        return Err(Error::invalid(format!(
            "dimension grid reaches {max_d} but the triple has only {} coordinates",
            triple.dim()
        )));
    }
    let seed = cfg.seed;
    let replicate_sums: Vec<Vec<(f64, f64, f64)>> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| triple_replicate_sums(triple, noise, &seed, r, &cfg.dims))
        .collect();

    let mut records = Vec::with_capacity(cfg.dims.len());
    for (k, &d) in cfg.dims.iter().enumerate() {
        let stats = TripleStats::from_prefix(triple, d)?;
        let sigma_sq = stats.gap_variance(noise);
        if sigma_sq <= 0.0 {
            return Err(Error::domain("degenerate zero-variance statistic"));
        }
        let mu = stats.gap_mean();
        let sigma = sigma_sq.sqrt();

        let mut successes = 0usize;
        let mut y_samples = opts.collect_y.then(|| Vec::with_capacity(cfg.replicates));
        let mut rc_acc = opts.collect_rc.then(KahanSum::new);
        for sums in &replicate_sums {
            let (dxy_sq, dxz_sq, dyz_sq) = sums[k];
            // ties count as preserved; they occur with probability zero
            if dxy_sq <= dxz_sq {
                successes += 1;
            }
            if let Some(samples) = y_samples.as_mut() {
                samples.push((dxy_sq - dxz_sq - mu) / sigma);
            }
            if let Some(acc) = rc_acc.as_mut() {
                let dxy = dxy_sq.sqrt();
                let dxz = dxz_sq.sqrt();
                let dyz = dyz_sq.sqrt();
                let max = dxy.max(dxz).max(dyz);
                let min = dxy.min(dxz).min(dyz);
                if min <= 0.0 {
                    return Err(Error::domain("coincident noisy points in relative contrast"));
                }
                acc.add(max / min - 1.0);
            }
        }
        let p_hat = successes as f64 / cfg.replicates as f64;
        records.push(DimRecord {
            d,
            p_hat,
            ci_half_width: wilson_half_width(p_hat, cfg.replicates),
            y_samples,
            rc_mean: rc_acc.map(|acc| acc.value() / cfg.replicates as f64),
            noise_dist_mean: opts
                .collect_noise_dist
                .then(|| empirical_noise_distance(noise, d, cfg)),
        });
    }
    Ok(SimResult { records })
}

/// Empirical probability that the noisy `x` stays at least as close to `y`
/// as to `z`, with a 95% Wilson half-width, per grid dimension.
pub fn simulate_preservation(
    triple: &TripleSignal,
    noise: &NoiseSpec,
    cfg: &SimConfig,
) -> Result<SimResult> {
    run_triple_sim(triple, noise, cfg, TripleSimOptions::default())
}

/// Draws of the standardized statistic
/// `y(d) = (z(d) - mean) / sd`, one per replicate, per grid dimension.
/// `z(d)` is the noisy squared-distance difference and mean/sd are its
/// closed-form moments.
pub fn standardized_samples(
    triple: &TripleSignal,
    noise: &NoiseSpec,
    cfg: &SimConfig,
) -> Result<Vec<(usize, Vec<f64>)>> {
    let result = run_triple_sim(
        triple,
        noise,
        cfg,
        TripleSimOptions { collect_y: true, ..Default::default() },
    )?;
    Ok(result
        .records
        .into_iter()
        .map(|rec| (rec.d, rec.y_samples.expect("collected")))
        .collect())
}

/// Relative contrast `max pairwise distance / min pairwise distance - 1` of
/// a freshly-noised copy of `points`, one value per replicate, per grid
/// dimension. `noise = None` evaluates the noiseless point set itself.
pub fn relative_contrast_samples(
    points: &[Vec<f64>],
    noise: Option<&NoiseSpec>,
    cfg: &SimConfig,
) -> Result<Vec<(usize, Vec<f64>)>> {
    if points.len() < 2 {
        return Err(Error::invalid("relative contrast needs at least 2 points"));
    }
    let d_full = points[0].len();
    if points.iter().any(|p| p.len() != d_full) {
        return Err(Error::DimensionMismatch("points of unequal length".into()));
    }
    let max_d = *cfg.dims.last().expect("validated nonempty");
    if max_d > d_full {
        return Err(Error::invalid(format!(
            "dimension grid reaches {max_d} but points have only {d_full} coordinates"
        )));
    }
    let n = points.len();
    let n_pairs = n * (n - 1) / 2;
    let seed = cfg.seed;

    let per_replicate: Vec<Result<Vec<f64>>> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rngs: Vec<_> = (0..n as u64).map(|p| seed.stream(r, p)).collect();
            let mut pair_sums = vec![KahanSum::new(); n_pairs];
            let mut noise_row = vec![0.0; n];
            let mut rcs = Vec::with_capacity(cfg.dims.len());
            let mut next = 0;
            for i in 0..max_d {
                match noise {
                    Some(spec) => {
                        for (slot, rng) in rngs.iter_mut().enumerate() {
                            noise_row[slot] = spec.draw(rng);
                        }
                    }
                    None => noise_row.iter_mut().for_each(|v| *v = 0.0),
                }
                let mut pair = 0;
                for a in 0..n {
                    for b in (a + 1)..n {
                        let diff = (points[a][i] + noise_row[a]) - (points[b][i] + noise_row[b]);
                        pair_sums[pair].add(diff * diff);
                        pair += 1;
                    }
                }
                while next < cfg.dims.len() && cfg.dims[next] == i + 1 {
                    let mut max = f64::NEG_INFINITY;
                    let mut min = f64::INFINITY;
                    for s in &pair_sums {
                        let dist = s.value().sqrt();
                        max = max.max(dist);
                        min = min.min(dist);
                    }
                    if min <= 0.0 {
                        return Err(Error::domain(
                            "coincident noisy points in relative contrast",
                        ));
                    }
                    rcs.push(max / min - 1.0);
                    next += 1;
                }
            }
            Ok(rcs)
        })
        .collect();

    let mut out: Vec<(usize, Vec<f64>)> =
        cfg.dims.iter().map(|&d| (d, Vec::with_capacity(cfg.replicates))).collect();
    for rep in per_replicate {
        let rcs = rep?;
        for (slot, rc) in out.iter_mut().zip(rcs) {
            slot.1.push(rc);
        }
    }
    Ok(out)
}

/// Monte Carlo mean of the distance between two independent noise vectors
/// of dimension `d`.
pub fn empirical_noise_distance(noise: &NoiseSpec, d: usize, cfg: &SimConfig) -> f64 {
    let seed = cfg.seed;
    let dists: Vec<f64> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng_a = seed.stream(r, 0);
            let mut rng_b = seed.stream(r, 1);
            let mut acc = KahanSum::new();
            for _ in 0..d {
                let diff = noise.draw(&mut rng_a) - noise.draw(&mut rng_b);
                acc.add(diff * diff);
            }
            acc.value().sqrt()
        })
        .collect();
    mean(&dists)
}

/// Kolmogorov-Smirnov sup-distance between the empirical CDF of `samples`
/// and the standard normal CDF.
pub fn ks_statistic_vs_std_normal(samples: &[f64]) -> Result<f64> {
    if samples.len() < 8 {
        return Err(Error::TooFewSamples { need: 8, got: samples.len() });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        let u = phi(s);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        sup = sup.max((u - lo).abs()).max((hi - u).abs());
    }
    Ok(sup)
}

/// Pearson correlation between the order statistics of `samples` and the
/// standard normal quantiles at `(i - 1/2)/n`; the straight-line summary of
/// a Q-Q plot.
pub fn qq_correlation(samples: &[f64]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples { need: 3, got: samples.len() });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len();
    let quantiles: Vec<f64> = (0..n)
        .map(|i| std_normal_quantile((i as f64 + 0.5) / n as f64).expect("interior probability"))
        .collect();
    crate::stats::pearson(&sorted, &quantiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{power_decay_triple, predicted_preservation_prob};
    use crate::stats::{sample_skewness, sample_variance};

    fn cfg(reps: usize, seed: u64, dims: Vec<usize>) -> SimConfig {
        SimConfig::new(reps, SeedSpec::new(seed), dims).unwrap()
    }

    #[test]
    fn config_validation() {
        let seed = SeedSpec::new(0);
        assert!(SimConfig::new(0, seed, vec![10]).is_err());
        assert!(SimConfig::new(10, seed, vec![]).is_err());
        assert!(SimConfig::new(10, seed, vec![10, 10]).is_err());
        assert!(SimConfig::new(10, seed, vec![100, 10]).is_err());
        assert!(SimConfig::new(10, seed, vec![0, 10]).is_err());
    }

    #[test]
    fn identical_points_give_half() {
        // x = y = z = 0: exchangeability forces exactly 1/2
        let d = 100;
        let t = TripleSignal::new(vec![0.0; d], vec![0.0; d], vec![0.0; d]).unwrap();
        let noise = NoiseSpec::uniform(1.0).unwrap();
        let res = simulate_preservation(&t, &noise, &cfg(5000, 31, vec![d])).unwrap();
        let p = res.records[0].p_hat;
        assert!((p - 0.5).abs() <= 0.021, "p_hat {p}");
    }

    #[test]
    fn strong_signal_alpha6_preserved() {
        let t = power_decay_triple(6.0, 10_000).unwrap();
        let noise = NoiseSpec::uniform(1.25).unwrap();
        let res = simulate_preservation(&t, &noise, &cfg(2000, 7, vec![10_000])).unwrap();
        assert!(res.records[0].p_hat >= 0.99, "p_hat {}", res.records[0].p_hat);
    }

    #[test]
    fn simulation_tracks_prediction_on_random_triples() {
        // scaled-down version of the oracle-agreement acceptance criterion
        let noise = NoiseSpec::uniform(0.75).unwrap();
        let seed = SeedSpec::new(123);
        let gen_noise = NoiseSpec::uniform(1.0).unwrap();
        for case in 0..6u64 {
            let d = 2500;
            let mut rng = SeedSpec::new(900 + case).stream(0, 0);
            let x: Vec<f64> = (0..d).map(|_| gen_noise.draw(&mut rng)).collect();
            let y: Vec<f64> = (0..d).map(|_| gen_noise.draw(&mut rng)).collect();
            let z: Vec<f64> = (0..d).map(|_| gen_noise.draw(&mut rng)).collect();
            let t = TripleSignal::new(x, y, z).unwrap();
            let sim_cfg = SimConfig::new(2000, seed, vec![d]).unwrap();
            let res = simulate_preservation(&t, &noise, &sim_cfg).unwrap();
            let rec = &res.records[0];
            let predicted =
                predicted_preservation_prob(&TripleStats::from_prefix(&t, d).unwrap(), &noise)
                    .unwrap();
            assert!(
                (rec.p_hat - predicted).abs() <= 3.0 * rec.ci_half_width + 0.02,
                "case {case}: p_hat {} vs predicted {predicted}",
                rec.p_hat
            );
        }
    }

    #[test]
    fn swapping_candidates_complements_p_hat() {
        let t = power_decay_triple(4.0, 2000).unwrap();
        let noise = NoiseSpec::uniform(1.25).unwrap();
        let c = cfg(4000, 11, vec![2000]);
        let fwd = simulate_preservation(&t, &noise, &c).unwrap().records[0].clone();
        let rev = simulate_preservation(&t.swapped(), &noise, &c).unwrap().records[0].clone();
        let slack = 2.0 * (fwd.ci_half_width + rev.ci_half_width);
        assert!(
            (fwd.p_hat + rev.p_hat - 1.0).abs() <= slack,
            "{} + {} not complementary",
            fwd.p_hat,
            rev.p_hat
        );
    }

    #[test]
    fn standardized_samples_have_unit_moments() {
        let t = power_decay_triple(5.0, 4000).unwrap();
        let noise = NoiseSpec::uniform(1.25).unwrap();
        let c = cfg(4000, 19, vec![4000]);
        let samples = &standardized_samples(&t, &noise, &c).unwrap()[0].1;
        assert_eq!(samples.len(), 4000);
        let m = mean(samples);
        let v = sample_variance(samples);
        assert!(m.abs() <= 4.0 / (samples.len() as f64).sqrt(), "mean {m}");
        assert!((v - 1.0).abs() <= 0.1, "variance {v}");

        // brute-force cross-check of the closed-form moments of z(d)
        let stats = TripleStats::from_prefix(&t, 4000).unwrap();
        let mu = stats.gap_mean();
        let sigma = stats.gap_variance(&noise).sqrt();
        let raw: Vec<f64> = samples.iter().map(|y| y * sigma + mu).collect();
        let raw_mean = mean(&raw);
        let raw_sd = sample_variance(&raw).sqrt();
        assert!((raw_mean - mu).abs() <= 4.0 * sigma / (raw.len() as f64).sqrt());
        assert!((raw_sd - sigma).abs() / sigma <= 0.05);
    }

    #[test]
    fn standardized_samples_symmetric_for_identical_triple() {
        let d = 2000;
        let t = TripleSignal::new(vec![0.0; d], vec![0.0; d], vec![0.0; d]).unwrap();
        let noise = NoiseSpec::uniform(1.0).unwrap();
        let samples = &standardized_samples(&t, &noise, &cfg(5000, 23, vec![d])).unwrap()[0].1;
        let skew = sample_skewness(samples);
        assert!(skew.abs() <= 0.1, "skewness {skew}");
    }

    #[test]
    fn ks_statistic_examples() {
        // exact standard normal quantiles at (i - 1/2)/8: D <= 1/16
        let q8: Vec<f64> =
            (0..8).map(|i| std_normal_quantile((i as f64 + 0.5) / 8.0).unwrap()).collect();
        let d8 = ks_statistic_vs_std_normal(&q8).unwrap();
        assert!(d8 <= 1.0 / 16.0 + 1e-12, "{d8}");

        let n = 5000;
        let qn: Vec<f64> = (0..n)
            .map(|i| std_normal_quantile((i as f64 + 0.5) / n as f64).unwrap())
            .collect();
        let dn = ks_statistic_vs_std_normal(&qn).unwrap();
        assert!(dn <= 1e-4 + 1.0 / (2.0 * n as f64), "{dn}");

        // point mass at zero vs the normal CDF
        let zeros = vec![0.0; 64];
        assert!((ks_statistic_vs_std_normal(&zeros).unwrap() - 0.5).abs() < 1e-12);

        assert!(matches!(
            ks_statistic_vs_std_normal(&[0.0; 7]),
            Err(Error::TooFewSamples { need: 8, got: 7 })
        ));
    }

    #[test]
    fn qq_correlation_examples() {
        let n = 200;
        let q: Vec<f64> = (0..n)
            .map(|i| std_normal_quantile((i as f64 + 0.5) / n as f64).unwrap())
            .collect();
        let r = qq_correlation(&q).unwrap();
        assert!((r - 1.0).abs() <= 1e-12, "{r}");

        // negate and reverse: order statistics re-sort to the same set
        let mut neg: Vec<f64> = q.iter().map(|v| -v).collect();
        neg.reverse();
        let r2 = qq_correlation(&neg).unwrap();
        assert!((r2 - 1.0).abs() <= 1e-12, "{r2}");

        assert!(qq_correlation(&[1.0, 2.0]).is_err());
        assert!(qq_correlation(&[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn qq_correlation_high_for_simulated_y() {
        let t = crate::geometry::all_ones_triple(4000).unwrap();
        let noise = NoiseSpec::uniform(0.75).unwrap();
        let samples = &standardized_samples(&t, &noise, &cfg(3000, 41, vec![4000])).unwrap()[0].1;
        let r = qq_correlation(samples).unwrap();
        assert!(r >= 0.998, "qq correlation {r}");
        let ks = ks_statistic_vs_std_normal(samples).unwrap();
        assert!(ks <= 0.03, "ks {ks}");
    }

    #[test]
    fn relative_contrast_noiseless_line() {
        let points = vec![vec![0.0], vec![1.0], vec![2.0]];
        let out = relative_contrast_samples(&points, None, &cfg(3, 1, vec![1])).unwrap();
        assert_eq!(out[0].0, 1);
        for rc in &out[0].1 {
            assert!((rc - 1.0).abs() < 1e-12);
        }
        // coincident points with zero noise trip the positive-min guard
        let dup = vec![vec![0.0], vec![0.0], vec![1.0]];
        assert!(relative_contrast_samples(&dup, None, &cfg(2, 1, vec![1])).is_err());
    }

    #[test]
    fn relative_contrast_shrinks_with_dimension_for_decaying_z() {
        let noise = NoiseSpec::uniform(1.25).unwrap();
        let t = power_decay_triple(3.0, 10_000).unwrap();
        let points = vec![t.x().to_vec(), t.y().to_vec(), t.z().to_vec()];
        let out =
            relative_contrast_samples(&points, Some(&noise), &cfg(400, 3, vec![100, 10_000]))
                .unwrap();
        let rc_small = mean(&out[0].1);
        let rc_large = mean(&out[1].1);
        assert!(rc_large < rc_small, "rc {rc_small} -> {rc_large}");
    }

    #[test]
    fn relative_contrast_stays_up_for_all_ones() {
        let noise = NoiseSpec::uniform(1.25).unwrap();
        let t = crate::geometry::all_ones_triple(10_000).unwrap();
        let points = vec![t.x().to_vec(), t.y().to_vec(), t.z().to_vec()];
        let out = relative_contrast_samples(&points, Some(&noise), &cfg(300, 5, vec![10_000]))
            .unwrap();
        assert!(mean(&out[0].1) >= 0.05);
    }

    #[test]
    fn empirical_noise_distance_matches_moment() {
        let noise = NoiseSpec::uniform(1.25).unwrap();
        let c = cfg(2000, 77, vec![1]);
        let d = 10_000;
        let got = empirical_noise_distance(&noise, d, &c);
        let want = noise.expected_noise_sq_distance(d).sqrt();
        assert!((got - want).abs() / want < 0.01, "{got} vs {want}");

        // d = 1 Gaussian: folded-normal mean 2/sqrt(pi)
        let g = NoiseSpec::gaussian(1.0).unwrap();
        let got = empirical_noise_distance(&g, 1, &cfg(200_000, 13, vec![1]));
        let want = 2.0 / std::f64::consts::PI.sqrt();
        assert!((got - want).abs() / want < 0.01, "{got} vs {want}");

        // determinism
        let a = empirical_noise_distance(&noise, 500, &c);
        let b = empirical_noise_distance(&noise, 500, &c);
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_and_serial_runs_agree_bitwise() {
        let t = power_decay_triple(4.0, 600).unwrap();
        let noise = NoiseSpec::gaussian(0.9).unwrap();
        let c = cfg(300, 99, vec![100, 600]);
        let opts =
            TripleSimOptions { collect_y: true, collect_rc: true, collect_noise_dist: true };
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let serial = pool1.install(|| run_triple_sim(&t, &noise, &c, opts)).unwrap();
        let parallel = pool4.install(|| run_triple_sim(&t, &noise, &c, opts)).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn grid_checkpoints_match_standalone_runs() {
        let t = power_decay_triple(5.0, 800).unwrap();
        let noise = NoiseSpec::uniform(1.0).unwrap();
        let grid = simulate_preservation(&t, &noise, &cfg(200, 55, vec![100, 800])).unwrap();
        let alone = simulate_preservation(&t, &noise, &cfg(200, 55, vec![100])).unwrap();
        assert_eq!(grid.records[0], alone.records[0]);
    }
}
