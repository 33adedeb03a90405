//! Ground-truth geometry of a query triple `(x, y, z)`: the squared
//! distances and cross inner product feeding the preservation statistic, the
//! statistic itself, and the power-decay sequence family used to dial signal
//! growth rates in the experiments.

use crate::error::{Error, Result};
use crate::noise::{phi, NoiseSpec};
use crate::stats::KahanSum;

/// A query point `x` and two candidate neighbors `y`, `z`, all of the same
/// dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSignal {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
}

impl TripleSignal {
    pub fn new(x: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::invalid("triple vectors must be nonempty"));
        }
        if x.len() != y.len() || x.len() != z.len() {
            return Err(Error::DimensionMismatch(format!(
                "triple vectors of lengths {}, {}, {}",
                x.len(),
                y.len(),
                z.len()
            )));
        }
        for (name, v) in [("x", &x), ("y", &y), ("z", &z)] {
            if let Some(i) = v.iter().position(|c| !c.is_finite()) {
                return Err(Error::NonFinite(format!("coordinate {i} of {name}")));
            }
        }
        Ok(Self { x, y, z })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Swaps the two candidate neighbors.
    pub fn swapped(&self) -> Self {
        Self { x: self.x.clone(), y: self.z.clone(), z: self.y.clone() }
    }
}

/// All ground-truth quantities of a triple that the preservation statistic
/// consumes, computed with compensated summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleStats {
    d: usize,
    dist_xy_sq: f64,
    dist_xz_sq: f64,
    cross_inner: f64,
    delta_inf: f64,
    delta_two: f64,
}

impl TripleStats {
    /// Stats over the full dimension of the triple.
    pub fn from_triple(triple: &TripleSignal) -> Self {
        Self::from_prefix(triple, triple.dim()).expect("full prefix is always valid")
    }

    /// Stats over the first `d` coordinates; `d` ranges over the evaluation
    /// grid when a triple is probed at several dimensions.
    pub fn from_prefix(triple: &TripleSignal, d: usize) -> Result<Self> {
        if d == 0 || d > triple.dim() {
            return Err(Error::invalid(format!(
                "prefix dimension {d} outside 1..={}",
                triple.dim()
            )));
        }
        let mut xy = KahanSum::new();
        let mut xz = KahanSum::new();
        let mut cross = KahanSum::new();
        let mut delta_inf: f64 = 0.0;
        for i in 0..d {
            let dxy = triple.x[i] - triple.y[i];
            let dxz = triple.x[i] - triple.z[i];
            xy.add(dxy * dxy);
            xz.add(dxz * dxz);
            cross.add(dxy * dxz);
            delta_inf = delta_inf.max(dxy.abs()).max(dxz.abs());
        }
        let dist_xy_sq = xy.value();
        let dist_xz_sq = xz.value();
        Ok(Self {
            d,
            dist_xy_sq,
            dist_xz_sq,
            cross_inner: cross.value(),
            delta_inf,
            delta_two: dist_xy_sq.max(dist_xz_sq).sqrt(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `||x - y||^2`
    pub fn dist_xy_sq(&self) -> f64 {
        self.dist_xy_sq
    }

    /// `||x - z||^2`
    pub fn dist_xz_sq(&self) -> f64 {
        self.dist_xz_sq
    }

    /// `<x - y, x - z>`
    pub fn cross_inner(&self) -> f64 {
        self.cross_inner
    }

    /// Max coordinate gap over both pairs.
    pub fn delta_inf(&self) -> f64 {
        self.delta_inf
    }

    /// Max of the two Euclidean distances.
    pub fn delta_two(&self) -> f64 {
        self.delta_two
    }

    /// Mean of the squared-distance difference between the two noisy pairs:
    /// `||x - y||^2 - ||x - z||^2`.
    pub fn gap_mean(&self) -> f64 {
        self.dist_xy_sq - self.dist_xz_sq
    }

    /// Variance of the squared-distance difference under the given noise:
    /// `2 d (mu4 + 3 sigma^4) + 8 sigma^2 (||x-y||^2 + ||x-z||^2 - <x-y, x-z>)`.
    pub fn gap_variance(&self, noise: &NoiseSpec) -> f64 {
        2.0 * self.d as f64 * noise.noise_floor()
            + 8.0 * noise.variance() * (self.dist_xy_sq + self.dist_xz_sq - self.cross_inner)
    }
}

/// The standardized discrimination statistic
/// `(||x-z||^2 - ||x-y||^2) / sqrt(gap variance)`.
pub fn zeta(stats: &TripleStats, noise: &NoiseSpec) -> Result<f64> {
    let var = stats.gap_variance(noise);
    if var <= 0.0 {
        return Err(Error::domain(format!(
            "nonpositive variance {var} in the standardized statistic"
        )));
    }
    Ok((stats.dist_xz_sq - stats.dist_xy_sq) / var.sqrt())
}

/// Predicted probability that the noisy `x` stays at least as close to the
/// noisy `y` as to the noisy `z`. Saturates cleanly at 0 and 1 for extreme
/// statistics.
pub fn predicted_preservation_prob(stats: &TripleStats, noise: &NoiseSpec) -> Result<f64> {
    Ok(phi(zeta(stats, noise)?).clamp(0.0, 1.0))
}

/// How the squared norm of a hyperharmonic prefix is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormSqMode {
    /// Compensated summation of the series.
    Exact,
    /// Closed form `(alpha/(alpha-2)) (d^(1-2/alpha) - 1)`; `d` itself for
    /// the all-ones sequence.
    Approx,
}

/// Growth parameter for the sequence `z_k = k^(-1/alpha)`, strictly above
/// the boundary: `alpha > 2`, with `alpha = inf` giving the all-ones
/// sequence. The boundary case `alpha = 2` is rejected here because the
/// closed-form norm diverges; experiment sweeps that include it construct
/// the raw sequence through [`power_decay_sequence`] instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperharmonicSpec {
    alpha: f64,
}

impl HyperharmonicSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha <= 2.0 {
            return Err(Error::invalid(format!(
                "hyperharmonic growth parameter must satisfy alpha > 2, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn infinite() -> Self {
        Self { alpha: f64::INFINITY }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// First `d` entries of the sequence: `k^(-1/alpha)`, all ones for
    /// `alpha = inf`.
    pub fn sequence(&self, d: usize) -> Vec<f64> {
        power_decay_entries(self.alpha, d)
    }

    /// Squared norm of the `d`-prefix.
    pub fn norm_sq(&self, d: usize, mode: NormSqMode) -> f64 {
        match mode {
            NormSqMode::Exact => power_decay_norm_sq(self.alpha, d),
            NormSqMode::Approx => {
                if self.alpha.is_infinite() {
                    d as f64
                } else {
                    let a = self.alpha;
                    (a / (a - 2.0)) * ((d as f64).powf(1.0 - 2.0 / a) - 1.0)
                }
            }
        }
    }

    /// Limit, as the dimension grows, of the probability that the noisy `x`
    /// stays closer to `y` than to `z(alpha)` when `x = y = 0`: 1/2 below
    /// the critical rate, 1 above it, and a noise-dependent intermediate
    /// value exactly at `alpha = 4`.
    pub fn limiting_probability(&self, noise: &NoiseSpec) -> f64 {
        if self.alpha < 4.0 {
            0.5
        } else if self.alpha > 4.0 {
            1.0
        } else {
            phi((2.0 / noise.noise_floor()).sqrt())
        }
    }
}

fn power_decay_entries(alpha: f64, d: usize) -> Vec<f64> {
    if alpha.is_infinite() {
        return vec![1.0; d];
    }
    (1..=d).map(|k| (k as f64).powf(-1.0 / alpha)).collect()
}

fn power_decay_norm_sq(alpha: f64, d: usize) -> f64 {
    if alpha.is_infinite() {
        return d as f64;
    }
    let mut sum = KahanSum::new();
    for k in 1..=d {
        sum.add((k as f64).powf(-2.0 / alpha));
    }
    sum.value()
}

/// Raw sequence `z_k = k^(-1/alpha)` for `alpha >= 2` (infinity allowed).
///
/// This is the experiment-sweep entry point: it admits the boundary rate
/// `alpha = 2`, which has a perfectly well-defined sequence even though its
/// squared norm grows only logarithmically.
pub fn power_decay_sequence(alpha: f64, d: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::invalid("sequence length must be at least 1"));
    }
    if alpha.is_nan() || alpha < 2.0 {
        return Err(Error::invalid(format!(
            "power-decay sweep parameter must satisfy alpha >= 2, got {alpha}"
        )));
    }
    Ok(power_decay_entries(alpha, d))
}

/// Triple with `x = y = 0` and `z` the power-decay sequence; the workhorse
/// of the growth-rate sweeps.
pub fn power_decay_triple(alpha: f64, d: usize) -> Result<TripleSignal> {
    let z = power_decay_sequence(alpha, d)?;
    TripleSignal::new(vec![0.0; d], vec![0.0; d], z)
}

/// `x = y = 0`, `z = e_1`: both the Euclidean and the max-coordinate gap
/// stay bounded as the dimension grows.
pub fn unit_spike_triple(d: usize) -> Result<TripleSignal> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let mut z = vec![0.0; d];
    z[0] = 1.0;
    TripleSignal::new(vec![0.0; d], vec![0.0; d], z)
}

/// `x = y = 0`, `z = (1, 1, ...)`: Euclidean gap unbounded, coordinate gap
/// bounded.
pub fn all_ones_triple(d: usize) -> Result<TripleSignal> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    TripleSignal::new(vec![0.0; d], vec![0.0; d], vec![1.0; d])
}

/// `x = y = 0`, `z_k = k^(1/4 - 0.01)`: both gaps unbounded, growing just
/// below the rate where coordinate growth would break the normal limit.
pub fn slow_power_triple(d: usize) -> Result<TripleSignal> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let z = (1..=d).map(|k| (k as f64).powf(0.25 - 0.01)).collect();
    TripleSignal::new(vec![0.0; d], vec![0.0; d], z)
}
