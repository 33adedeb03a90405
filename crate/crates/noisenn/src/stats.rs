//! Small statistics utilities shared across the crate: compensated
//! summation, moments, Pearson correlation, rank transforms and the Wilson
//! score interval.

use crate::error::{Error, Result};

/// Neumaier-compensated accumulator. Squared-distance sums over `d = 10^4`
/// coordinates and long p-series both go through this instead of a bare
/// `f64` fold.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn sum_iter<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc.value()
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    KahanSum::sum_iter(xs.iter().copied()) / xs.len() as f64
}

/// Unbiased sample variance (n − 1 denominator).
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    KahanSum::sum_iter(xs.iter().map(|x| (x - m) * (x - m))) / (xs.len() - 1) as f64
}

/// Standard error of the mean.
pub fn standard_error(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    (sample_variance(xs) / xs.len() as f64).sqrt()
}

/// Sample skewness g1 = m3 / m2^(3/2).
pub fn sample_skewness(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = mean(xs);
    let m2 = KahanSum::sum_iter(xs.iter().map(|x| (x - m).powi(2))) / n;
    let m3 = KahanSum::sum_iter(xs.iter().map(|x| (x - m).powi(3))) / n;
    if m2 <= 0.0 {
        return 0.0;
    }
    m3 / m2.powf(1.5)
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch(format!(
            "pearson inputs of length {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::TooFewSamples { need: 3, got: xs.len() });
    }
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = KahanSum::new();
    let mut sxx = KahanSum::new();
    let mut syy = KahanSum::new();
    for (x, y) in xs.iter().zip(ys) {
        sxy.add((x - mx) * (y - my));
        sxx.add((x - mx) * (x - mx));
        syy.add((y - my) * (y - my));
    }
    let denom = sxx.value() * syy.value();
    if denom <= 0.0 {
        return Err(Error::degenerate("zero-variance input to correlation"));
    }
    Ok(sxy.value() / denom.sqrt())
}

/// Ranks with ties assigned the average rank, 1-based.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("finite values").then(a.cmp(&b)));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // average of ranks i+1 ..= j+1
        let r = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Half-width of the 95% Wilson score interval for a binomial proportion.
///
/// Chosen over Wald for sane behavior when `p_hat` saturates at 0 or 1.
pub fn wilson_half_width(p_hat: f64, n: usize) -> f64 {
    const Z: f64 = 1.96;
    if n == 0 {
        return 0.5;
    }
    let nf = n as f64;
    let z2 = Z * Z;
    Z * (p_hat * (1.0 - p_hat) / nf + z2 / (4.0 * nf * nf)).sqrt() / (1.0 + z2 / nf)
}

/// Median of a slice (averaging the middle pair for even lengths).
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty(), "median of empty slice");
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Ordinary least squares slope of `ys` on `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "ols inputs of length {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = KahanSum::new();
    let mut sxx = KahanSum::new();
    for (x, y) in xs.iter().zip(ys) {
        sxy.add((x - mx) * (y - my));
        sxx.add((x - mx) * (x - mx));
    }
    if sxx.value() <= 0.0 {
        return Err(Error::degenerate("zero-variance abscissa in OLS fit"));
    }
    Ok(sxy.value() / sxx.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_cancelled_tail() {
        let mut s = KahanSum::new();
        s.add(1e16);
        for _ in 0..10 {
            s.add(0.1);
        }
        s.add(-1e16);
        assert!((s.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_and_variance() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(mean(&xs), 3.0);
        assert!((sample_variance(&xs) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn ranks_average_ties() {
        let r = average_ranks(&[10.0, 20.0, 20.0, 30.0]);
        assert_eq!(r, vec![1.0, 2.5, 2.5, 4.0]);
    }

    #[test]
    fn wilson_widths() {
        // p = 0.5, n = 5000: classic ~0.0139 at the 95% level.
        let hw = wilson_half_width(0.5, 5000);
        assert!((hw - 0.01385).abs() < 2e-4, "{hw}");
        // never negative, sane at the boundary
        assert!(wilson_half_width(0.0, 100) > 0.0);
        assert!(wilson_half_width(1.0, 100) > 0.0);
    }

    #[test]
    fn ols_exact_line() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [2.0, 4.0, 6.0];
        assert!((ols_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn pearson_rejects_flat_input() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::Degenerate(_))
        ));
    }
}
