//! Dense row-major point set: `n` points, each a vector of `d` reals.

use crate::error::{Error, Result};
use crate::stats::KahanSum;

/// A ground-truth point set. Rows are points; rectangular and finite by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: Vec<Vec<f64>>,
}

impl DataMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::invalid(format!(
                "a point set needs at least 2 rows, got {}",
                rows.len()
            )));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::invalid("rows must have at least one column"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} columns, expected {d}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("entry ({i}, {j})")));
            }
        }
        Ok(Self { rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<f64>> {
        self.rows
    }

    /// Squared Euclidean distance between rows `i` and `j`.
    pub fn dist_sq(&self, i: usize, j: usize) -> f64 {
        let mut acc = KahanSum::new();
        for (a, b) in self.rows[i].iter().zip(&self.rows[j]) {
            let diff = a - b;
            acc.add(diff * diff);
        }
        acc.value()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist_sq(i, j).sqrt()
    }

    /// Full pairwise distance matrix (symmetric, zero diagonal).
    pub fn pairwise_distances(&self) -> Vec<Vec<f64>> {
        let n = self.n_rows();
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = self.dist(i, j);
                out[i][j] = dist;
                out[j][i] = dist;
            }
        }
        out
    }

    /// The same points embedded in `d >= n_cols` dimensions by appending
    /// zero coordinates; pairwise geometry is untouched.
    pub fn zero_padded(&self, d: usize) -> Result<Self> {
        if d < self.n_cols() {
            return Err(Error::invalid(format!(
                "cannot pad {} columns down to {d}",
                self.n_cols()
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut padded = row.clone();
                padded.resize(d, 0.0);
                padded
            })
            .collect();
        Ok(Self { rows })
    }
}
