//! Dense symmetric eigen-extraction by shifted power iteration with
//! deflation. Matrices here are desk-scale (a few hundred rows), so clarity
//! and determinism win over sparse tricks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::noise::NoiseSpec;

const ANGLE_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 10_000;

pub(crate) fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn rayleigh(a: &[Vec<f64>], v: &[f64]) -> f64 {
    dot(&mat_vec(a, v), v)
}

/// Largest-eigenvalue shift: the infinity norm bounds the spectral radius,
/// so `A + shift I` is positive definite (strictly, thanks to the margin)
/// and power iteration converges to the algebraically largest eigenvalue
/// of `A` even when the bottom of the spectrum touches the bound.
fn spectral_shift(a: &[Vec<f64>]) -> f64 {
    let norm_inf = a
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    norm_inf * 1.125
}

/// Top `count` eigenpairs of a symmetric matrix, algebraically largest
/// first. Fails with a degeneracy error if the iteration does not settle
/// within the iteration cap.
pub(crate) fn top_eigenpairs(a: &[Vec<f64>], count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = a.len();
    assert!(count <= n, "cannot extract more eigenpairs than the dimension");
    let shift = spectral_shift(a);
    if shift == 0.0 {
        // zero matrix: canonical basis, all eigenvalues zero
        return Ok((0..count)
            .map(|k| {
                let mut v = vec![0.0; n];
                v[k] = 1.0;
                (0.0, v)
            })
            .collect());
    }

    let mut found: Vec<(f64, Vec<f64>)> = Vec::with_capacity(count);
    let gauss = NoiseSpec::gaussian(1.0).expect("unit gaussian");
    let mut rng = ChaCha8Rng::seed_from_u64(0x0eed_f00d);
    for _ in 0..count {
        let mut v: Vec<f64> = (0..n).map(|_| gauss.draw(&mut rng)).collect();
        orthogonalize(&mut v, &found);
        normalize(&mut v)?;
        let mut converged = false;
        for _ in 0..MAX_ITERATIONS {
            let mut next = mat_vec(a, &v);
            for (ni, vi) in next.iter_mut().zip(&v) {
                *ni += shift * vi;
            }
            orthogonalize(&mut next, &found);
            normalize(&mut next)?;
            let flip = if dot(&next, &v) < 0.0 { -1.0 } else { 1.0 };
            let drift: f64 = next
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - flip * b) * (a - flip * b))
                .sum::<f64>()
                .sqrt();
            v = next;
            if drift < ANGLE_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::degenerate(
                "power iteration did not converge; leading eigenvalues are tied",
            ));
        }
        let lambda = rayleigh(a, &v);
        found.push((lambda, v));
    }
    Ok(found)
}

fn orthogonalize(v: &mut [f64], basis: &[(f64, Vec<f64>)]) {
    for (_, b) in basis {
        let proj = dot(v, b);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= proj * bi;
        }
    }
}

fn normalize(v: &mut [f64]) -> Result<()> {
    let len = norm(v);
    if len < 1e-300 {
        return Err(Error::degenerate("iterate collapsed to the zero vector"));
    }
    for vi in v.iter_mut() {
        *vi /= len;
    }
    Ok(())
}

/// Relative tie test for two leading eigenvalues.
pub(crate) fn eigenvalues_tied(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs());
    scale > 0.0 && (a - b).abs() < 1e-12 * scale
}
