//! Diagnostics for the eigenvector law, asymptotic independence and the tail
//! exponent of the top eigenvalue.

use serde::Serialize;

use super::stats::{ks_two_sample, pearson, quantile};
use super::TrialResult;
use crate::error::{Error, Result};
use crate::linalg::{lambda1, SymMatrix};
use crate::km::sample_nu;
use crate::par::{chunks, try_map_indexed, Workers};
use crate::sampler::{derive_stream, fill_goe, subseed};

/// Fewest conditioned trials accepted by [`eigvec_law_test`].
pub const MIN_CONDITIONED: usize = 50;

/// Fewest trials accepted by [`independence_diag`].
pub const MIN_INDEPENDENCE_TRIALS: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct EigvecLawReport {
    pub m: usize,
    pub cutoff: f64,
    /// Centered-statistic value at the cutoff quantile.
    pub threshold: f64,
    /// Trials strictly above the threshold.
    pub selected: usize,
    /// Two-sample KS distance of the largest squared coordinate.
    pub ks: f64,
    /// Fraction of selected eigenvectors lying in `𝒮_m`.
    pub inside_fraction: f64,
}

fn result_m(results: &[TrialResult]) -> Result<usize> {
    let m = results
        .first()
        .ok_or_else(|| Error::insufficient("no trial results"))?
        .v_sq_sorted
        .len();
    if results.iter().any(|r| r.v_sq_sorted.len() != m) {
        return Err(Error::invalid("trial results mix different minor sizes"));
    }
    Ok(m)
}

/// Compare the largest squared eigenvector coordinate over trials whose
/// centered statistic exceeds the `cutoff` quantile with the same functional
/// under `ν`, drawn from streams keyed by `seed`.
pub fn eigvec_law_test(results: &[TrialResult], cutoff: f64, seed: u64) -> Result<EigvecLawReport> {
    let m = result_m(results)?;
    let centered: Vec<f64> = results.iter().map(|r| r.centered).collect();
    let threshold = quantile(&centered, cutoff)?;
    let selected: Vec<&TrialResult> = results.iter().filter(|r| r.centered > threshold).collect();
    if m == 1 {
        // v* = ±1 and ν is a point mass on the same functional
        return Ok(EigvecLawReport {
            m,
            cutoff,
            threshold,
            selected: selected.len(),
            ks: 0.0,
            inside_fraction: 1.0,
        });
    }
    if selected.len() < MIN_CONDITIONED {
        return Err(Error::insufficient(format!(
            "{} trials above the cutoff, need at least {MIN_CONDITIONED}",
            selected.len()
        )));
    }
    let observed: Vec<f64> = selected.iter().map(|r| r.v_sq_sorted[0]).collect();
    let mut stream = derive_stream(subseed(seed, "eigvec/nu"), 0);
    let reference = (0..selected.len())
        .map(|_| {
            sample_nu(m, &mut stream).map(|x| x.iter().map(|v| v * v).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    let inside = selected
        .iter()
        .filter(|r| {
            let mut acc = 0.0;
            r.v_sq_sorted[..m - 1].iter().enumerate().all(|(k, s)| {
                acc += s;
                acc <= ((k + 1) as f64 / m as f64).sqrt()
            })
        })
        .count();
    Ok(EigvecLawReport {
        m,
        cutoff,
        threshold,
        selected: selected.len(),
        ks: ks_two_sample(&observed, &reference)?,
        inside_fraction: inside as f64 / selected.len() as f64,
    })
}

/// `|corr(centered statistic, largest squared coordinate of v*)|`.
pub fn independence_diag(results: &[TrialResult]) -> Result<f64> {
    result_m(results)?;
    if results.len() < MIN_INDEPENDENCE_TRIALS {
        return Err(Error::insufficient(format!(
            "{} trials, need at least {MIN_INDEPENDENCE_TRIALS}",
            results.len()
        )));
    }
    let x: Vec<f64> = results.iter().map(|r| r.centered).collect();
    let y: Vec<f64> = results.iter().map(|r| r.v_sq_sorted[0]).collect();
    Ok(pearson(&x, &y)?.abs())
}

#[derive(Debug, Clone, Serialize)]
pub struct TailPoint {
    pub x: f64,
    pub hits: u64,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailSlope {
    pub m: usize,
    pub trials: u64,
    /// Slope of `ln P̂(λ₁ > x)` against `x²`.
    pub slope: f64,
    pub intercept: f64,
    /// Delta-method standard error, including the covariance between the
    /// nested exceedance counts.
    pub slope_stderr: f64,
    /// Grid points with at least one exceedance.
    pub points: Vec<TailPoint>,
}

/// Trials per stream in [`tail_slope_diag`].
pub const TAIL_TRIALS_PER_CHUNK: u64 = 1 << 16;

/// Regress `ln P̂(λ₁(G) > x)` on `x²` for `m × m` GOE draws.
pub fn tail_slope_diag(
    m: usize,
    grid: &[f64],
    trials: u64,
    seed: u64,
    workers: Workers,
) -> Result<TailSlope> {
    if m == 0 || trials == 0 {
        return Err(Error::invalid("need m >= 1 and trials >= 1"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("tail grid must be finite and strictly increasing"));
    }
    let parts = chunks(trials, TAIL_TRIALS_PER_CHUNK);
    let seed = subseed(seed, "tail-slope");
    let per_chunk = try_map_indexed(parts.len(), workers, |c| -> Result<Vec<u64>> {
        let mut stream = derive_stream(seed, c as u64);
        let mut g = SymMatrix::zeros(m)?;
        let mut hits = vec![0u64; grid.len()];
        for _ in 0..parts[c].1 {
            fill_goe(&mut g, &mut stream);
            let l = lambda1(&g)?;
            // grid is increasing, so exceedances form a prefix
            let k = grid.partition_point(|&x| x < l);
            for h in &mut hits[..k] {
                *h += 1;
            }
        }
        Ok(hits)
    })?;
    let mut hits = vec![0u64; grid.len()];
    for h in per_chunk {
        for (a, b) in hits.iter_mut().zip(h) {
            *a += b;
        }
    }
    let points: Vec<TailPoint> = grid
        .iter()
        .zip(&hits)
        .filter(|(_, &h)| h > 0)
        .map(|(&x, &h)| TailPoint {
            x,
            hits: h,
            p: h as f64 / trials as f64,
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::insufficient(format!(
            "only {} grid points have exceedances, need 3",
            points.len()
        )));
    }

    let xs: Vec<f64> = points.iter().map(|p| p.x * p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.p.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let w: Vec<f64> = xs.iter().map(|x| (x - mx) / sxx).collect();
    let slope: f64 = w.iter().zip(&ys).map(|(wi, yi)| wi * yi).sum();
    let intercept = my - slope * mx;

    // Cov(ln p̂_i, ln p̂_j) ≈ (1 − p_i) / (N p_i) for x_i ≤ x_j.
    let n = trials as f64;
    let mut var = 0.0;
    for i in 0..points.len() {
        for j in 0..points.len() {
            let lo = points[i.min(j)].p;
            var += w[i] * w[j] * (1.0 - lo) / (n * lo);
        }
    }
    Ok(TailSlope {
        m,
        trials,
        slope,
        intercept,
        slope_stderr: var.sqrt(),
        points,
    })
}
