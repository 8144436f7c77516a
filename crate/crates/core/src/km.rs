//! Monte Carlo for `K_m = μ(𝒮_m)` and rejection sampling from `ν`, the
//! uniform law on `𝒮_m`.
//!
//! `𝒮_m` is the set of unit vectors whose squared coordinates over every
//! proper subset `β` of size `k` sum to at most `√(k/m)`. The binding subset
//! of size `k` is always the `k` largest squared coordinates, so membership
//! reduces to `m − 1` prefix-sum checks after one sort.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{chunks, map_indexed, Workers};
use crate::sampler::{derive_stream, fill_uniform_sphere, RngStream};

/// Samples handled by one stream in the chunked estimators.
pub const SAMPLES_PER_CHUNK: u64 = 1 << 16;

/// Attempts allowed before `sample_nu` gives up.
pub const NU_REJECTION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmEstimate {
    pub m: usize,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl KmEstimate {
    fn from_counts(m: usize, samples: u64, hits: u64) -> Self {
        let p = hits as f64 / samples as f64;
        KmEstimate {
            m,
            samples,
            hits,
            estimate: p,
            stderr: (p * (1.0 - p) / samples as f64).sqrt(),
        }
    }
}

/// Membership in `𝒮_m` for a unit vector. Boundary ties count as inside.
pub fn in_s_m(x: &[f64]) -> Result<bool> {
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    if x.is_empty() || (norm_sq.sqrt() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "expected a unit vector, got norm {}",
            norm_sq.sqrt()
        )));
    }
    let mut sq = Vec::with_capacity(x.len());
    Ok(in_s_m_prefix(x, &mut sq))
}

fn in_s_m_prefix(x: &[f64], sq: &mut Vec<f64>) -> bool {
    let m = x.len();
    sq.clear();
    sq.extend(x.iter().map(|v| v * v));
    sq.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    for (k, s) in sq.iter().enumerate().take(m - 1) {
        acc += s;
        if acc > ((k + 1) as f64 / m as f64).sqrt() {
            return false;
        }
    }
    true
}

fn count_hits(m: usize, samples: u64, stream: &mut RngStream) -> u64 {
    let mut x = vec![0.0; m];
    let mut sq = Vec::with_capacity(m);
    let mut hits = 0;
    for _ in 0..samples {
        fill_uniform_sphere(&mut x, stream);
        if in_s_m_prefix(&x, &mut sq) {
            hits += 1;
        }
    }
    hits
}

/// Estimate `K_m` from `samples` uniform draws on `S^{m−1}` taken from `stream`.
pub fn estimate_km(m: usize, samples: u64, stream: &mut RngStream) -> Result<KmEstimate> {
    check(m, samples)?;
    Ok(KmEstimate::from_counts(m, samples, count_hits(m, samples, stream)))
}

/// Chunked variant: chunk `c` of [`SAMPLES_PER_CHUNK`] draws uses stream `c`
/// under `seed`, so the estimate depends only on `(m, samples, seed)`.
pub fn estimate_km_seeded(m: usize, samples: u64, seed: u64, workers: Workers) -> Result<KmEstimate> {
    check(m, samples)?;
    let parts = chunks(samples, SAMPLES_PER_CHUNK);
    let hits: u64 = map_indexed(parts.len(), workers, |c| {
        let (_, len) = parts[c];
        count_hits(m, len, &mut derive_stream(seed, c as u64))
    })
    .into_iter()
    .sum();
    Ok(KmEstimate::from_counts(m, samples, hits))
}

fn check(m: usize, samples: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    Ok(())
}

/// Draw from `ν` by rejection from the uniform law on the sphere.
pub fn sample_nu(m: usize, stream: &mut RngStream) -> Result<Vec<f64>> {
    Ok(sample_nu_counted(m, stream)?.0)
}

/// As [`sample_nu`], also returning the number of attempts used.
pub fn sample_nu_counted(m: usize, stream: &mut RngStream) -> Result<(Vec<f64>, usize)> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let mut x = vec![0.0; m];
    let mut sq = Vec::with_capacity(m);
    for attempt in 1..=NU_REJECTION_CAP {
        fill_uniform_sphere(&mut x, stream);
        if in_s_m_prefix(&x, &mut sq) {
            return Ok((x, attempt));
        }
    }
    Err(Error::numerical(format!(
        "no point of S_{m} accepted in {NU_REJECTION_CAP} attempts"
    )))
}
