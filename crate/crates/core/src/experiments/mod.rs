//! Monte Carlo trials of `(T_{m,n}, v*)` and the analyses run on them.

pub mod diag;
pub mod persist;
pub mod stats;

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::centered_statistic;
use crate::par::{try_map_indexed, Workers};
use crate::sampler::{derive_stream, sample_goe, sample_goe_diag};
use crate::scan::scan_max;

pub use diag::{eigvec_law_test, independence_diag, tail_slope_diag, EigvecLawReport, TailSlope};
pub use persist::{load, persist, Sidecar};
pub use stats::{ecdf, fit_c, ks_distance, ks_two_sample, pearson, Ecdf};

/// One simulated GOE matrix reduced to its extreme minor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub t: f64,
    /// `T² − 4m ln n − 2(m − 2) ln ln n`.
    pub centered: f64,
    pub alpha_star: Vec<usize>,
    /// Squared coordinates of `v*`, descending.
    pub v_sq_sorted: Vec<f64>,
    /// Seconds spent on the trial; `0` unless timings were requested.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n: u64,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub y_grid: Vec<f64>,
    #[serde(serialize_with = "ser_workers")]
    pub workers: Workers,
    pub out: Option<PathBuf>,
    /// Measure per-trial wall time. Timings make output non-reproducible.
    pub record_timings: bool,
}

fn ser_workers<S: serde::Serializer>(w: &Workers, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(w.0 as u64)
}

impl ExperimentConfig {
    pub fn new(n: u64, m: usize, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            n,
            m,
            trials,
            seed,
            y_grid: Vec::new(),
            workers: Workers::default(),
            out: None,
            record_timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::invalid(format!("n must be at least 3, got {}", self.n)));
        }
        if self.m == 0 || self.m as u64 > self.n {
            return Err(Error::invalid(format!(
                "m must satisfy 1 <= m <= n, got m={}, n={}",
                self.m, self.n
            )));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.m > 1 && self.n > 50_000 {
            return Err(Error::invalid(format!(
                "n = {} is too large for a dense GOE draw with m > 1",
                self.n
            )));
        }
        Ok(())
    }
}

/// Run one trial: sample with stream `index`, scan, and summarize.
pub fn run_trial(cfg: &ExperimentConfig, index: u64) -> Result<TrialResult> {
    let start = cfg.record_timings.then(Instant::now);
    let mut stream = derive_stream(cfg.seed, index);
    let n = cfg.n as usize;
    let (t, alpha_star, v_star) = if cfg.m == 1 {
        // T is the largest diagonal entry; only the diagonal is drawn, which
        // matches the diagonal of the full draw on the same stream.
        let diag = sample_goe_diag(n, &mut stream);
        let (mut arg, mut best) = (0, f64::NEG_INFINITY);
        for (i, &d) in diag.iter().enumerate() {
            if d > best {
                best = d;
                arg = i;
            }
        }
        (best, vec![arg], vec![1.0])
    } else {
        let g = sample_goe(n, &mut stream);
        let r = scan_max(&g, cfg.m, true)?;
        (r.t, r.argmax, r.v_star)
    };
    let mut v_sq_sorted: Vec<f64> = v_star.iter().map(|v| v * v).collect();
    v_sq_sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let centered = centered_statistic(t, cfg.n, cfg.m)?;
    if !t.is_finite() || !centered.is_finite() || v_sq_sorted.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical("non-finite value in trial output"));
    }
    Ok(TrialResult {
        trial: index,
        t,
        centered,
        alpha_star,
        v_sq_sorted,
        wall_time: start.map_or(0.0, |s| s.elapsed().as_secs_f64()),
    })
}

/// All trials of `cfg`, ordered by trial index. Trial `i` uses stream `i`.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    cfg.validate()?;
    let trials = usize::try_from(cfg.trials).map_err(|_| Error::invalid("too many trials"))?;
    try_map_indexed(trials, cfg.workers, |i| {
        run_trial(cfg, i as u64).map_err(|e| Error::Trial {
            trial: i as u64,
            source: Box::new(e),
        })
    })
}

/// The centered statistics of a result set.
pub fn centered_column(results: &[TrialResult]) -> Vec<f64> {
    results.iter().map(|r| r.centered).collect()
}
