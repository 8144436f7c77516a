//! Poisson approximation for the number of minors whose events `A_α` occur.
//!
//! The events are exchangeable over `α`, and two events are independent
//! whenever their index sets are disjoint (they depend on disjoint sets of
//! matrix entries). The dependency neighbourhood of `α` is therefore every
//! `β` with `α ∩ β ≠ ∅`, and the third Chen–Stein term vanishes. The bounds
//! need only `p = P(A_α)` and the overlap moments `q_k = E[X_α X_β]` for
//! `|α ∩ β| = k`, which are estimated by direct simulation of one `m × m`
//! minor and of two minors sharing `k` indices inside a `(2m − k)`-GOE.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::expected_count;
use crate::par::{chunks, try_map_indexed, Workers};
use crate::sampler::{derive_stream, fill_goe, subseed};
use crate::scan::{binomial, count_events, event_a, event_a_whole, make_thresholds, Thresholds};
use crate::linalg::SymMatrix;

/// Trials handled by one stream in the moment estimators.
pub const TRIALS_PER_CHUNK: u64 = 1 << 16;

/// Minimum `trials · p̂` accepted by [`run_chen_stein`].
pub const MIN_EXPECTED_HITS: u64 = 100;

/// Exchangeable Bernoulli system over the `m`-subsets of `n` indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependencyModel {
    pub n: u64,
    pub m: usize,
    pub p: f64,
    /// `q[k - 1] = E[X_α X_β]` for `|α ∩ β| = k`, `1 ≤ k < m`.
    pub q: Vec<f64>,
}

impl DependencyModel {
    pub fn new(n: u64, m: usize, p: f64, q: Vec<f64>) -> Result<Self> {
        let model = DependencyModel { n, m, p, q };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::invalid("m must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::invalid(format!("p must lie in [0, 1], got {}", self.p)));
        }
        if self.q.len() != self.m - 1 {
            return Err(Error::invalid(format!(
                "expected {} overlap moments, got {}",
                self.m - 1,
                self.q.len()
            )));
        }
        for (k, &q) in self.q.iter().enumerate() {
            if !(q.is_finite() && q >= 0.0 && q <= self.p) {
                return Err(Error::invalid(format!(
                    "q_{} = {q} must lie in [0, p = {}]",
                    k + 1,
                    self.p
                )));
            }
        }
        Ok(())
    }

    /// Number of subsets, `C(n, m)`.
    pub fn subsets(&self) -> f64 {
        binomial(self.n, self.m as u64)
    }

    /// `|N_α| = C(n, m) − C(n − m, m)`, including `α` itself.
    pub fn neighbourhood(&self) -> f64 {
        let disjoint = self
            .n
            .checked_sub(self.m as u64)
            .map_or(0.0, |r| binomial(r, self.m as u64));
        self.subsets() - disjoint
    }

    /// Ordered pairs `(α, β)` with `|α ∩ β| = k`: `C(n, m) C(m, k) C(n − m, m − k)`.
    pub fn overlap_pairs(&self, k: usize) -> f64 {
        let rest = self.n.checked_sub(self.m as u64);
        self.subsets()
            * binomial(self.m as u64, k as u64)
            * rest.map_or(0.0, |r| binomial(r, (self.m - k) as u64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonBounds {
    pub lambda: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    /// `2(b1 + b2 + b3)`.
    pub tv_bound: f64,
    /// `min(1, 1/λ)(b1 + b2 + b3)`, bounding `|P(S = 0) − e^{−λ}|`.
    pub void_bound: f64,
}

pub fn poisson_bounds(model: &DependencyModel) -> Result<PoissonBounds> {
    model.validate()?;
    let lambda = model.subsets() * model.p;
    let b1 = model.subsets() * model.neighbourhood() * model.p * model.p;
    let b2: f64 = (1..model.m)
        .map(|k| model.overlap_pairs(k) * model.q[k - 1])
        .sum();
    let b3 = 0.0;
    let total = b1 + b2 + b3;
    Ok(PoissonBounds {
        lambda,
        b1,
        b2,
        b3,
        tv_bound: 2.0 * total,
        void_bound: void_factor(lambda) * total,
    })
}

fn void_factor(lambda: f64) -> f64 {
    if lambda > 1.0 {
        1.0 / lambda
    } else {
        1.0
    }
}

/// `t_n = C(n, m) · p`.
pub fn t_n_value(n: u64, m: usize, p: f64) -> f64 {
    expected_count(n, m, p)
}

/// A Monte Carlo frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frequency {
    pub hits: u64,
    pub trials: u64,
    pub value: f64,
    pub stderr: f64,
}

impl Frequency {
    pub fn new(hits: u64, trials: u64) -> Self {
        let value = hits as f64 / trials as f64;
        Frequency {
            hits,
            trials,
            value,
            stderr: (value * (1.0 - value) / trials as f64).sqrt(),
        }
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    Ok(())
}

/// Frequency of `A_α` for a single `m × m` GOE minor.
pub fn estimate_p(th: &Thresholds, trials: u64, seed: u64, workers: Workers) -> Result<Frequency> {
    check_trials(trials)?;
    let parts = chunks(trials, TRIALS_PER_CHUNK);
    let seed = subseed(seed, "chen-stein/p");
    let hits = try_map_indexed(parts.len(), workers, |c| -> Result<u64> {
        let mut stream = derive_stream(seed, c as u64);
        let mut g = SymMatrix::zeros(th.m)?;
        let mut hits = 0;
        for _ in 0..parts[c].1 {
            fill_goe(&mut g, &mut stream);
            if event_a_whole(&g, th)? {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(Frequency::new(hits.into_iter().sum(), trials))
}

/// Frequency of `A_α ∩ A_ζ` with `α = {0..m}`, `ζ = {m−k..2m−k}` inside one
/// `(2m − k)`-GOE, so `|α ∩ ζ| = k`.
pub fn estimate_q(
    th: &Thresholds,
    k: usize,
    trials: u64,
    seed: u64,
    workers: Workers,
) -> Result<Frequency> {
    check_trials(trials)?;
    let m = th.m;
    if k == 0 || k >= m {
        return Err(Error::invalid(format!("overlap k must satisfy 1 <= k < m, got k={k}, m={m}")));
    }
    let dim = 2 * m - k;
    let alpha: Vec<usize> = (0..m).collect();
    let zeta: Vec<usize> = (m - k..dim).collect();
    let parts = chunks(trials, TRIALS_PER_CHUNK);
    let seed = subseed(seed, &format!("chen-stein/q{k}"));
    let hits = try_map_indexed(parts.len(), workers, |c| -> Result<u64> {
        let mut stream = derive_stream(seed, c as u64);
        let mut w = SymMatrix::zeros(dim)?;
        let mut hits = 0;
        for _ in 0..parts[c].1 {
            fill_goe(&mut w, &mut stream);
            if event_a(&w, &alpha, th)? && event_a(&w, &zeta, th)? {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(Frequency::new(hits.into_iter().sum(), trials))
}

/// Frequency of `S = 0` over full `n × n` GOE draws; trial `i` uses stream `i`.
pub fn simulate_void(th: &Thresholds, trials: u64, seed: u64, workers: Workers) -> Result<Frequency> {
    check_trials(trials)?;
    let n = usize::try_from(th.n).map_err(|_| Error::invalid("n too large"))?;
    let seed = subseed(seed, "chen-stein/void");
    let parts = chunks(trials, 256);
    let zeros = try_map_indexed(parts.len(), workers, |c| -> Result<u64> {
        let (start, len) = parts[c];
        let mut g = SymMatrix::zeros(n)?;
        let mut zeros = 0;
        for t in start..start + len {
            fill_goe(&mut g, &mut derive_stream(seed, t));
            if count_events(&g, th.m, th)? == 0 {
                zeros += 1;
            }
        }
        Ok(zeros)
    })?;
    Ok(Frequency::new(zeros.into_iter().sum(), trials))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChenSteinReport {
    pub n: u64,
    pub m: usize,
    pub y: f64,
    pub moment_trials: u64,
    pub void_trials: u64,
    pub p: f64,
    pub p_stderr: f64,
    pub p_hits: u64,
    pub q: Vec<f64>,
    pub q_stderr: Vec<f64>,
    pub q_hits: Vec<u64>,
    pub lambda: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub tv_bound: f64,
    pub void_bound: f64,
    pub p_s0_simulated: f64,
    pub p_s0_stderr: f64,
    pub poisson_s0: f64,
    /// `|P̂(S = 0) − e^{−λ̂}|`.
    pub void_gap: f64,
    /// Monte Carlo standard error of `void_gap − void_bound`, propagated from
    /// every estimated input.
    pub combined_stderr: f64,
    /// `void_gap ≤ void_bound + 4 · combined_stderr`.
    pub bound_respected: bool,
}

/// Estimate `p` and `q_k`, evaluate the bounds, and check them against a
/// direct simulation of `P(S = 0)`.
pub fn run_chen_stein(
    n: u64,
    m: usize,
    y: f64,
    moment_trials: u64,
    void_trials: u64,
    seed: u64,
    workers: Workers,
) -> Result<ChenSteinReport> {
    let th = make_thresholds(n, m, y)?;
    if (n as usize) < m {
        return Err(Error::invalid(format!("need m <= n, got m={m}, n={n}")));
    }
    let p = estimate_p(&th, moment_trials, seed, workers)?;
    if p.hits < MIN_EXPECTED_HITS {
        return Err(Error::insufficient(format!(
            "only {} of {} trials hit A_alpha; need at least {MIN_EXPECTED_HITS} for a usable p estimate (raise --trials or lower n, y)",
            p.hits, moment_trials
        )));
    }
    let qs = (1..m)
        .map(|k| estimate_q(&th, k, moment_trials, seed, workers))
        .collect::<Result<Vec<_>>>()?;
    // q_k ≤ p holds exactly; clamp sampling noise so the model stays valid
    let model = DependencyModel::new(n, m, p.value, qs.iter().map(|q| q.value.min(p.value)).collect())?;
    let bounds = poisson_bounds(&model)?;
    let void = simulate_void(&th, void_trials, seed, workers)?;

    let poisson_s0 = (-bounds.lambda).exp();
    let void_gap = (void.value - poisson_s0).abs();

    let total = model.subsets();
    let f = void_factor(bounds.lambda);
    let b_sum = bounds.b1 + bounds.b2;
    let df_dp = if bounds.lambda > 1.0 {
        -total / (bounds.lambda * bounds.lambda)
    } else {
        0.0
    };
    let dvoid_dp = f * 2.0 * total * model.neighbourhood() * p.value + b_sum * df_dp;
    let mut var = void.stderr.powi(2)
        + (poisson_s0 * total * p.stderr).powi(2)
        + (dvoid_dp * p.stderr).powi(2);
    for (k, q) in qs.iter().enumerate() {
        var += (f * model.overlap_pairs(k + 1) * q.stderr).powi(2);
    }
    let combined_stderr = var.sqrt();

    Ok(ChenSteinReport {
        n,
        m,
        y,
        moment_trials,
        void_trials,
        p: p.value,
        p_stderr: p.stderr,
        p_hits: p.hits,
        q: model.q.clone(),
        q_stderr: qs.iter().map(|q| q.stderr).collect(),
        q_hits: qs.iter().map(|q| q.hits).collect(),
        lambda: bounds.lambda,
        b1: bounds.b1,
        b2: bounds.b2,
        b3: bounds.b3,
        tv_bound: bounds.tv_bound,
        void_bound: bounds.void_bound,
        p_s0_simulated: void.value,
        p_s0_stderr: void.stderr,
        poisson_s0,
        void_gap,
        combined_stderr,
        bound_respected: void_gap <= bounds.void_bound + 4.0 * combined_stderr,
    })
}
