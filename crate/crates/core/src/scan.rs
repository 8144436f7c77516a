//! Enumeration of `m`-subsets, the maximal top eigenvalue over all principal
//! minors, and the threshold events used by the Poisson approximation.

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius_sq, lambda1, lambda1_2x2, lambda1_star, principal_minor_unchecked, top_eigvec,
    validate_subset, SymMatrix,
};
use crate::par::{map_indexed, Workers};

/// Largest minor size for which the all-subsets event check is supported.
pub const MAX_EVENT_M: usize = 12;

/// Levels `y_k` (`1 ≤ k < m`) and `y_m` for given `(n, m, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds {
    pub n: u64,
    pub m: usize,
    pub y: f64,
    /// `levels[k - 1] = y_k` for `1 ≤ k < m`.
    pub levels: Vec<f64>,
    pub y_m: f64,
}

impl Thresholds {
    /// `y_k` for `1 ≤ k < m`.
    pub fn level(&self, k: usize) -> f64 {
        self.levels[k - 1]
    }
}

/// `y_k² = 4k ln n + 2k ln ln n` for `k < m`, and
/// `y_m² = 4m ln n + 2(m − 2) ln ln n + y`.
pub fn make_thresholds(n: u64, m: usize, y: f64) -> Result<Thresholds> {
    if n < 3 {
        return Err(Error::invalid(format!("thresholds need n >= 3, got {n}")));
    }
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if !y.is_finite() {
        return Err(Error::invalid("y must be finite"));
    }
    let ln_n = (n as f64).ln();
    let lnln_n = ln_n.ln();
    let levels = (1..m)
        .map(|k| {
            let k = k as f64;
            (4.0 * k * ln_n + 2.0 * k * lnln_n).sqrt()
        })
        .collect();
    let mf = m as f64;
    let y_m_sq = 4.0 * mf * ln_n + 2.0 * (mf - 2.0) * lnln_n + y;
    if y_m_sq <= 0.0 {
        return Err(Error::invalid(format!(
            "y = {y} makes y_m^2 = {y_m_sq} non-positive"
        )));
    }
    Ok(Thresholds {
        n,
        m,
        y,
        levels,
        y_m: y_m_sq.sqrt(),
    })
}

/// Exact binomial coefficient as `f64` (`0` when `k > n`).
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// `ln C(n, k)` (`-∞` when `k > n`).
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

/// Lexicographic iterator over the sorted `m`-subsets of `{0, …, n−1}`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let m = self.current.len();
        // rightmost position that can still advance
        let mut i = m;
        while i > 0 {
            i -= 1;
            if self.current[i] < self.n - m + i {
                self.current[i] += 1;
                for j in i + 1..m {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return Some(out);
            }
        }
        self.done = true;
        Some(out)
    }
}

pub fn enumerate_combinations(n: usize, m: usize) -> Result<Combinations> {
    if m == 0 || m > n {
        return Err(Error::invalid(format!("need 1 <= m <= n, got m={m}, n={n}")));
    }
    Ok(Combinations {
        n,
        current: (0..m).collect(),
        done: false,
    })
}

/// Outcome of a full minor scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// `T = max_α λ₁(G_α)`.
    pub t: f64,
    /// Lexicographically first maximizing subset.
    pub argmax: Vec<usize>,
    /// Sign-canonical top eigenvector of `G_argmax`.
    pub v_star: Vec<f64>,
    pub minors_evaluated: u64,
    pub minors_pruned: u64,
}

#[derive(Debug, Clone)]
struct Partial {
    best: f64,
    argmax: Vec<usize>,
    evaluated: u64,
    pruned: u64,
}

impl Partial {
    fn empty() -> Self {
        Partial {
            best: f64::NEG_INFINITY,
            argmax: Vec::new(),
            evaluated: 0,
            pruned: 0,
        }
    }
}

// A minor is skipped only if its certified upper bound cannot beat `best`,
// with a relative slack covering rounding differences between bound and solver.
#[inline]
fn prunable(bound: f64, best: f64) -> bool {
    bound + 1e-12 * (1.0 + bound.abs()) <= best
}

/// Scan all minors whose first index lies in `firsts`, starting from `acc`.
fn scan_firsts(
    g: &SymMatrix,
    m: usize,
    pruning: bool,
    firsts: std::ops::Range<usize>,
    mut acc: Partial,
) -> crate::error::Result<Partial> {
    let n = g.dim();
    match m {
        1 => {
            for i in firsts {
                let d = g.get(i, i);
                acc.evaluated += 1;
                if d > acc.best {
                    acc.best = d;
                    acc.argmax = vec![i];
                }
            }
        }
        2 => {
            let diag = g.diag();
            let data = g.packed();
            for i in firsts {
                let a = diag[i];
                let row = i * (2 * n + 1 - i) / 2;
                for j in i + 1..n {
                    let b = data[row + j - i];
                    let c = diag[j];
                    if pruning && prunable(a.max(c) + b.abs(), acc.best) {
                        acc.pruned += 1;
                        continue;
                    }
                    let l = lambda1_2x2(a, b, c);
                    acc.evaluated += 1;
                    if l > acc.best {
                        acc.best = l;
                        acc.argmax = vec![i, j];
                    }
                }
            }
        }
        _ => {
            let mut dfs = Dfs::new(g, m, pruning, acc);
            for i in firsts {
                dfs.push(i);
                dfs.descend(i + 1)?;
                dfs.pop();
            }
            acc = dfs.acc;
        }
    }
    Ok(acc)
}

/// Depth-first lexicographic walk keeping per-prefix Frobenius and
/// Gershgorin partial sums.
struct Dfs<'a> {
    g: &'a SymMatrix,
    m: usize,
    pruning: bool,
    alpha: Vec<usize>,
    /// `frob[d]` = `Tr G_{α[..d]}²`.
    frob: Vec<f64>,
    /// `rows[d][t]` = Gershgorin row bound of row `t` within `α[..d]`.
    rows: Vec<Vec<f64>>,
    buf: SymMatrix,
    acc: Partial,
}

impl<'a> Dfs<'a> {
    fn new(g: &'a SymMatrix, m: usize, pruning: bool, acc: Partial) -> Self {
        Dfs {
            g,
            m,
            pruning,
            alpha: Vec::with_capacity(m),
            frob: vec![0.0],
            rows: vec![Vec::new()],
            buf: SymMatrix::zeros(m).expect("m >= 1"),
            acc,
        }
    }

    fn push(&mut self, j: usize) {
        let d = self.alpha.len();
        let gjj = self.g.get(j, j);
        let mut f = self.frob[d] + gjj * gjj;
        let mut rows = Vec::with_capacity(d + 1);
        let mut own = gjj;
        for (t, &i) in self.alpha.iter().enumerate() {
            let gij = self.g.get(i, j);
            f += 2.0 * gij * gij;
            rows.push(self.rows[d][t] + gij.abs());
            own += gij.abs();
        }
        rows.push(own);
        self.alpha.push(j);
        self.frob.push(f);
        self.rows.push(rows);
    }

    fn pop(&mut self) {
        self.alpha.pop();
        self.frob.pop();
        self.rows.pop();
    }

    fn descend(&mut self, start: usize) -> Result<()> {
        let n = self.g.dim();
        let d = self.alpha.len();
        if d == self.m {
            return self.leaf();
        }
        let remaining = self.m - d;
        for j in start..=n - remaining {
            self.push(j);
            self.descend(j + 1)?;
            self.pop();
        }
        Ok(())
    }

    fn leaf(&mut self) -> Result<()> {
        if self.pruning {
            let gersh = self.rows[self.m]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            let bound = self.frob[self.m].sqrt().min(gersh);
            if prunable(bound, self.acc.best) {
                self.acc.pruned += 1;
                return Ok(());
            }
        }
        gather_into(&mut self.buf, self.g, &self.alpha);
        let l = lambda1(&self.buf)?;
        self.acc.evaluated += 1;
        if l > self.acc.best {
            self.acc.best = l;
            self.acc.argmax = self.alpha.clone();
        }
        Ok(())
    }
}

fn gather_into(buf: &mut SymMatrix, g: &SymMatrix, alpha: &[usize]) {
    let data = buf.packed_mut();
    let mut k = 0;
    for (a, &i) in alpha.iter().enumerate() {
        for &j in &alpha[a..] {
            data[k] = g.get(i, j);
            k += 1;
        }
    }
}

fn finish(g: &SymMatrix, acc: Partial) -> Result<ScanResult> {
    if !acc.best.is_finite() {
        return Err(Error::numerical(format!("scan produced non-finite maximum {}", acc.best)));
    }
    let minor = principal_minor_unchecked(g, &acc.argmax);
    let v_star = top_eigvec(&minor)?;
    Ok(ScanResult {
        t: acc.best,
        argmax: acc.argmax,
        v_star,
        minors_evaluated: acc.evaluated,
        minors_pruned: acc.pruned,
    })
}

fn check_m(g: &SymMatrix, m: usize) -> Result<()> {
    if m == 0 || m > g.dim() {
        return Err(Error::invalid(format!(
            "need 1 <= m <= dim, got m={m}, dim={}",
            g.dim()
        )));
    }
    Ok(())
}

/// `T = max_α λ₁(G_α)` over all `m`-subsets, on the calling thread.
pub fn scan_max(g: &SymMatrix, m: usize, pruning: bool) -> Result<ScanResult> {
    check_m(g, m)?;
    let acc = scan_firsts(g, m, pruning, 0..g.dim() - m + 1, Partial::empty())?;
    finish(g, acc)
}

/// Same result as [`scan_max`], with the lexicographic sequence split by first
/// index across `workers`. Each range keeps its own best; ranges merge in
/// order, so `(T, argmax)` never depends on the worker count.
pub fn scan_max_parallel(
    g: &SymMatrix,
    m: usize,
    pruning: bool,
    workers: Workers,
) -> Result<ScanResult> {
    check_m(g, m)?;
    let firsts = g.dim() - m + 1;
    let parts = map_indexed(firsts, workers, |i| {
        scan_firsts(g, m, pruning, i..i + 1, Partial::empty())
    });
    let mut acc = Partial::empty();
    for part in parts {
        let part = part?;
        acc.evaluated += part.evaluated;
        acc.pruned += part.pruned;
        if part.best > acc.best {
            acc.best = part.best;
            acc.argmax = part.argmax;
        }
    }
    finish(g, acc)
}

fn check_event_args(g: &SymMatrix, alpha: &[usize], th: &Thresholds) -> Result<()> {
    validate_subset(alpha, g.dim())?;
    if alpha.len() != th.m {
        return Err(Error::invalid(format!(
            "subset size {} does not match thresholds m = {}",
            alpha.len(),
            th.m
        )));
    }
    if th.m > MAX_EVENT_M {
        return Err(Error::invalid(format!(
            "event checks support m <= {MAX_EVENT_M}, got {}",
            th.m
        )));
    }
    Ok(())
}

/// `H_α`: every proper nonempty `β ⊂ α` with `|β| = k` has `λ₁*(G_β) ≤ y_k`.
pub fn event_h(g: &SymMatrix, alpha: &[usize], th: &Thresholds) -> Result<bool> {
    check_event_args(g, alpha, th)?;
    event_h_unchecked(g, alpha, th)
}

fn event_h_unchecked(g: &SymMatrix, alpha: &[usize], th: &Thresholds) -> Result<bool> {
    let m = alpha.len();
    if m == 1 {
        return Ok(true);
    }
    // singletons first: λ₁*([a]) = |a|, and they fail most often
    if alpha.iter().any(|&i| g.get(i, i).abs() > th.level(1)) {
        return Ok(false);
    }
    let mut beta = Vec::with_capacity(m);
    for mask in 1u32..(1u32 << m) - 1 {
        let k = mask.count_ones() as usize;
        if k == 1 {
            continue;
        }
        beta.clear();
        beta.extend((0..m).filter(|b| mask >> b & 1 == 1).map(|b| alpha[b]));
        let sub = principal_minor_unchecked(g, &beta);
        if lambda1_star(&sub)? > th.level(k) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A_α = {λ₁(G_α) > y_m} ∩ H_α`.
pub fn event_a(g: &SymMatrix, alpha: &[usize], th: &Thresholds) -> Result<bool> {
    check_event_args(g, alpha, th)?;
    let l = lambda1(&principal_minor_unchecked(g, alpha))?;
    Ok(l > th.y_m && event_h_unchecked(g, alpha, th)?)
}

/// Event check for the whole matrix (`α = {0, …, m−1}`), the form used by
/// single-minor Monte Carlo estimators.
pub(crate) fn event_a_whole(g: &SymMatrix, th: &Thresholds) -> Result<bool> {
    let alpha: Vec<usize> = (0..g.dim()).collect();
    let l = lambda1(g)?;
    Ok(l > th.y_m && event_h_unchecked(g, &alpha, th)?)
}

fn count_firsts(g: &SymMatrix, th: &Thresholds, firsts: std::ops::Range<usize>) -> Result<u64> {
    let n = g.dim();
    let m = th.m;
    let mut count = 0u64;
    match m {
        1 => {
            for i in firsts {
                // H is vacuous for m = 1
                if g.get(i, i) > th.y_m {
                    count += 1;
                }
            }
        }
        2 => {
            let y1 = th.level(1);
            let diag = g.diag();
            let data = g.packed();
            for i in firsts {
                let a = diag[i];
                if a.abs() > y1 {
                    continue;
                }
                let row = i * (2 * n + 1 - i) / 2;
                for j in i + 1..n {
                    let c = diag[j];
                    if c.abs() > y1 {
                        continue;
                    }
                    if lambda1_2x2(a, data[row + j - i], c) > th.y_m {
                        count += 1;
                    }
                }
            }
        }
        _ => {
            let mut buf = SymMatrix::zeros(m).expect("m >= 1");
            let mut alpha: Vec<usize> = Vec::with_capacity(m);
            for i in firsts {
                for rest in enumerate_combinations(n - i - 1, m - 1)? {
                    alpha.clear();
                    alpha.push(i);
                    alpha.extend(rest.iter().map(|r| r + i + 1));
                    gather_into(&mut buf, g, &alpha);
                    if lambda1(&buf)? > th.y_m && event_h_unchecked(g, &alpha, th)? {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

fn check_count_args(g: &SymMatrix, m: usize, th: &Thresholds) -> Result<()> {
    check_m(g, m)?;
    if th.m != m {
        return Err(Error::invalid(format!(
            "thresholds built for m = {}, asked to count m = {m}",
            th.m
        )));
    }
    if m > MAX_EVENT_M {
        return Err(Error::invalid(format!("event checks support m <= {MAX_EVENT_M}")));
    }
    Ok(())
}

/// `S = #{α : A_α}` over all `m`-subsets.
pub fn count_events(g: &SymMatrix, m: usize, th: &Thresholds) -> Result<u64> {
    check_count_args(g, m, th)?;
    count_firsts(g, th, 0..g.dim() - m + 1)
}

pub fn count_events_parallel(
    g: &SymMatrix,
    m: usize,
    th: &Thresholds,
    workers: Workers,
) -> Result<u64> {
    check_count_args(g, m, th)?;
    let parts = map_indexed(g.dim() - m + 1, workers, |i| count_firsts(g, th, i..i + 1));
    parts.into_iter().sum()
}

/// The certified bound `min(√Tr G_α², max Gershgorin row bound) ≥ λ₁(G_α)`
/// used for pruning.
pub fn minor_upper_bound(g: &SymMatrix, alpha: &[usize]) -> Result<f64> {
    validate_subset(alpha, g.dim())?;
    let minor = principal_minor_unchecked(g, alpha);
    let frob = frobenius_sq(&minor).sqrt();
    let m = minor.dim();
    let gersh = (0..m)
        .map(|i| {
            minor.get(i, i)
                + (0..m)
                    .filter(|&j| j != i)
                    .map(|j| minor.get(i, j).abs())
                    .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(frob.min(gersh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::principal_minor;
    use crate::sampler::{derive_stream, sample_goe};
    use approx::assert_abs_diff_eq;

    #[test]
    fn thresholds_values() {
        let th = make_thresholds(100, 2, 0.0).unwrap();
        assert_abs_diff_eq!(th.level(1).powi(2), 21.47504, epsilon = 1e-5);
        assert_abs_diff_eq!(th.y_m.powi(2), 36.84136, epsilon = 1e-5);
        assert_abs_diff_eq!(th.level(1), 4.63412, epsilon = 1e-5);
        assert_abs_diff_eq!(th.y_m, 6.06971, epsilon = 1e-5);

        let n: u64 = 1000;
        let th1 = make_thresholds(n, 1, 0.0).unwrap();
        assert!(th1.levels.is_empty());
        let ln = (n as f64).ln();
        assert_abs_diff_eq!(th1.y_m.powi(2), 4.0 * ln - 2.0 * ln.ln(), epsilon = 1e-12);

        let thy = make_thresholds(100, 2, 1.75).unwrap();
        assert_abs_diff_eq!(thy.y_m.powi(2) - th.y_m.powi(2), 1.75, epsilon = 1e-12);
    }

    #[test]
    fn thresholds_reject_bad_input() {
        assert!(make_thresholds(2, 2, 0.0).is_err());
        assert!(make_thresholds(100, 2, -40.0).is_err());
        assert!(make_thresholds(100, 0, 0.0).is_err());
    }

    #[test]
    fn combinations_small() {
        let all: Vec<_> = enumerate_combinations(3, 2).unwrap().collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let singles: Vec<_> = enumerate_combinations(5, 1).unwrap().collect();
        assert_eq!(singles, (0..5).map(|i| vec![i]).collect::<Vec<_>>());
        assert_eq!(enumerate_combinations(20, 4).unwrap().count(), 4845);
        assert_eq!(binomial(20, 4), 4845.0);
        assert_eq!(enumerate_combinations(4, 4).unwrap().count(), 1);
        assert!(enumerate_combinations(3, 4).is_err());
    }

    #[test]
    fn combinations_are_strictly_lexicographic() {
        let all: Vec<_> = enumerate_combinations(9, 4).unwrap().collect();
        assert_eq!(all.len() as f64, binomial(9, 4));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn scan_single_minor() {
        let g = SymMatrix::from_rows(&[vec![0.0, 3.0], vec![3.0, 0.0]], 0.0).unwrap();
        let r = scan_max(&g, 2, true).unwrap();
        assert_eq!(r.t, 3.0);
        assert_eq!(r.argmax, vec![0, 1]);
    }

    #[test]
    fn scan_m1_is_max_diagonal() {
        let g = SymMatrix::from_diag(&[1.0, 7.0, -2.0]).unwrap();
        let r = scan_max(&g, 1, false).unwrap();
        assert_eq!(r.t, 7.0);
        assert_eq!(r.argmax, vec![1]);
        assert_eq!(r.v_star, vec![1.0]);
    }

    #[test]
    fn scan_ties_pick_lexicographically_first() {
        let g = SymMatrix::from_diag(&[2.0, 5.0, 5.0, 1.0]).unwrap();
        for m in 1..=3 {
            for pruning in [false, true] {
                let r = scan_max(&g, m, pruning).unwrap();
                assert_eq!(r.t, 5.0);
                assert_eq!(r.argmax[0], if m == 1 { 1 } else { 0 });
                let rp = scan_max_parallel(&g, m, pruning, Workers(3)).unwrap();
                assert_eq!((rp.t, &rp.argmax), (r.t, &r.argmax));
            }
        }
    }

    #[test]
    fn scan_matches_brute_force() {
        let mut s = derive_stream(11, 0);
        for m in 1..=4 {
            let g = sample_goe(9, &mut s);
            let mut best = f64::NEG_INFINITY;
            let mut arg = Vec::new();
            for a in enumerate_combinations(9, m).unwrap() {
                let l = lambda1(&principal_minor(&g, &a).unwrap()).unwrap();
                if l > best {
                    best = l;
                    arg = a;
                }
            }
            for pruning in [false, true] {
                let r = scan_max(&g, m, pruning).unwrap();
                assert_abs_diff_eq!(r.t, best, epsilon = 1e-10);
                assert_eq!(r.argmax, arg);
                assert_eq!(r.minors_evaluated + r.minors_pruned, binomial(9, m as u64) as u64);
            }
        }
    }

    #[test]
    fn pruning_actually_prunes() {
        let g = sample_goe(30, &mut derive_stream(5, 5));
        let r = scan_max(&g, 3, true).unwrap();
        assert!(r.minors_pruned > 0);
        let r2 = scan_max(&g, 2, true).unwrap();
        assert!(r2.minors_pruned > 0);
    }

    #[test]
    fn event_h_cases() {
        let th = make_thresholds(100, 1, 0.0).unwrap();
        let g = SymMatrix::from_diag(&[1e6]).unwrap();
        assert!(event_h(&g, &[0], &th).unwrap());

        let th = make_thresholds(100, 2, 0.0).unwrap();
        let z = SymMatrix::zeros(2).unwrap();
        assert!(event_h(&z, &[0, 1], &th).unwrap());
        let g = SymMatrix::from_diag(&[7.0, 0.0]).unwrap();
        assert!(!event_h(&g, &[0, 1], &th).unwrap());
    }

    #[test]
    fn event_a_cases() {
        let th = make_thresholds(100, 2, 0.0).unwrap();
        let g = SymMatrix::from_rows(&[vec![4.0, 4.7], vec![4.7, 0.0]], 0.0).unwrap();
        assert!(event_a(&g, &[0, 1], &th).unwrap());
        let g = SymMatrix::from_diag(&[7.0, 0.0]).unwrap();
        assert!(lambda1(&g).unwrap() > th.y_m);
        assert!(!event_a(&g, &[0, 1], &th).unwrap());
        assert!(!event_a(&SymMatrix::zeros(2).unwrap(), &[0, 1], &th).unwrap());
    }

    #[test]
    fn event_args_validated() {
        let th = make_thresholds(100, 2, 0.0).unwrap();
        let g = SymMatrix::zeros(3).unwrap();
        assert!(event_a(&g, &[0], &th).is_err());
        assert!(event_a(&g, &[1, 0], &th).is_err());
    }

    #[test]
    fn count_events_cases() {
        let th = make_thresholds(10, 2, 1e6).unwrap();
        let g = sample_goe(10, &mut derive_stream(1, 2));
        assert_eq!(count_events(&g, 2, &th).unwrap(), 0);

        let th = make_thresholds(10, 1, 0.0).unwrap();
        let g = SymMatrix::from_diag(&[0.0, 0.1, 50.0, -3.0, 0.0]).unwrap();
        assert_eq!(count_events(&g, 1, &th).unwrap(), 1);
    }

    #[test]
    fn count_events_matches_brute_force() {
        // scale up so that thresholds are crossed regularly
        for (m, seed) in [(2usize, 3u64), (3, 4)] {
            let th = make_thresholds(10, m, -8.0).unwrap();
            for trial in 0..20 {
                let mut g = sample_goe(10, &mut derive_stream(seed, trial));
                g.packed_mut().iter_mut().for_each(|x| *x *= 2.2);
                let mut brute = 0;
                for a in enumerate_combinations(10, m).unwrap() {
                    if event_a(&g, &a, &th).unwrap() {
                        brute += 1;
                    }
                }
                assert_eq!(count_events(&g, m, &th).unwrap(), brute);
                assert_eq!(count_events_parallel(&g, m, &th, Workers(4)).unwrap(), brute);
            }
        }
    }

    #[test]
    fn upper_bound_dominates() {
        let mut s = derive_stream(9, 9);
        for _ in 0..50 {
            let g = sample_goe(6, &mut s);
            for a in enumerate_combinations(6, 3).unwrap() {
                let l = lambda1(&principal_minor(&g, &a).unwrap()).unwrap();
                assert!(minor_upper_bound(&g, &a).unwrap() >= l - 1e-12);
            }
        }
    }
}
