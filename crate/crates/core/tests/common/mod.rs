//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use minor_extremes::SymMatrix;

/// Number of eigenvalues of `a` strictly below `x`, from the signs of the
/// LDLᵀ pivots of `a − xI` (Sylvester's law of inertia).
pub fn count_below(a: &[Vec<f64>], x: f64) -> usize {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a[i][j] - if i == j { x } else { 0.0 }).collect())
        .collect();
    let mut negatives = 0;
    for k in 0..n {
        let mut d = m[k][k];
        if d == 0.0 {
            d = -f64::EPSILON * (1.0 + x.abs());
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let f = m[i][k] / d;
            for j in k + 1..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    negatives
}

/// All eigenvalues, descending, by bisection on the inertia count.
pub fn eigenvalues_bisection(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let r: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt() + 1.0;
    (0..n)
        .map(|k| {
            // k-th largest = smallest x with count_below(x) >= n - k
            let (mut lo, mut hi) = (-r, r);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if count_below(a, mid) >= n - k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

pub fn dense_rows(s: &SymMatrix) -> Vec<Vec<f64>> {
    let n = s.dim();
    (0..n).map(|i| (0..n).map(|j| s.get(i, j)).collect()).collect()
}

/// Membership in `𝒮_m` by checking every proper nonempty subset.
pub fn in_s_m_all_subsets(x: &[f64]) -> bool {
    let m = x.len();
    (1u32..(1 << m) - 1).all(|mask| {
        let k = mask.count_ones() as f64;
        let s: f64 = (0..m).filter(|&b| mask >> b & 1 == 1).map(|b| x[b] * x[b]).sum();
        s <= (k / m as f64).sqrt()
    })
}

/// `max_α λ₁(G_α)` by evaluating every minor with the bisection oracle.
pub fn brute_force_t(g: &SymMatrix, m: usize) -> (f64, Vec<usize>) {
    let n = g.dim();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut alpha: Vec<usize> = (0..m).collect();
    loop {
        let rows: Vec<Vec<f64>> = alpha
            .iter()
            .map(|&i| alpha.iter().map(|&j| g.get(i, j)).collect())
            .collect();
        let l = eigenvalues_bisection(&rows)[0];
        if l > best.0 {
            best = (l, alpha.clone());
        }
        let Some(i) = (0..m).rev().find(|&i| alpha[i] < n - m + i) else {
            return best;
        };
        alpha[i] += 1;
        for j in i + 1..m {
            alpha[j] = alpha[j - 1] + 1;
        }
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

fn simpson(g: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> f64 {
    let h = (hi - lo) / steps as f64;
    let mut s = g(lo) + g(hi);
    for i in 1..steps {
        s += g(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Mean and variance of the maximum of `n` i.i.d. `N(0, σ²)` variables by
/// Simpson quadrature of the tail integrals
/// `E[M] = ∫₀^∞ (1 − F) − ∫_{−∞}^0 F`, `E[M²] = ∫₀^∞ 2x(1 − F) − ∫_{−∞}^0 2x F`.
pub fn max_normal_moments(n: u32, sigma: f64) -> (f64, f64) {
    let (r, steps) = (12.0 * sigma, 100_000);
    let f = |x: f64| std_normal_cdf(x / sigma).powi(n as i32);
    let m1 = simpson(|x| 1.0 - f(x), 0.0, r, steps) - simpson(f, -r, 0.0, steps);
    let m2 = simpson(|x| 2.0 * x * (1.0 - f(x)), 0.0, r, steps)
        - simpson(|x| 2.0 * x * f(x), -r, 0.0, steps);
    (m1, m2 - m1 * m1)
}
