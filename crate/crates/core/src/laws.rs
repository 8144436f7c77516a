//! Closed-form constants and limiting distributions.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;
use libm::lgamma as ln_gamma;

use crate::error::{Error, Result};
use crate::scan::{ln_binomial, make_thresholds};

/// `F(y) = exp(−c·e^{−y/4})`, the limit law of the centered statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GumbelLaw {
    pub c: f64,
}

impl GumbelLaw {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid(format!("Gumbel constant must be positive, got {c}")));
        }
        Ok(GumbelLaw { c })
    }

    pub fn cdf(&self, y: f64) -> f64 {
        (-self.c * (-y / 4.0).exp()).exp()
    }

    /// `y = 4 ln(c / ln(1/p))`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid(format!("quantile level must lie in (0, 1), got {p}")));
        }
        Ok(4.0 * (self.c / -p.ln()).ln())
    }
}

pub fn gumbel_cdf(law: &GumbelLaw, y: f64) -> f64 {
    law.cdf(y)
}

pub fn gumbel_quantile(law: &GumbelLaw, p: f64) -> Result<f64> {
    law.quantile(p)
}

/// `c_m = (2m)^{(m−2)/2} K_m / ((m−1)! · 2^{3/2} · Γ(1 + m/2))`.
pub fn constant_c_m(m: usize, k_m: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if !(0.0..=1.0).contains(&k_m) {
        return Err(Error::invalid(format!("K_m must lie in [0, 1], got {k_m}")));
    }
    if k_m == 0.0 {
        return Ok(0.0);
    }
    let mf = m as f64;
    let ln_c = 0.5 * (mf - 2.0) * (2.0 * mf).ln() + k_m.ln()
        - ln_gamma(mf)
        - 1.5 * 2f64.ln()
        - ln_gamma(1.0 + 0.5 * mf);
    Ok(ln_c.exp())
}

/// `c₁ = 1 / (2√π)`.
pub fn c1_explicit() -> f64 {
    1.0 / (2.0 * PI.sqrt())
}

/// `c₂ = −1/(2√2) + (√2/π)·arcsin(2^{−1/4})`.
pub fn c2_explicit() -> f64 {
    -1.0 / (2.0 * SQRT_2) + SQRT_2 / PI * 2f64.powf(-0.25).asin()
}

/// `K_m` where a closed form is known: `K₁ = 1`, `K₂ = −1 + (4/π)·arcsin(2^{−1/4})`.
pub fn k_closed(m: usize) -> Option<f64> {
    match m {
        1 => Some(1.0),
        2 => Some(-1.0 + 4.0 / PI * 2f64.powf(-0.25).asin()),
        _ => None,
    }
}

/// `T² − 4m ln n − 2(m − 2) ln ln n`.
pub fn centered_statistic(t: f64, n: u64, m: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::invalid(format!("centering needs n >= 3, got {n}")));
    }
    let ln_n = (n as f64).ln();
    let mf = m as f64;
    Ok(t * t - 4.0 * mf * ln_n - 2.0 * (mf - 2.0) * ln_n.ln())
}

/// `ln Z_n`.
pub fn log_partition_z(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("partition function needs n >= 1"));
    }
    let nf = n as f64;
    let ln_g32 = ln_gamma(1.5);
    let prod: f64 = (1..=n).map(|j| ln_gamma(1.0 + j as f64 / 2.0) - ln_g32).sum();
    Ok(nf * (nf + 1.0) / 4.0 * 2f64.ln() + nf / 2.0 * (2.0 * PI).ln() - ln_gamma(nf + 1.0) + prod)
}

/// `Z_n = 2^{n(n+1)/4} (2π)^{n/2} (n!)^{−1} ∏ Γ(1 + j/2)/Γ(3/2)`.
pub fn partition_z(n: usize) -> Result<f64> {
    let z = log_partition_z(n)?.exp();
    if !z.is_finite() {
        return Err(Error::numerical(format!(
            "Z_{n} overflows; use log_partition_z"
        )));
    }
    Ok(z)
}

/// GOE joint density of the ordered eigenvalues,
/// `(1/Z_k) ∏ e^{−λᵢ²/4} ∏_{i<j} (λᵢ − λⱼ)`.
pub fn joint_density(lambda: &[f64]) -> Result<f64> {
    if lambda.is_empty() {
        return Err(Error::invalid("joint density needs at least one eigenvalue"));
    }
    if lambda.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::invalid("eigenvalues must be strictly decreasing"));
    }
    let mut ln = -log_partition_z(lambda.len())?;
    for (i, &li) in lambda.iter().enumerate() {
        ln -= li * li / 4.0;
        for &lj in &lambda[i + 1..] {
            ln += (li - lj).ln();
        }
    }
    Ok(ln.exp())
}

/// Asymptotic form of `P(λ₁(G_α) > y_m)` for an `m × m` GOE minor:
/// `m 2^{−(1+m)/2} / Γ(1 + m/2) · y_m^{m−2} e^{−y_m²/4}`.
///
/// This is only the leading-order tail shape, never an exact probability.
pub fn tail_asymptotic_p(n: u64, m: usize, y: f64) -> Result<f64> {
    let th = make_thresholds(n, m, y)?;
    Ok(tail_asymptotic_at(m, th.y_m))
}

/// The same asymptotic form evaluated at an arbitrary level `x`.
pub fn tail_asymptotic_at(m: usize, x: f64) -> f64 {
    let mf = m as f64;
    let ln = mf.ln() - 0.5 * (1.0 + mf) * 2f64.ln() - ln_gamma(1.0 + mf / 2.0)
        + (mf - 2.0) * x.ln()
        - x * x / 4.0;
    ln.exp()
}

/// `C(n, m) · p` in log space.
pub fn expected_count(n: u64, m: usize, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    (ln_binomial(n, m as u64) + p.ln()).exp()
}

/// Classical norming for the maximum of `n` i.i.d. `N(0, 2)` variables:
/// `a_n = 2√(ln n)`, `b_n = 2√(ln n) − (ln ln n + ln 4π) / (2√(ln n))`.
pub fn classical_norming(n: u64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::invalid(format!("classical norming needs n >= 2, got {n}")));
    }
    let ln_n = (n as f64).ln();
    let a = 2.0 * ln_n.sqrt();
    let b = a - (ln_n.ln() + (4.0 * PI).ln()) / a;
    Ok((a, b))
}

/// Classical limit `e^{−e^{−y/2}}` of `a_n (M_n − b_n)`.
pub fn classical_cdf(y: f64) -> f64 {
    (-(-y / 2.0).exp()).exp()
}

/// Standard normal upper tail `P(Z > z)`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gumbel_cdf_cases() {
        let law = GumbelLaw::new(2f64.ln()).unwrap();
        assert_abs_diff_eq!(law.cdf(0.0), 0.5, epsilon = 1e-15);
        assert_eq!(law.cdf(1e4), 1.0);
        assert_eq!(law.cdf(-1e4), 0.0);
        let law1 = GumbelLaw::new(c1_explicit()).unwrap();
        assert_abs_diff_eq!(law1.cdf(0.0), (-0.282_094_791_773_878_1f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(law1.cdf(0.0), 0.754202, epsilon = 1e-6);
    }

    #[test]
    fn gumbel_quantile_cases() {
        let law = GumbelLaw::new(2f64.ln()).unwrap();
        assert_abs_diff_eq!(law.quantile(0.5).unwrap(), 0.0, epsilon = 1e-15);
        for y in [-5.0, 0.0, 5.0] {
            assert_abs_diff_eq!(law.quantile(law.cdf(y)).unwrap(), y, epsilon = 1e-10);
        }
        let law2 = GumbelLaw::new(c2_explicit()).unwrap();
        let q = law2.quantile(0.9).unwrap();
        assert!(q.is_finite());
        assert_abs_diff_eq!(law2.cdf(q), 0.9, epsilon = 1e-12);
        assert!(law.quantile(0.0).is_err());
        assert!(law.quantile(1.0).is_err());
        assert!(GumbelLaw::new(0.0).is_err());
    }

    #[test]
    fn c_m_values() {
        assert_abs_diff_eq!(constant_c_m(1, 1.0).unwrap(), 0.282_094_8, epsilon = 1e-7);
        assert_abs_diff_eq!(constant_c_m(1, 1.0).unwrap(), c1_explicit(), epsilon = 1e-12);
        let c2 = constant_c_m(2, k_closed(2).unwrap()).unwrap();
        assert_abs_diff_eq!(c2, c2_explicit(), epsilon = 1e-10);
        assert_abs_diff_eq!(c2, 0.096_126_5, epsilon = 1e-6);
        assert_eq!(constant_c_m(2, 0.0).unwrap(), 0.0);
        assert!(constant_c_m(3, 1.5).is_err());
    }

    #[test]
    fn k_closed_values() {
        assert_eq!(k_closed(1), Some(1.0));
        let k2 = k_closed(2).unwrap();
        assert_abs_diff_eq!(k2, 2f64.powf(1.5) * c2_explicit(), epsilon = 1e-14);
        assert_abs_diff_eq!(k2, 0.271_887, epsilon = 1e-6);
        assert_eq!(k_closed(3), None);
    }

    /// Arc-length oracle: on S¹ the set {cos²θ ≤ 2^{−1/2}, sin²θ ≤ 2^{−1/2}}
    /// measured on a fine θ grid.
    #[test]
    fn k2_matches_arc_length() {
        let steps = 2_000_000;
        let bound = 0.5f64.sqrt();
        let inside = (0..steps)
            .filter(|&i| {
                let th = (i as f64 + 0.5) / steps as f64 * 2.0 * PI;
                let c2 = th.cos().powi(2);
                c2 <= bound && 1.0 - c2 <= bound
            })
            .count();
        let frac = inside as f64 / steps as f64;
        assert_abs_diff_eq!(frac, k_closed(2).unwrap(), epsilon = 1e-5);
    }

    #[test]
    fn centered_statistic_cases() {
        let th = make_thresholds(1000, 3, 1.25).unwrap();
        assert_abs_diff_eq!(centered_statistic(th.y_m, 1000, 3).unwrap(), 1.25, epsilon = 1e-12);
        assert_abs_diff_eq!(
            centered_statistic(0.0, 100, 2).unwrap(),
            -36.841_361,
            epsilon = 1e-6
        );
        let t: f64 = 5.5;
        assert_abs_diff_eq!(
            centered_statistic(t, 100, 2).unwrap(),
            t * t - 8.0 * 100f64.ln(),
            epsilon = 1e-12
        );
        assert!(centered_statistic(1.0, 2, 1).is_err());
    }

    #[test]
    fn partition_values() {
        assert_abs_diff_eq!(partition_z(1).unwrap(), 2.0 * PI.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(partition_z(1).unwrap(), 3.544908, epsilon = 1e-6);
        assert_abs_diff_eq!(
            partition_z(2).unwrap(),
            2f64.powf(2.5) * PI.sqrt(),
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(partition_z(2).unwrap(), 10.026513, epsilon = 1e-6);
        let mut prev = log_partition_z(1).unwrap();
        for n in 2..=50 {
            let z = log_partition_z(n).unwrap();
            assert!(z.is_finite() && z > prev);
            prev = z;
        }
    }

    #[test]
    fn joint_density_cases() {
        assert_abs_diff_eq!(joint_density(&[0.0]).unwrap(), c1_explicit(), epsilon = 1e-14);
        assert_abs_diff_eq!(
            joint_density(&[1.0, -1.0]).unwrap(),
            2.0 * (-0.5f64).exp() / partition_z(2).unwrap(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(joint_density(&[1.0, -1.0]).unwrap(), 0.120985, epsilon = 1e-6);
        assert!(joint_density(&[0.3, 0.3 - 1e-12]).unwrap() < 1e-12);
        assert!(joint_density(&[0.0, 1.0]).is_err());
        assert!(joint_density(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn tail_asymptotic_m1_is_gaussian_shape() {
        for n in [100u64, 10_000, 1_000_000] {
            let th = make_thresholds(n, 1, 0.0).unwrap();
            let y = th.y_m;
            let p = tail_asymptotic_p(n, 1, 0.0).unwrap();
            assert_abs_diff_eq!(p, (-y * y / 4.0).exp() / (y * PI.sqrt()), epsilon = 1e-15);
            // Mills ratio: the exact N(0, 2) tail approaches this shape
            let exact = normal_sf(y / SQRT_2);
            assert!((exact / p - 1.0).abs() < 2.0 / (y * y / 2.0));
        }
    }

    #[test]
    fn tail_asymptotic_m2_value() {
        let p = tail_asymptotic_p(100, 2, 0.0).unwrap();
        // √2 · 2^{-3/2}... = 2^{-1/2} e^{-2 ln 100} = 2^{-1/2} · 10^{-4}
        assert_abs_diff_eq!(p, 0.5f64.sqrt() * 1e-4, epsilon = 1e-18);
    }

    #[test]
    fn expected_count_cases() {
        assert_eq!(expected_count(4, 2, 0.0), 0.0);
        assert_abs_diff_eq!(expected_count(4, 2, 0.1), 0.6, epsilon = 1e-14);
    }

    #[test]
    fn classical_cases() {
        let (a, b) = classical_norming(3).unwrap();
        assert_abs_diff_eq!(a, 2.096294, epsilon = 1e-6);
        let l3 = 3f64.ln();
        assert_abs_diff_eq!(b, a - (l3.ln() + (4.0 * PI).ln()) / (2.0 * l3.sqrt()), epsilon = 1e-14);
        for n in [2u64, 10, 1000] {
            let (a, _) = classical_norming(n).unwrap();
            assert_abs_diff_eq!(a * a, 4.0 * (n as f64).ln(), epsilon = 1e-12);
        }
        assert!(classical_norming(2).unwrap().1.is_finite());
        assert!(classical_norming(1).is_err());
        assert_abs_diff_eq!(classical_cdf(0.0), (-1f64).exp(), epsilon = 1e-15);
    }
}
