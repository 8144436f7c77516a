//! Reproducible random sources.
//!
//! Every stream is a ChaCha8 generator keyed by the master seed with the
//! stream index as its 64-bit stream id, so `(seed, index)` pins the output
//! sequence on every platform and distinct indices never share a keystream.
//! Trial `i` of any experiment uses stream index `i`, which makes results
//! independent of how trials are scheduled across workers.
//!
//! Standard normals come from the Marsaglia polar method. Each accepted pair
//! yields two variates; the second is cached and returned by the next call.
//! Uniforms feeding the polar method are `(k + 0.5)·2⁻⁵³` for the top 53 bits
//! `k` of a 64-bit output, mapped to `(-1, 1)` by `2u - 1`. This recipe is
//! normative: changing it changes every simulated number.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::linalg::SymMatrix;

/// Environment variable consulted for the master seed when no flag is given.
pub const SEED_ENV: &str = "MINOR_EXTREMES_SEED";

#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
    seed: u64,
    index: u64,
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent master seed for a named sub-experiment, so that two
/// estimators run from the same user seed never share streams.
pub fn subseed(seed: u64, tag: &str) -> u64 {
    let mut h = mix64(seed);
    for b in tag.bytes() {
        h = mix64(h ^ u64::from(b));
    }
    h
}

/// Stream `index` under `master_seed`.
pub fn derive_stream(master_seed: u64, index: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    RngStream {
        rng,
        spare: None,
        seed: master_seed,
        index,
    }
}

impl RngStream {
    pub fn origin(&self) -> (u64, u64) {
        (self.seed, self.index)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via the polar method.
    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform_open() - 1.0;
            let v = 2.0 * self.uniform_open() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

pub fn sample_gaussian(stream: &mut RngStream) -> f64 {
    stream.gaussian()
}

/// `n × n` GOE draw: diagonal `N(0, 2)`, strict upper triangle `N(0, 1)`.
///
/// Draw order is the `n` diagonal entries first, then the strict upper
/// triangle row-major. Consequently [`sample_goe_diag`] on a fresh copy of
/// the same stream returns exactly this matrix's diagonal.
pub fn sample_goe(n: usize, stream: &mut RngStream) -> SymMatrix {
    let mut s = SymMatrix::zeros(n.max(1)).expect("positive dimension");
    fill_goe(&mut s, stream);
    s
}

/// Overwrite `s` with a fresh GOE draw of the same dimension.
pub fn fill_goe(s: &mut SymMatrix, stream: &mut RngStream) {
    let n = s.dim();
    let data = s.packed_mut();
    let mut k = 0;
    for i in 0..n {
        data[k] = std::f64::consts::SQRT_2 * stream.gaussian();
        k += n - i;
    }
    let mut k = 0;
    for i in 0..n {
        for x in &mut data[k + 1..k + n - i] {
            *x = stream.gaussian();
        }
        k += n - i;
    }
}

/// Only the diagonal of [`sample_goe`]: `n` independent `N(0, 2)` draws.
pub fn sample_goe_diag(n: usize, stream: &mut RngStream) -> Vec<f64> {
    (0..n)
        .map(|_| std::f64::consts::SQRT_2 * stream.gaussian())
        .collect()
}

/// Uniform point on `S^{m-1}` (normalized Gaussian vector).
pub fn sample_uniform_sphere(m: usize, stream: &mut RngStream) -> Vec<f64> {
    let mut x = vec![0.0; m];
    fill_uniform_sphere(&mut x, stream);
    x
}

pub(crate) fn fill_uniform_sphere(x: &mut [f64], stream: &mut RngStream) {
    loop {
        for xi in x.iter_mut() {
            *xi = stream.gaussian();
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            x.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}
