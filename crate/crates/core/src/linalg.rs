//! Packed symmetric matrices, principal minors and a small dense symmetric
//! eigensolver.
//!
//! Matrices here are tiny (minors of size `m`, rarely above 16), so the
//! reference solver is cyclic Jacobi. Dimensions 1 and 2 are handled in
//! closed form.

use crate::error::{Error, Result};

/// Maximum number of full cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 30;

/// Jacobi stops once the off-diagonal norm is at most this times `‖S‖_F`.
pub const JACOBI_REL_TOL: f64 = 1e-12;

/// Real symmetric matrix storing the upper triangle row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

#[inline]
fn packed_len(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        Ok(SymMatrix {
            dim,
            data: vec![0.0; packed_len(dim)],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut s = Self::zeros(dim)?;
        for i in 0..dim {
            s.set(i, i, 1.0);
        }
        Ok(s)
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        let mut s = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            s.set(i, i, d);
        }
        s.check_finite()?;
        Ok(s)
    }

    /// Build from `f(i, j)` evaluated on the upper triangle `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut s = Self::zeros(dim)?;
        for i in 0..dim {
            for j in i..dim {
                s.set(i, j, f(i, j));
            }
        }
        s.check_finite()?;
        Ok(s)
    }

    /// Build from the packed upper triangle (row-major).
    pub fn from_packed(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() != packed_len(dim) {
            return Err(Error::invalid(format!(
                "packed length {} does not match dimension {dim}",
                data.len()
            )));
        }
        let s = SymMatrix { dim, data };
        s.check_finite()?;
        Ok(s)
    }

    /// Build from dense rows, rejecting input whose lower and upper triangles
    /// differ by more than `sym_tol`.
    pub fn from_rows(rows: &[Vec<f64>], sym_tol: f64) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("matrix rows must all have length equal to the row count"));
        }
        for i in 0..dim {
            for j in i + 1..dim {
                if (rows[i][j] - rows[j][i]).abs() > sym_tol {
                    return Err(Error::invalid(format!(
                        "matrix is not symmetric at ({i}, {j}): {} vs {}",
                        rows[i][j], rows[j][i]
                    )));
                }
            }
        }
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::invalid("matrix entries must be finite"))
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * (2 * self.dim + 1 - i) / 2 + (j - i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.offset(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.offset(i, j);
        self.data[k] = value;
    }

    pub fn packed(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn packed_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.get(i, j);
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        out
    }
}

/// Check that `alpha` is nonempty, strictly increasing and below `dim`.
pub fn validate_subset(alpha: &[usize], dim: usize) -> Result<()> {
    if alpha.is_empty() {
        return Err(Error::invalid("index subset must be nonempty"));
    }
    if alpha.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!(
            "index subset {alpha:?} is not strictly increasing"
        )));
    }
    if *alpha.last().unwrap() >= dim {
        return Err(Error::invalid(format!(
            "index subset {alpha:?} out of range for dimension {dim}"
        )));
    }
    Ok(())
}

/// The principal minor `S_α`.
pub fn principal_minor(s: &SymMatrix, alpha: &[usize]) -> Result<SymMatrix> {
    validate_subset(alpha, s.dim())?;
    Ok(principal_minor_unchecked(s, alpha))
}

pub(crate) fn principal_minor_unchecked(s: &SymMatrix, alpha: &[usize]) -> SymMatrix {
    let m = alpha.len();
    let mut data = Vec::with_capacity(packed_len(m));
    for (a, &i) in alpha.iter().enumerate() {
        for &j in &alpha[a..] {
            data.push(s.get(i, j));
        }
    }
    SymMatrix { dim: m, data }
}

/// `Tr S² = Σ sᵢᵢ² + 2 Σ_{i<j} sᵢⱼ²`.
pub fn frobenius_sq(s: &SymMatrix) -> f64 {
    let n = s.dim();
    let mut diag = 0.0;
    let mut off = 0.0;
    let mut k = 0;
    for i in 0..n {
        diag += s.data[k] * s.data[k];
        for x in &s.data[k + 1..k + n - i] {
            off += x * x;
        }
        k += n - i;
    }
    diag + 2.0 * off
}

/// Eigenvalues in non-increasing order, optionally with orthonormal
/// eigenvectors (column `i` pairs with eigenvalue `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column-major `dim × dim`.
    eigenvectors: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn has_vectors(&self) -> bool {
        self.eigenvectors.is_some()
    }

    /// Eigenvector paired with `eigenvalues[i]`.
    pub fn eigenvector(&self, i: usize) -> Option<&[f64]> {
        let n = self.dim();
        self.eigenvectors.as_ref().map(|v| &v[i * n..(i + 1) * n])
    }
}

/// 2×2 eigenvalues `(λ₁, λ₂)` of `[[a, b], [b, c]]`.
#[inline]
pub fn eig2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mid = 0.5 * (a + c);
    let h = 0.5 * (a - c);
    let r = (h * h + b * b).sqrt();
    (mid + r, mid - r)
}

/// Largest eigenvalue of `[[a, b], [b, c]]`.
#[inline]
pub fn lambda1_2x2(a: f64, b: f64, c: f64) -> f64 {
    let h = 0.5 * (a - c);
    0.5 * (a + c) + (h * h + b * b).sqrt()
}

/// Unit eigenvector of `[[a, b], [b, c]]` for eigenvalue `lambda`.
fn eigvec2(a: f64, b: f64, c: f64, lambda: f64) -> [f64; 2] {
    // (S - λI) v = 0 gives two candidate directions; take the better conditioned.
    let u = [b, lambda - a];
    let w = [lambda - c, b];
    let nu = u[0].hypot(u[1]);
    let nw = w[0].hypot(w[1]);
    if nu == 0.0 && nw == 0.0 {
        // S = λI
        return [1.0, 0.0];
    }
    if nu >= nw {
        [u[0] / nu, u[1] / nu]
    } else {
        [w[0] / nw, w[1] / nw]
    }
}

/// Full symmetric eigendecomposition.
pub fn eig_sym(s: &SymMatrix, want_vectors: bool) -> Result<Spectrum> {
    match s.dim() {
        1 => Ok(Spectrum {
            eigenvalues: vec![s.get(0, 0)],
            eigenvectors: want_vectors.then(|| vec![1.0]),
        }),
        2 => {
            let (a, b, c) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
            let (l1, l2) = eig2(a, b, c);
            let eigenvectors = want_vectors.then(|| {
                let v = eigvec2(a, b, c, l1);
                vec![v[0], v[1], -v[1], v[0]]
            });
            Ok(Spectrum {
                eigenvalues: vec![l1, l2],
                eigenvectors,
            })
        }
        _ => jacobi(s, want_vectors),
    }
}

fn jacobi(s: &SymMatrix, want_vectors: bool) -> Result<Spectrum> {
    let n = s.dim();
    let mut a = s.to_dense();
    let mut v = if want_vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        Some(v)
    } else {
        None
    };

    let tol = JACOBI_REL_TOL * frobenius_sq(s).sqrt();
    let off_norm = |a: &[f64]| -> f64 {
        let mut acc = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                acc += a[p * n + q] * a[p * n + q];
            }
        }
        (2.0 * acc).sqrt()
    };

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - sn * akq;
                    a[k * n + q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sn * aqk;
                    a[q * n + k] = sn * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    // v is row-major here; columns are eigenvectors.
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - sn * vkq;
                        v[k * n + q] = sn * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(Error::numerical(format!(
            "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (dim {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let eigenvalues = order.iter().map(|&i| a[i * n + i]).collect();
    let eigenvectors = v.map(|v| {
        let mut cols = Vec::with_capacity(n * n);
        for &i in &order {
            cols.extend((0..n).map(|k| v[k * n + i]));
        }
        cols
    });
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Largest eigenvalue. Closed form (no iteration) for dimensions 1 and 2.
pub fn lambda1(s: &SymMatrix) -> Result<f64> {
    match s.dim() {
        1 => Ok(s.get(0, 0)),
        2 => Ok(lambda1_2x2(s.get(0, 0), s.get(0, 1), s.get(1, 1))),
        _ => Ok(eig_sym(s, false)?.eigenvalues[0]),
    }
}

/// `λ₁*(S) = √((λ₁(S)² + Tr S²) / 2)`.
pub fn lambda1_star(s: &SymMatrix) -> Result<f64> {
    let l = lambda1(s)?;
    Ok(lambda1_star_from(l, frobenius_sq(s)))
}

#[inline]
pub(crate) fn lambda1_star_from(lambda1: f64, frob_sq: f64) -> f64 {
    (0.5 * (lambda1 * lambda1 + frob_sq)).sqrt()
}

/// Flip `v` so that its largest-magnitude coordinate (lowest index on ties)
/// is positive.
pub fn canonicalize_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Unit eigenvector for the largest eigenvalue, sign-canonicalized.
pub fn top_eigvec(s: &SymMatrix) -> Result<Vec<f64>> {
    let mut v = match s.dim() {
        1 => vec![1.0],
        2 => {
            let (a, b, c) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
            eigvec2(a, b, c, lambda1_2x2(a, b, c)).to_vec()
        }
        _ => {
            let spec = eig_sym(s, true)?;
            spec.eigenvector(0).expect("vectors requested").to_vec()
        }
    };
    canonicalize_sign(&mut v);
    Ok(v)
}
