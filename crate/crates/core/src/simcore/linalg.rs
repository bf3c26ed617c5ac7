//! Small dense Hermitian kernels for the L×L covariance matrices.

use num_complex::Complex64;

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix,
/// stored row-major.
#[derive(Debug, Clone)]
pub(crate) struct Cholesky {
    n: usize,
    lower: Vec<Complex64>,
}

impl Cholesky {
    /// Factors the row-major Hermitian matrix `a` (n×n). Returns `None` when
    /// a pivot is not strictly positive.
    pub(crate) fn factor(a: &[Complex64], n: usize) -> Option<Self> {
        let mut lower = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = a[i * n + j];
                for k in 0..j {
                    sum -= lower[i * n + k] * lower[j * n + k].conj();
                }
                if i == j {
                    let pivot = sum.re;
                    if !(pivot > 0.0) || !pivot.is_finite() {
                        return None;
                    }
                    lower[i * n + i] = Complex64::new(pivot.sqrt(), 0.0);
                } else {
                    lower[i * n + j] = sum / lower[j * n + j].re;
                }
            }
        }
        Some(Self { n, lower })
    }

    /// `h^H A^{-1} h = ‖L^{-1} h‖²`.
    pub(crate) fn inverse_quadratic_form(&self, h: &[Complex64], scratch: &mut [Complex64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            let mut sum = h[i];
            for k in 0..i {
                sum -= self.lower[i * n + k] * scratch[k];
            }
            let y = sum / self.lower[i * n + i].re;
            scratch[i] = y;
            acc += y.norm_sqr();
        }
        acc
    }
}

/// Adds `weight·h·h^H` to the row-major n×n matrix `a`.
#[inline]
pub(crate) fn add_outer(a: &mut [Complex64], h: &[Complex64], weight: f64) {
    let n = h.len();
    for i in 0..n {
        let hi = h[i] * weight;
        for j in 0..n {
            a[i * n + j] += hi * h[j].conj();
        }
    }
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub(crate) fn gauss_jordan_inverse(a: &[Complex64], n: usize) -> Option<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = a.to_vec();
    let mut inv = vec![zero; n * n];
    for i in 0..n {
        inv[i * n + i] = one;
    }
    for col in 0..n {
        let pivot_row =
            (col..n).max_by(|&r, &s| m[r * n + col].norm().total_cmp(&m[s * n + col].norm()))?;
        let pivot = m[pivot_row * n + col];
        if pivot.norm() == 0.0 || !pivot.norm().is_finite() {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                m.swap(col * n + k, pivot_row * n + k);
                inv.swap(col * n + k, pivot_row * n + k);
            }
        }
        let scale = one / pivot;
        for k in 0..n {
            m[col * n + k] *= scale;
            inv[col * n + k] *= scale;
        }
        for r in 0..n {
            if r != col {
                let factor = m[r * n + col];
                if factor != zero {
                    for k in 0..n {
                        let mv = m[col * n + k];
                        let iv = inv[col * n + k];
                        m[r * n + k] -= factor * mv;
                        inv[r * n + k] -= factor * iv;
                    }
                }
            }
        }
    }
    Some(inv)
}
