//! Small dense complex least squares via normal equations, used by the
//! linear-prediction fit and sparse-model amplitude estimation. Problem
//! sizes here are tiny (order <= a few dozen unknowns).

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{DspError, Result};

/// Minimize ||A x - b|| for row-major A (m x n), with Tikhonov ridge
/// `lambda` (relative to the mean diagonal of A^H A) for conditioning.
pub(crate) fn lstsq(
    a: &[Complex64],
    m: usize,
    n: usize,
    b: &[Complex64],
    lambda: f64,
) -> Result<Vec<Complex64>> {
    debug_assert_eq!(a.len(), m * n);
    debug_assert_eq!(b.len(), m);
    if m < n || n == 0 {
        return Err(DspError::FitFailed("underdetermined least-squares system"));
    }
    // Normal equations: G = A^H A, rhs = A^H b.
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for r in 0..m {
        let row = &a[r * n..(r + 1) * n];
        for i in 0..n {
            let ci = row[i].conj();
            rhs[i] += ci * b[r];
            for j in i..n {
                g[i * n + j] += ci * row[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            g[i * n + j] = g[j * n + i].conj();
        }
    }
    let trace: f64 = (0..n).map(|i| g[i * n + i].re).sum();
    let ridge = lambda * (trace / n as f64).max(f64::MIN_POSITIVE);
    for i in 0..n {
        g[i * n + i] += Complex64::new(ridge, 0.0);
    }
    solve_in_place(&mut g, &mut rhs, n)?;
    Ok(rhs)
}

/// Gaussian elimination with partial pivoting on an n x n complex system.
fn solve_in_place(g: &mut [Complex64], rhs: &mut [Complex64], n: usize) -> Result<()> {
    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, g[r * n + col].norm_sqr()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if pivot_mag <= f64::MIN_POSITIVE {
            return Err(DspError::FitFailed("singular normal equations"));
        }
        if pivot_row != col {
            for j in 0..n {
                g.swap(col * n + j, pivot_row * n + j);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = g[col * n + col];
        for r in col + 1..n {
            let factor = g[r * n + col] / pivot;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = g[col * n + j];
                g[r * n + j] -= factor * v;
            }
            let v = rhs[col];
            rhs[r] -= factor * v;
        }
    }
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for j in col + 1..n {
            acc -= g[col * n + j] * rhs[j];
        }
        rhs[col] = acc / g[col * n + col];
    }
    Ok(())
}
