//! Jacobi-based spectral routines for the small dense matrices used here.
//!
//! Hermitian eigenvalues go through the real symmetric embedding
//! `[[Re H, -Im H], [Im H, Re H]]`, whose spectrum is that of `H` with every
//! eigenvalue doubled. The SVD is one-sided (Hestenes) Jacobi on the columns,
//! which keeps small singular values accurate.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::{Matrix, TOL_DEGENERATE};

const MAX_SWEEPS: usize = 100;

/// Singular values below this are treated as exact zeros when building the left basis.
pub const SVD_ZERO: f64 = 1e-13;

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the Hermitian part `(H + H†)/2` is read, so a slightly asymmetric input
/// yields the spectrum of its nearest Hermitian matrix. Panics if `h` is not square.
pub fn hermitian_eigenvalues(h: &Matrix) -> Vec<f64> {
    assert!(h.is_square(), "eigenvalues of a non-square matrix");
    let n = h.rows();
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let mut evals = symmetric_eigenvalues(a, m);
    evals.sort_by(|x, y| x.total_cmp(y));
    evals.into_iter().step_by(2).collect()
}

fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off == 0.0 || off <= f64::EPSILON * f64::EPSILON * total * 1e-4 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Thin singular value decomposition `M = left · diag(values) · right†`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Non-negative, descending; `min(rows, cols)` entries.
    pub values: Vec<f64>,
    /// `rows × k` with orthonormal columns.
    pub left: Matrix,
    /// `cols × k` with orthonormal columns.
    pub right: Matrix,
}

impl Svd {
    pub fn reconstruct(&self) -> Matrix {
        let sigma: Vec<Complex64> = self.values.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        &(&self.left * &Matrix::diag(&sigma)) * &self.right.adjoint()
    }
}

/// One-sided Jacobi SVD.
///
/// Singular values that agree within [`TOL_DEGENERATE`] are ordered by the index
/// of the first non-negligible component of their left vector, then by column
/// position, so equal-coefficient inputs decompose deterministically.
pub fn svd(m: &Matrix) -> Svd {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); cols];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let frob: f64 = (0..cols).map(|j| norm_sqr(&w[j])).sum();
    let tol = rows.max(1) as f64 * f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = norm_sqr(&w[p]);
                let beta = norm_sqr(&w[q]);
                let gamma: Complex64 = w[p].iter().zip(&w[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                // columns already at roundoff level carry no information
                let negligible = alpha <= tol * tol * frob || beta <= tol * tol * frob;
                if g == 0.0 || negligible || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let sign = if zeta < 0.0 { -1.0 } else { 1.0 };
                let t = sign / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = w.iter().map(|col| norm_sqr(col).sqrt()).collect();
    let leading: Vec<usize> = w
        .iter()
        .zip(&sigma)
        .map(|(col, &s)| {
            if s <= SVD_ZERO {
                usize::MAX
            } else {
                col.iter().position(|z| z.norm() / s > TOL_DEGENERATE).unwrap_or(usize::MAX)
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    // Re-order runs of (numerically) equal values by the tie-break key.
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && (sigma[order[end - 1]] - sigma[order[end]]).abs() < TOL_DEGENERATE {
            end += 1;
        }
        order[start..end].sort_by(|&a, &b| match leading[a].cmp(&leading[b]) {
            Ordering::Equal => a.cmp(&b),
            o => o,
        });
        start = end;
    }

    let k = rows.min(cols);
    let chosen = &order[..k];
    let values: Vec<f64> = chosen.iter().map(|&j| sigma[j]).collect();

    let mut left_cols: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut missing = Vec::new();
    for (slot, &j) in chosen.iter().enumerate() {
        if sigma[j] > SVD_ZERO {
            left_cols.push(w[j].iter().map(|z| z / sigma[j]).collect());
        } else {
            left_cols.push(Vec::new());
            missing.push(slot);
        }
    }
    for slot in missing {
        let existing: Vec<Vec<Complex64>> = left_cols.iter().filter(|c| !c.is_empty()).cloned().collect();
        left_cols[slot] = complete_basis(&existing, rows);
    }

    let left = Matrix::from_fn(rows, k, |i, c| left_cols[c][i]);
    let right = Matrix::from_fn(cols, k, |i, c| v[chosen[c]][i]);
    Svd { values, left, right }
}

fn rotate_columns(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    debug_assert!(p < q);
    let (head, tail) = cols.split_at_mut(q);
    for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
        let a = *x;
        let b = *y * phase;
        *x = a * c - b * s;
        *y = a * s + b * c;
    }
}

/// A unit vector orthogonal to every column in `existing`, drawn from the standard
/// basis candidate with the largest residual.
pub(crate) fn complete_basis(existing: &[Vec<Complex64>], dim: usize) -> Vec<Complex64> {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for e in 0..dim {
        let mut cand = vec![Complex64::new(0.0, 0.0); dim];
        cand[e] = Complex64::new(1.0, 0.0);
        // twice for numerical orthogonality
        for _ in 0..2 {
            for col in existing {
                let proj: Complex64 = col.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in cand.iter_mut().zip(col) {
                    *x -= proj * y;
                }
            }
        }
        let n = norm_sqr(&cand).sqrt();
        if best.as_ref().is_none_or(|(bn, _)| n > *bn + 1e-12) {
            best = Some((n, cand));
        }
    }
    let (n, cand) = best.expect("dimension must be positive");
    cand.into_iter().map(|z| z / n).collect()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
