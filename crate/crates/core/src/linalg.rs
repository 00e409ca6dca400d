//! Small dense linear algebra: symmetric tridiagonal QL, Householder
//! reduction for full symmetric spectra, and Householder QR least squares.
//!
//! Everything here is desk-scale (n up to a few thousand) and written for
//! determinism, not speed.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Eigenvalues plus (optionally) the matching eigenvectors.
pub type EigenPairs = (Vec<f64>, Option<Vec<Vec<f64>>>);

/// Eigen-decomposition of a symmetric tridiagonal matrix by QL with implicit
/// shifts.
///
/// `diag` has length n, `offdiag` length n-1. Returns eigenvalues in
/// ascending order; when `want_vectors` is set also the matching
/// orthonormal eigenvectors (each of length n, column `j` of the rotation
/// product belongs to eigenvalue `j`).
pub fn sym_tridiag_eigen(diag: &[f64], offdiag: &[f64], want_vectors: bool) -> Result<EigenPairs> {
    let n = diag.len();
    assert_eq!(offdiag.len() + 1, n.max(1), "offdiag must have length n-1");
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(Vec::new)));
    }
    let mut d = diag.to_vec();
    // NR-style layout: e[0] unused, e[i] couples i-1 and i shifted down below
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(offdiag);

    // z[k] is row k of the accumulated rotation matrix
    let mut z: Vec<Vec<f64>> = if want_vectors {
        (0..n)
            .map(|k| {
                let mut row = vec![0.0; n];
                row[k] = 1.0;
                row
            })
            .collect()
    } else {
        Vec::new()
    };

    // negligibility floor so zero-diagonal stretches cannot stall the scan
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |m, &x| m.max(math::abs(x)));
    let floor = f64::EPSILON * scale;

    for l in 0..n {
        let mut iter = 0;
        loop {
            // find the first negligible off-diagonal at or after l
            let mut m = l;
            while m < n - 1 {
                let dd = math::abs(d[m]) + math::abs(d[m + 1]);
                if math::abs(e[m]) <= f64::EPSILON * dd + floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::NoConvergence { iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0_f64;
            let mut underflowed = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if want_vectors {
                    for row in z.iter_mut() {
                        let f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // sort ascending, carrying vectors along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let vectors = want_vectors.then(|| {
        order
            .iter()
            .map(|&j| (0..n).map(|k| z[k][j]).collect())
            .collect()
    });
    Ok((values, vectors))
}

/// Full eigenvalue spectrum (ascending) of a dense symmetric matrix, given
/// row-major storage. Householder reduction to tridiagonal form, then QL.
///
/// Intended for cross-checks at dimensions up to a few thousand.
#[allow(clippy::needless_range_loop)] // strided column walks read clearer indexed
pub fn dense_sym_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    let mut m = a.to_vec();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];

    // Golub & Van Loan Alg. 8.3.1, operating on the trailing block
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the diagonal
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += m[i * n + k] * m[i * n + k];
        }
        let x0 = m[(k + 1) * n + k];
        let norm = math::sqrt(norm2);
        off[k] = if x0 >= 0.0 { -norm } else { norm };
        if norm == 0.0 {
            continue;
        }
        v[k + 1] = x0 - off[k];
        for i in k + 2..n {
            v[i] = m[i * n + k]; // strided column access
        }
        let mut vnorm2 = 0.0;
        for i in k + 1..n {
            vnorm2 += v[i] * v[i];
        }
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // p = beta * A v on the trailing block
        for i in k + 1..n {
            let mut acc = 0.0;
            for j in k + 1..n {
                acc += m[i * n + j] * v[j];
            }
            p[i] = beta * acc;
        }
        let mut pv = 0.0;
        for i in k + 1..n {
            pv += p[i] * v[i];
        }
        for i in k + 1..n {
            w[i] = p[i] - 0.5 * beta * pv * v[i];
        }
        // A <- A - v w' - w v'
        for i in k + 1..n {
            for j in k + 1..n {
                m[i * n + j] -= v[i] * w[j] + w[i] * v[j];
            }
        }
    }
    for i in 0..n {
        diag[i] = m[i * n + i];
    }
    if n >= 2 {
        off[n - 2] = m[(n - 1) * n + (n - 2)];
    }
    let (values, _) = sym_tridiag_eigen(&diag, &off, false)?;
    Ok(values)
}

/// Ordinary least squares min ||A x - b|| by Householder QR with column
/// equilibration.
///
/// `a` is row-major with `rows` x `cols`, rows >= cols. Returns the solution,
/// the residual vector A x - b, and the magnitudes of the R diagonal scaled
/// back to the original columns (a conditioning diagnostic: ratio max/min
/// estimates the spread of singular values).
pub fn qr_least_squares(
    a: &[f64],
    rows: usize,
    cols: usize,
    b: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    assert_eq!(a.len(), rows * cols);
    assert_eq!(b.len(), rows);
    if rows < cols || cols == 0 {
        return Err(Error::RankDeficient);
    }
    let mut q = a.to_vec();
    let mut y = b.to_vec();

    // scale each column to unit norm; recovered below
    let mut col_scale = vec![1.0f64; cols];
    for j in 0..cols {
        let norm = math::sqrt((0..rows).map(|i| q[i * cols + j] * q[i * cols + j]).sum());
        if norm == 0.0 {
            return Err(Error::RankDeficient);
        }
        col_scale[j] = norm;
        for i in 0..rows {
            q[i * cols + j] /= norm;
        }
    }

    for k in 0..cols {
        let mut norm2 = 0.0;
        for i in k..rows {
            norm2 += q[i * cols + k] * q[i * cols + k];
        }
        let norm = math::sqrt(norm2);
        if norm == 0.0 {
            return Err(Error::RankDeficient);
        }
        let x0 = q[k * cols + k];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let v0 = x0 - alpha;
        // implicit v = [v0, q[k+1.., k]]
        let mut vnorm2 = v0 * v0;
        for i in k + 1..rows {
            vnorm2 += q[i * cols + k] * q[i * cols + k];
        }
        if vnorm2 == 0.0 {
            q[k * cols + k] = alpha;
            continue;
        }
        let beta = 2.0 / vnorm2;
        for j in k + 1..cols {
            let mut dot = v0 * q[k * cols + j];
            for i in k + 1..rows {
                dot += q[i * cols + k] * q[i * cols + j];
            }
            let t = beta * dot;
            q[k * cols + j] -= t * v0;
            for i in k + 1..rows {
                q[i * cols + j] -= t * q[i * cols + k];
            }
        }
        {
            let mut dot = v0 * y[k];
            for i in k + 1..rows {
                dot += q[i * cols + k] * y[i];
            }
            let t = beta * dot;
            y[k] -= t * v0;
            for i in k + 1..rows {
                y[i] -= t * q[i * cols + k];
            }
        }
        q[k * cols + k] = alpha;
    }

    let r_diag: Vec<f64> = (0..cols)
        .map(|k| math::abs(q[k * cols + k]) * col_scale[k])
        .collect();
    let scaled_diag: Vec<f64> = (0..cols).map(|k| math::abs(q[k * cols + k])).collect();
    let max_r = scaled_diag.iter().cloned().fold(0.0, f64::max);
    let tiny = max_r * f64::EPSILON * rows as f64;
    if scaled_diag.iter().any(|&r| r <= tiny) {
        return Err(Error::RankDeficient);
    }

    // back substitution R x = y[..cols], then undo the column scaling
    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut acc = y[k];
        for j in k + 1..cols {
            acc -= q[k * cols + j] * x[j];
        }
        x[k] = acc / q[k * cols + k];
    }
    for k in 0..cols {
        x[k] /= col_scale[k];
    }

    let mut residual = vec![0.0; rows];
    for i in 0..rows {
        let mut acc = -b[i];
        for j in 0..cols {
            acc += a[i * cols + j] * x[j];
        }
        residual[i] = acc;
    }
    Ok((x, residual, r_diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::SplitMix64;

    fn random_symmetric(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = SplitMix64::new(seed);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = rng.next_signed();
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        a
    }

    #[test]
    fn tridiag_matches_nalgebra() {
        let n = 40;
        let mut rng = SplitMix64::new(1);
        let diag: Vec<f64> = (0..n).map(|_| rng.next_signed()).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| rng.next_signed()).collect();

        let (vals, vecs) = sym_tridiag_eigen(&diag, &off, true).unwrap();
        let vecs = vecs.unwrap();

        let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            dense[(i, i)] = diag[i];
            if i + 1 < n {
                dense[(i, i + 1)] = off[i];
                dense[(i + 1, i)] = off[i];
            }
        }
        let mut reference: Vec<f64> = dense
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        reference.sort_by(f64::total_cmp);
        for (a, b) in vals.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        // residual check T v = lambda v
        for (j, v) in vecs.iter().enumerate() {
            for i in 0..n {
                let mut acc = diag[i] * v[i];
                if i > 0 {
                    acc += off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += off[i] * v[i + 1];
                }
                assert!((acc - vals[j] * v[i]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn dense_matches_nalgebra() {
        for (n, seed) in [(5usize, 3u64), (24, 4), (60, 5)] {
            let a = random_symmetric(n, seed);
            let vals = dense_sym_eigenvalues(&a, n).unwrap();
            let m = nalgebra::DMatrix::from_row_slice(n, n, &a);
            let mut reference: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().cloned().collect();
            reference.sort_by(f64::total_cmp);
            for (x, y) in vals.iter().zip(&reference) {
                assert!((x - y).abs() < 1e-10 * (n as f64), "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn dense_diagonal_passthrough() {
        let a = vec![3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        let vals = dense_sym_eigenvalues(&a, 3).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn least_squares_recovers_exact_model() {
        // y = 2 - 3 x + 0.5 x^2 sampled without noise
        let xs: Vec<f64> = (0..12).map(|i| 0.3 * i as f64 - 1.0).collect();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &x in &xs {
            a.extend_from_slice(&[1.0, x, x * x]);
            b.push(2.0 - 3.0 * x + 0.5 * x * x);
        }
        let (coef, residual, _) = qr_least_squares(&a, xs.len(), 3, &b).unwrap();
        assert!((coef[0] - 2.0).abs() < 1e-12);
        assert!((coef[1] + 3.0).abs() < 1e-12);
        assert!((coef[2] - 0.5).abs() < 1e-12);
        assert!(residual.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn least_squares_detects_rank_deficiency() {
        // two identical columns
        let a = vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0];
        let b = vec![1.0, 2.0, 3.0, 4.0];
        assert!(matches!(
            qr_least_squares(&a, 4, 2, &b),
            Err(Error::RankDeficient)
        ));
    }
}
