//! Symmetric tridiagonal eigensolver (implicit-shift QL), used for the
//! unitary propagator and for Gauss-Hermite nodes.
//!
//! This is the classic EISPACK `tql2`/`imtql1` iteration: eigenvalues of a
//! real symmetric tridiagonal matrix with diagonal `d` and off-diagonal
//! `e`, optionally accumulating the orthogonal eigenvector matrix.

use crate::error::{Error, Result};

/// Ascending eigenvalues plus (optionally) the eigenvector matrix, stored
/// one eigenvector per inner vector.
pub type EigenDecomposition = (Vec<f64>, Option<Vec<Vec<f64>>>);

/// Eigen-decomposition of a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal (length `n`), `e` the off-diagonal (length
/// `n - 1`). Returns ascending eigenvalues and, when `want_vectors` is set,
/// the column-major eigenvector matrix `q` with `q[k][i]` the `i`-th
/// component of the `k`-th eigenvector.
pub fn sym_tridiag_eigen(d: &[f64], e: &[f64], want_vectors: bool) -> Result<EigenDecomposition> {
    let n = d.len();
    if n == 0 {
        return Err(Error::Parameter("empty matrix".into()));
    }
    if e.len() + 1 != n {
        return Err(Error::Parameter(format!(
            "off-diagonal length {} does not match dimension {}",
            e.len(),
            n
        )));
    }

    let mut d = d.to_vec();
    // Workspace off-diagonal padded with a trailing zero.
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();
    let mut q: Option<Vec<Vec<f64>>> = if want_vectors {
        let mut id = vec![vec![0.0; n]; n];
        for (k, col) in id.iter_mut().enumerate() {
            col[k] = 1.0;
        }
        Some(id)
    } else {
        None
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find a small off-diagonal element splitting the matrix.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Parameter(
                    "tridiagonal QL iteration failed to converge".into(),
                ));
            }

            // Wilkinson shift.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;

            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated early; drop the sweep and retry.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                if let Some(q) = q.as_mut() {
                    let (head, tail) = q.split_at_mut(i + 1);
                    for (a, t) in head[i].iter_mut().zip(tail[0].iter_mut()) {
                        let v = *t;
                        *t = s * *a + c * v;
                        *a = c * *a - s * v;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, permuting eigenvectors along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let sorted_d: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let sorted_q = q.map(|q| order.iter().map(|&i| q[i].clone()).collect());
    Ok((sorted_d, sorted_q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let (vals, _) = sym_tridiag_eigen(&[2.0, 2.0], &[1.0], false).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn free_laplacian_eigenvalues() {
        // Second-difference matrix: eigenvalues 2 - 2 cos(k pi / (n+1)).
        let n = 24;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let (vals, _) = sym_tridiag_eigen(&d, &e, false).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - want).abs() < 1e-12, "k={k}: {v} vs {want}");
        }
    }

    #[test]
    fn eigenvectors_reconstruct_and_are_orthogonal() {
        // Pseudo-random symmetric tridiagonal matrix.
        let n = 40;
        let mut state = 0x1234_5678_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let d: Vec<f64> = (0..n).map(|_| 4.0 * next()).collect();
        let e: Vec<f64> = (0..n - 1).map(|_| 4.0 * next()).collect();
        let (vals, q) = sym_tridiag_eigen(&d, &e, true).unwrap();
        let q = q.unwrap();

        // Orthonormality of eigenvectors.
        for a in 0..n {
            for b in a..n {
                let dot: f64 = (0..n).map(|i| q[a][i] * q[b][i]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12, "a={a} b={b} dot={dot}");
            }
        }

        // T q_k = lambda_k q_k.
        for k in 0..n {
            for i in 0..n {
                let mut t = d[i] * q[k][i];
                if i > 0 {
                    t += e[i - 1] * q[k][i - 1];
                }
                if i + 1 < n {
                    t += e[i] * q[k][i + 1];
                }
                assert!((t - vals[k] * q[k][i]).abs() < 1e-11, "k={k} i={i}");
            }
        }
    }

    #[test]
    fn handles_decoupled_blocks() {
        // A zero off-diagonal entry must not confuse the iteration.
        let (vals, _) = sym_tridiag_eigen(&[1.0, 5.0, 2.0, 2.0], &[0.5, 0.0, 1.0], false).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        // Block [[2,1],[1,2]] contributes 1 and 3.
        assert!(vals.iter().any(|v| (v - 1.0).abs() < 1e-13));
        assert!(vals.iter().any(|v| (v - 3.0).abs() < 1e-13));
    }
}
