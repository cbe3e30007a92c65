//! Independent test-side oracles: hand-rolled Jacobi eigenvalues and Gaussian
//! elimination, used to cross-check the library's spectral and lattice code
//! against arithmetic it does not share.

#![allow(dead_code)]

use nalgebra::DVector;
use num_complex::Complex64;
use projlat::algebra::CMat;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps, ascending.
pub fn jacobi_eigenvalues_real(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..200 {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-14 * (1.0 + frob) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Eigenvalues of a complex Hermitian block via the real embedding
/// [[X, −Y], [Y, X]] of H = X + iY; each eigenvalue of H appears twice, so
/// the result (ascending, length 2n) doubles the spectrum.
pub fn hermitian_eigenvalues_doubled(h: &CMat) -> Vec<f64> {
    let n = h.nrows();
    let mut m = vec![vec![0.0f64; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let x = h[(i, j)].re;
            let y = h[(i, j)].im;
            m[i][j] = x;
            m[i + n][j + n] = x;
            m[i][j + n] = -y;
            m[i + n][j] = y;
        }
    }
    jacobi_eigenvalues_real(m)
}

/// Eigenvalues of a complex Hermitian block, ascending (de-doubled embedding).
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    let doubled = hermitian_eigenvalues_doubled(h);
    doubled.iter().step_by(2).copied().collect()
}

/// Singular values via the Hermitian oracle on x*x, descending.
pub fn singular_values(x: &CMat) -> Vec<f64> {
    let gram = x.adjoint() * x;
    let mut sv: Vec<f64> = hermitian_eigenvalues(&gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Rank by hand-rolled Gaussian elimination with partial pivoting.
pub fn elimination_rank(m: &CMat, tol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let (mut pivot_row, mut pivot_val) = (rank, a[(rank, col)].norm());
        for r in (rank + 1)..rows {
            if a[(r, col)].norm() > pivot_val {
                pivot_row = r;
                pivot_val = a[(r, col)].norm();
            }
        }
        if pivot_val <= tol {
            continue;
        }
        a.swap_rows(rank, pivot_row);
        let pivot = a[(rank, col)];
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let factor = a[(r, col)] / pivot;
            for c in col..cols {
                let sub = factor * a[(rank, c)];
                a[(r, c)] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of ran(e) ∩ ran(f) for projection blocks e, f: the nullity of
/// the stacked matrix [(1−e); (1−f)].
pub fn intersection_dim(e: &CMat, f: &CMat, tol: f64) -> usize {
    let n = e.nrows();
    let eye = CMat::identity(n, n);
    let mut stacked = CMat::zeros(2 * n, n);
    let top = &eye - e;
    let bottom = &eye - f;
    for i in 0..n {
        for j in 0..n {
            stacked[(i, j)] = top[(i, j)];
            stacked[(n + i, j)] = bottom[(i, j)];
        }
    }
    n - elimination_rank(&stacked, tol)
}

/// Dimension of ran(e) + ran(f) for projection blocks: the rank of [e | f].
pub fn span_dim(e: &CMat, f: &CMat, tol: f64) -> usize {
    let n = e.nrows();
    let mut side = CMat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            side[(i, j)] = e[(i, j)];
            side[(i, n + j)] = f[(i, j)];
        }
    }
    elimination_rank(&side, tol)
}

/// Binary digits of t ∈ [0, 1] by repeated doubling (independent of the
/// library's greedy subtraction).
pub fn binary_digits(mut t: f64, depth: usize) -> Vec<bool> {
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        t *= 2.0;
        if t >= 1.0 {
            out.push(true);
            t -= 1.0;
        } else {
            out.push(false);
        }
    }
    out
}

/// Unit column vector from complex entries (test convenience).
pub fn unit_vector(entries: &[Complex64]) -> DVector<Complex64> {
    let v = DVector::from_column_slice(entries);
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}
