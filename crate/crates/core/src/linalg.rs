//! Small dense linear algebra: generic fraction-free determinants, exact
//! kernels, and complex helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::scalar::{Scalar, C64};

/// Row-major dense matrix of scalars.
pub type Mat<S> = Vec<Vec<S>>;

/// Determinant by fraction-free (Bareiss) elimination. Pivots follow
/// [`Scalar::pivot_score`]: first nonzero in exact mode, largest modulus
/// in float mode.
pub fn det<S: Scalar>(m: &Mat<S>) -> S {
    let n = m.len();
    if n == 0 {
        return S::one();
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n {
        let mut best = k;
        let mut best_score = a[k][k].pivot_score();
        for (i, row) in a.iter().enumerate().skip(k + 1) {
            let s = row[k].pivot_score();
            if s > best_score {
                best = i;
                best_score = s;
            }
        }
        if best_score == 0.0 {
            return S::zero();
        }
        if best != k {
            a.swap(best, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
            a[i][k] = S::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<S: Scalar>(a: &mut Mat<S>) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut best = r;
        let mut best_score = a[r][c].pivot_score();
        for (i, row) in a.iter().enumerate().skip(r + 1) {
            let s = row[c].pivot_score();
            if s > best_score {
                best = i;
                best_score = s;
            }
        }
        if best_score == 0.0 {
            continue;
        }
        a.swap(best, r);
        let p = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = a[i][j].clone() - f.clone() * a[r][j].clone();
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank.
pub fn rank<S: Scalar>(a: &Mat<S>) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Basis of the right kernel `{v : A v = 0}`; exact when `S` is exact.
pub fn kernel<S: Scalar>(a: &Mat<S>, cols: usize) -> Vec<Vec<S>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b` for square nonsingular `A`; `None` when singular.
pub fn solve<S: Scalar>(a: &Mat<S>, b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut aug: Mat<S> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.iter().map(|r| r[n].clone()).collect())
}

pub fn to_dmatrix(a: &Mat<C64>) -> DMatrix<C64> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    DMatrix::from_fn(rows, cols, |i, j| a[i][j])
}

/// Singular values in decreasing order.
pub fn singular_values(a: &DMatrix<C64>) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Unit vector spanning the numerically smallest right singular direction
/// of `a` (works for wide and tall matrices), with the singular values.
pub fn null_vector(a: &DMatrix<C64>) -> (DVector<C64>, Vec<f64>) {
    let cols = a.ncols();
    // pad to square so nalgebra's thin SVD exposes a full V
    let m = if a.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let (idx, _) = sv
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty matrix");
    let v = v_t.row(idx).transpose().map(|c| c.conj());
    let mut sorted = sv;
    sorted.sort_by(|x, y| y.total_cmp(x));
    (v, sorted)
}

/// Solves a complex square system by LU; `None` if singular.
pub fn solve_c64(a: DMatrix<C64>, b: &DVector<C64>) -> Option<DVector<C64>> {
    a.lu().solve(b)
}

/// Inverse of a complex 3x3 or 4x4 matrix given row-major.
pub fn inverse_c64(a: &Mat<C64>) -> Option<Mat<C64>> {
    let m = to_dmatrix(a).try_inverse()?;
    Some((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect())
}

pub fn mat_vec(a: &Mat<C64>, v: &[C64]) -> Vec<C64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn transpose<S: Clone>(a: &Mat<S>) -> Mat<S> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity<S: Scalar>(n: usize) -> Mat<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(S::zero(), |acc, l| acc + a[i][l].clone() * b[l][j].clone()))
                .collect()
        })
        .collect()
}

pub fn trace<S: Scalar>(a: &Mat<S>) -> S {
    (0..a.len()).fold(S::zero(), |acc, i| acc + a[i][i].clone())
}

/// Euclidean norm of a complex vector.
pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(v: &[C64]) -> Vec<C64> {
    let n = norm(v);
    if n == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|c| c / n).collect()
    }
}

/// Cross product in C^3.
pub fn cross(a: &[C64], b: &[C64]) -> [C64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Hermitian dot `<a, b> = sum conj(a_i) b_i`.
pub fn hdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Bilinear dot `sum a_i b_i`.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis (rows) of `{x : r . x = 0 for every row r}` in C^n,
/// computed from the SVD; `rank` is the rank to assume. Pass conjugated
/// rows for the Hermitian complement.
pub fn complement_basis(rows: &[Vec<C64>], n: usize, rank: usize) -> Vec<Vec<C64>> {
    let mut m = DMatrix::<C64>::zeros(n, n);
    for (i, r) in rows.iter().enumerate().take(n) {
        for j in 0..n {
            m[(i, j)] = r[j];
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    idx[rank..]
        .iter()
        .map(|&k| (0..n).map(|j| v_t[(k, j)].conj()).collect())
        .collect()
}

/// Projective distance between two complex lines through the origin:
/// `sqrt(1 - |<u,v>|^2 / (|u|^2 |v|^2))`.
pub fn projective_distance(u: &[C64], v: &[C64]) -> f64 {
    let nu = norm(u);
    let nv = norm(v);
    if nu == 0.0 || nv == 0.0 {
        return 1.0;
    }
    let c = hdot(u, v).norm() / (nu * nv);
    (1.0 - (c * c).min(1.0)).max(0.0).sqrt()
}

/// Whether `x` is a nonzero exact scalar.
pub fn nonzero<S: Scalar>(x: &S) -> bool {
    !x.is_zero()
}

pub fn is_one<S: Scalar>(x: &S) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rational};
    use num_traits::Zero;

    fn qm(rows: &[&[i64]]) -> Mat<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = qm(&[&[0, 2, 1], &[3, -1, 4], &[5, 6, -2]]);
        // cofactor expansion by hand: 0*(2-24) - 2*(-6-20) + 1*(18+5) = 52+23 = 75
        assert_eq!(det(&m), rat_int(75));
        let c: Mat<C64> = m.iter().map(|r| r.iter().map(Scalar::to_c64).collect()).collect();
        assert!((det(&c) - C64::new(75.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = qm(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let s = row.iter().zip(v).fold(rat_int(0), |a, (x, y)| a + x * y);
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn singular_matrix_has_zero_det() {
        let m = qm(&[&[1, 2], &[2, 4]]);
        assert!(det(&m).is_zero());
        assert!(solve(&m, &[rat_int(1), rat_int(2)]).is_none());
    }
}
