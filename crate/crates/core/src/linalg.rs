//! Exact Gaussian elimination over the rationals: rank, kernels, particular solutions, and the
//! pivoted LDLᵀ test for positive semidefiniteness.

use num::{One, Signed, Zero};

use crate::rat::{dot, mat_vec, zeros, RMat, RVec, Rat};

/// Reduced row echelon form. Returns the reduced matrix and the pivot column of each nonzero row.
pub fn rref(m: &[RVec], cols: usize) -> (RMat, Vec<usize>) {
    let mut a: RMat = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Rat::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        let prow = a[row].clone();
        for (r, other) in a.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (x, p) in other.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    a.truncate(row);
    (a, pivots)
}

pub fn rank(m: &[RVec], cols: usize) -> usize {
    rref(m, cols).1.len()
}

/// Basis of `{x : m x = 0}`.
pub fn kernel(m: &[RVec], cols: usize) -> RMat {
    let (r, pivots) = rref(m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(cols);
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = rhs` (free variables set to zero), or `None` when inconsistent.
pub fn solve(m: &[RVec], rhs: &[Rat], cols: usize) -> Option<RVec> {
    let aug: RMat = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = zeros(cols);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Basis of the row space (a maximal independent subset of the rows, in order).
pub fn independent_rows(m: &[RVec], cols: usize) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut basis: RMat = Vec::new();
    for (i, row) in m.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis, cols) == basis.len() {
            kept.push(i);
        } else {
            basis.pop();
        }
    }
    kept
}

/// Orthogonal complement of the span of `vs` in ℝⁿ.
pub fn orth_complement(vs: &[RVec], n: usize) -> RMat {
    kernel(vs, n)
}

/// Column space basis of a matrix given by columns.
pub fn span_basis(vs: &[RVec], n: usize) -> RMat {
    independent_rows(vs, n)
        .into_iter()
        .map(|i| vs[i].clone())
        .collect()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[RVec], v: &[Rat], n: usize) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let mut m = basis.to_vec();
    let r = rank(&m, n);
    m.push(v.to_vec());
    rank(&m, n) == r
}

/// Pivoted LDLᵀ on a symmetric matrix: true iff the matrix is positive semidefinite.
///
/// Positive pivots are eliminated by Schur complement. When every remaining diagonal entry is
/// `<= 0`, a negative entry refutes semidefiniteness, and a zero entry must carry an all-zero
/// row and column.
pub fn is_psd(m: &[RVec]) -> bool {
    let mut a: RMat = m.to_vec();
    let mut active: Vec<usize> = (0..a.len()).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| a[i][i].is_negative()) {
            return false;
        }
        match active.iter().position(|&i| a[i][i].is_positive()) {
            Some(k) => {
                let p = active.remove(k);
                let piv = a[p][p].clone();
                for &i in &active {
                    if a[i][p].is_zero() {
                        continue;
                    }
                    let f = &a[i][p] / &piv;
                    for &j in &active {
                        if !a[p][j].is_zero() {
                            let d = &f * &a[p][j];
                            a[i][j] -= d;
                        }
                    }
                }
            }
            None => {
                // all remaining diagonals are zero
                for &i in &active {
                    for &j in &active {
                        if !a[i][j].is_zero() {
                            return false;
                        }
                    }
                }
                return true;
            }
        }
    }
    true
}

/// `vᵀ m v`
pub fn quad_form(m: &[RVec], v: &[Rat]) -> Rat {
    dot(v, &mat_vec(m, v))
}

/// `Bᵀ M B` for `B` given as a list of columns.
pub fn congruence(m: &[RVec], cols_b: &[RVec]) -> RMat {
    let mb: Vec<RVec> = cols_b.iter().map(|c| mat_vec(m, c)).collect();
    cols_b
        .iter()
        .map(|ci| mb.iter().map(|mcj| dot(ci, mcj)).collect())
        .collect()
}
