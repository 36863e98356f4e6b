//! Exact global minimization of a (possibly nonconvex) quadratic over an H-polyhedron by
//! enumeration of linearly independent active sets.
//!
//! For every independent subset `S` of rows the quadratic is minimized over the flat
//! `{A_S x = b_S}`; candidates that satisfy all rows are compared. When `q` is bounded below on
//! the polyhedron the minimum is attained, and a minimizer with a maximal active set is the
//! unique stationary point of its flat up to lineality, so the enumeration always reaches a
//! global minimizer.

use num::{Signed, Zero};

use crate::linalg::{congruence, is_psd, kernel, rank, solve};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::poly::HPolyhedron;
use crate::quadratic::Quadratic;
use crate::rat::{axpy, dot, mat_t_vec, zeros, RMat, RVec, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    pub point: RVec,
    pub value: Rat,
    /// The enumerated active set that produced the point.
    pub active_set: Vec<usize>,
}

/// KKT data at a point: multipliers `λ >= 0` on the rows of `A x <= b` with
/// `∇q(x) + Aᵀλ = 0` and `λᵢ (aᵢᵀx − bᵢ) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KktCertificate {
    pub multipliers: RVec,
    pub stationarity_residual: RVec,
    pub complementarity_residual: Rat,
}

impl KktCertificate {
    pub fn is_exact(&self) -> bool {
        self.stationarity_residual.iter().all(|x| x.is_zero())
            && self.complementarity_residual.is_zero()
            && self.multipliers.iter().all(|x| !x.is_negative())
    }
}

/// Minimum of `q` over the flat `{A_S x = b_S}` restricted to points of `p`, or `None` if the
/// flat has no stationary point or its stationary point is infeasible.
fn flat_candidate(q: &Quadratic, p: &HPolyhedron, subset: &[usize]) -> Option<RVec> {
    let n = p.dim();
    let rows: RMat = subset.iter().map(|&i| p.rows()[i].clone()).collect();
    let rhs: RVec = subset.iter().map(|&i| p.rhs()[i].clone()).collect();
    let x0 = if rows.is_empty() {
        zeros(n)
    } else {
        solve(&rows, &rhs, n)?
    };
    let basis = kernel(&rows, n);
    let x = if basis.is_empty() {
        x0
    } else {
        let h = congruence(q.hessian(), &basis);
        if !is_psd(&h) {
            return None;
        }
        let g = q.gradient(&x0);
        let rhs: RVec = basis.iter().map(|bcol| -dot(bcol, &g)).collect();
        let y = solve(&h, &rhs, basis.len())?;
        let mut x = x0;
        for (bcol, yi) in basis.iter().zip(&y) {
            if !yi.is_zero() {
                x = axpy(&x, yi, bcol);
            }
        }
        x
    };
    p.contains(&x).then_some(x)
}

/// Global minimizer of `q` over `p`, assuming `p` is nonempty and `q` is bounded below on it.
/// Ties in value are broken by the lexicographically smallest active set.
pub fn enumerate_minimum(q: &Quadratic, p: &HPolyhedron) -> Option<QpSolution> {
    let n = p.dim();
    let mut best: Option<QpSolution> = None;
    let mut stack: Vec<usize> = Vec::new();
    let mut consider = |subset: &[usize], best: &mut Option<QpSolution>| {
        if let Some(x) = flat_candidate(q, p, subset) {
            let v = q.value(&x);
            let better = match best {
                None => true,
                Some(b) => v < b.value,
            };
            if better {
                *best = Some(QpSolution {
                    point: x,
                    value: v,
                    active_set: subset.to_vec(),
                });
            }
        }
    };
    consider(&[], &mut best);
    // depth-first over independent subsets in lexicographic order
    fn rec(
        p: &HPolyhedron,
        n: usize,
        start: usize,
        stack: &mut Vec<usize>,
        best: &mut Option<QpSolution>,
        consider: &mut dyn FnMut(&[usize], &mut Option<QpSolution>),
    ) {
        for i in start..p.len() {
            if stack.len() == n {
                return;
            }
            stack.push(i);
            let rows: RMat = stack.iter().map(|&k| p.rows()[k].clone()).collect();
            if rank(&rows, n) == stack.len() {
                consider(stack, best);
                rec(p, n, i + 1, stack, best, consider);
            }
            stack.pop();
        }
    }
    rec(p, n, 0, &mut stack, &mut best, &mut consider);
    best
}

/// Finds nonnegative multipliers for the rows active at `x`.
pub fn kkt_certificate(q: &Quadratic, p: &HPolyhedron, x: &[Rat]) -> Option<KktCertificate> {
    let n = p.dim();
    let grad = q.gradient(x);
    let active = p.active_rows(x);
    let mut lp = LinearProgram::new(active.len()).nonneg();
    for j in 0..n {
        let row: RVec = active.iter().map(|&i| p.rows()[i][j].clone()).collect();
        lp.row(row, Cmp::Eq, -grad[j].clone());
    }
    let lam = match lp.solve() {
        LpOutcome::Optimal { x, .. } => x,
        _ => return None,
    };
    let mut multipliers = zeros(p.len());
    for (k, &i) in active.iter().enumerate() {
        multipliers[i] = lam[k].clone();
    }
    let at_lam = mat_t_vec(p.rows(), &multipliers, n);
    let stationarity_residual: RVec = grad.iter().zip(&at_lam).map(|(g, a)| g + a).collect();
    let mut comp = Rat::zero();
    for i in 0..p.len() {
        let slack = dot(&p.rows()[i], x) - &p.rhs()[i];
        comp += (&multipliers[i] * slack).abs();
    }
    Some(KktCertificate {
        multipliers,
        stationarity_residual,
        complementarity_residual: comp,
    })
}

/// `q` in the parameter `u` of `x = Z u`, where `cols` are the columns of `Z`.
pub fn pullback_columns(q: &Quadratic, cols: &[RVec]) -> crate::error::Result<Quadratic> {
    let a = congruence(q.hessian(), cols);
    let b: RVec = cols.iter().map(|c| dot(c, q.linear_term())).collect();
    Quadratic::new(a, b, q.constant().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio, rmat, rvec};

    #[test]
    fn concave_on_square_hits_a_corner() {
        // −(x−½)² − (y−¼)² on [0,1]²: farthest corner from (½, ¼) is (·, 1); tie at x ∈ {0, 1}
        let q = Quadratic::from_terms(
            2,
            &[(0, 0, rat(-1)), (1, 1, rat(-1))],
            rvec(&[1, 0]),
            rat(0),
        )
        .add_scaled(
            &rat(1),
            &Quadratic::linear(vec![rat(0), ratio(1, 2)], rat(0)),
        );
        let sq = HPolyhedron::cube(&rvec(&[0, 0]), &rvec(&[1, 1]));
        let s = enumerate_minimum(&q, &sq).unwrap();
        assert_eq!(s.point[1], rat(1));
        let kkt = kkt_certificate(&q, &sq, &s.point).unwrap();
        assert!(kkt.is_exact());
    }

    #[test]
    fn convex_interior_minimum() {
        // (x−1)² on x >= 0 → x = 1
        let q = Quadratic::from_terms(1, &[(0, 0, rat(1))], rvec(&[-2]), rat(1));
        let s = enumerate_minimum(&q, &HPolyhedron::orthant(1)).unwrap();
        assert_eq!(s.point, rvec(&[1]));
        assert_eq!(s.value, rat(0));
    }

    #[test]
    fn lineality_direction_is_harmless() {
        // x² on the strip {−1 <= x <= 1} × ℝ
        let q = Quadratic::one_var_square(2, 0);
        let strip = HPolyhedron::new(2, rmat(&[&[1, 0], &[-1, 0]]), rvec(&[1, 1])).unwrap();
        let s = enumerate_minimum(&q, &strip).unwrap();
        assert_eq!(s.value, rat(0));
    }
}
