//! Exact two-phase simplex (dense tableau, Bland's rule) and the LP-based feasibility helpers
//! that produce points or Farkas certificates.

use num::{One, Signed, Zero};

use crate::rat::{dot, mat_t_vec, rat, zeros, RMat, RVec, Rat};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: RVec, value: Rat },
    Infeasible,
    /// `direction` is a feasible ray of the standard-form problem with negative cost.
    Unbounded { x: RVec, direction: RVec },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

/// A linear program `min cᵀx` over rows `aᵀx (<=|=|>=) b` with free or nonnegative variables.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    n: usize,
    nonneg: Vec<bool>,
    rows: Vec<(RVec, Cmp, Rat)>,
    objective: RVec,
}

impl LinearProgram {
    /// All variables free, zero objective.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            n,
            nonneg: vec![false; n],
            rows: Vec::new(),
            objective: zeros(n),
        }
    }

    pub fn nonneg(mut self) -> Self {
        self.nonneg = vec![true; self.n];
        self
    }

    pub fn set_nonneg(&mut self, i: usize) {
        self.nonneg[i] = true;
    }

    pub fn row(&mut self, a: RVec, cmp: Cmp, b: Rat) -> &mut Self {
        debug_assert_eq!(a.len(), self.n);
        self.rows.push((a, cmp, b));
        self
    }

    pub fn minimize(&mut self, c: RVec) -> &mut Self {
        self.objective = c;
        self
    }

    pub fn solve(&self) -> LpOutcome {
        // column layout: for each variable a positive part, plus a negative part if free, then slacks
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.n);
        let mut ncols = 0;
        for i in 0..self.n {
            let pos = ncols;
            ncols += 1;
            let negc = if self.nonneg[i] {
                None
            } else {
                ncols += 1;
                Some(ncols - 1)
            };
            col_of.push((pos, negc));
        }
        let slack_start = ncols;
        let nslack = self.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        ncols += nslack;

        let mut a = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        let mut s = slack_start;
        for (row, cmp, rhs) in &self.rows {
            let mut r = zeros(ncols);
            for (i, v) in row.iter().enumerate() {
                let (p, q) = col_of[i];
                r[p] = v.clone();
                if let Some(q) = q {
                    r[q] = -v.clone();
                }
            }
            match cmp {
                Cmp::Le => {
                    r[s] = Rat::one();
                    s += 1;
                }
                Cmp::Ge => {
                    r[s] = -Rat::one();
                    s += 1;
                }
                Cmp::Eq => {}
            }
            a.push(r);
            b.push(rhs.clone());
        }
        let mut c = zeros(ncols);
        for (i, v) in self.objective.iter().enumerate() {
            let (p, q) = col_of[i];
            c[p] = v.clone();
            if let Some(q) = q {
                c[q] = -v.clone();
            }
        }
        let back = |y: &RVec| -> RVec {
            (0..self.n)
                .map(|i| {
                    let (p, q) = col_of[i];
                    match q {
                        Some(q) => &y[p] - &y[q],
                        None => y[p].clone(),
                    }
                })
                .collect()
        };
        match simplex_standard(&a, &b, &c, ncols) {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x: back(&x), value },
            LpOutcome::Infeasible => LpOutcome::Infeasible,
            LpOutcome::Unbounded { x, direction } => LpOutcome::Unbounded {
                x: back(&x),
                direction: back(&direction),
            },
        }
    }
}

/// `min cᵀx  s.t.  A x = b, x >= 0` in exact arithmetic.
pub fn simplex_standard(a: &[RVec], b: &[Rat], c: &[Rat], n: usize) -> LpOutcome {
    let m = a.len();
    // tableau columns: n structural, m artificial, rhs
    let width = n + m + 1;
    let mut t: RMat = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = zeros(width);
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Rat::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: minimize the sum of artificials
    let mut cost1 = zeros(n + m);
    for j in n..n + m {
        cost1[j] = Rat::one();
    }
    if run_simplex(&mut t, &mut basis, &cost1, n + m).is_err() {
        unreachable!("phase one is bounded below by zero");
    }
    let phase1: Rat = basis
        .iter()
        .enumerate()
        .filter(|(_, &bj)| bj >= n)
        .map(|(i, _)| t[i][width - 1].clone())
        .fold(Rat::zero(), |acc, v| acc + v);
    if phase1.is_positive() {
        return LpOutcome::Infeasible;
    }

    // drive artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
                i += 1;
            } else {
                t.remove(i);
                basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    // drop artificial columns
    for row in t.iter_mut() {
        let rhs = row[width - 1].clone();
        row.truncate(n);
        row.push(rhs);
    }

    match run_simplex(&mut t, &mut basis, c, n) {
        Ok(()) => {
            let x = basic_solution(&t, &basis, n);
            let value = dot(c, &x);
            LpOutcome::Optimal { x, value }
        }
        Err(j) => {
            let x = basic_solution(&t, &basis, n);
            let mut d = zeros(n);
            d[j] = Rat::one();
            for (i, &bi) in basis.iter().enumerate() {
                d[bi] = -t[i][j].clone();
            }
            LpOutcome::Unbounded { x, direction: d }
        }
    }
}

fn basic_solution(t: &[RVec], basis: &[usize], n: usize) -> RVec {
    let mut x = zeros(n);
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i].last().unwrap().clone();
        }
    }
    x
}

fn pivot(t: &mut [RVec], basis: &mut [usize], r: usize, col: usize) {
    let inv = Rat::one() / &t[r][col];
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[col].is_zero() {
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    basis[r] = col;
}

/// Bland's-rule simplex on the first `ncols` columns. `Err(j)` reports an unbounded entering column.
fn run_simplex(t: &mut [RVec], basis: &mut [usize], cost: &[Rat], ncols: usize) -> Result<(), usize> {
    loop {
        // reduced costs
        let mut entering = None;
        for j in 0..ncols {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost[j].clone();
            for (i, &bi) in basis.iter().enumerate() {
                if !t[i][j].is_zero() && !cost[bi].is_zero() {
                    r -= &cost[bi] * &t[i][j];
                }
            }
            if r.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            return Ok(());
        };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..t.len() {
            if t[i][j].is_positive() {
                let ratio = t[i].last().unwrap() / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        match leave {
            None => return Err(j),
            Some((i, _)) => pivot(t, basis, i, j),
        }
    }
}

/// A point of `{x : A x <= b}`, or a Farkas certificate `y >= 0, yᵀA = 0, yᵀb < 0` (scaled so
/// `yᵀb = -1`).
pub fn feasible_point(a: &[RVec], b: &[Rat], n: usize) -> Result<RVec, RVec> {
    let mut lp = LinearProgram::new(n);
    for (row, rhs) in a.iter().zip(b) {
        lp.row(row.clone(), Cmp::Le, rhs.clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Ok(x),
        LpOutcome::Unbounded { .. } => unreachable!("zero objective"),
        LpOutcome::Infeasible => Err(farkas_certificate(a, b, n)),
    }
}

/// Solves the alternative system `y >= 0, Aᵀy = 0, bᵀy = -1`. Callers only use this after the
/// primal system was found infeasible, so the alternative is feasible.
fn farkas_certificate(a: &[RVec], b: &[Rat], n: usize) -> RVec {
    let m = a.len();
    let mut lp = LinearProgram::new(m).nonneg();
    for j in 0..n {
        let col: RVec = a.iter().map(|r| r[j].clone()).collect();
        lp.row(col, Cmp::Eq, Rat::zero());
    }
    lp.row(b.to_vec(), Cmp::Eq, rat(-1));
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => x,
        other => panic!("alternative system must be feasible, got {other:?}"),
    }
}

/// Checks a Farkas certificate exactly.
pub fn verify_farkas(a: &[RVec], b: &[Rat], n: usize, y: &[Rat]) -> bool {
    y.len() == a.len()
        && y.iter().all(|v| !v.is_negative())
        && mat_t_vec(a, y, n).iter().all(|v| v.is_zero())
        && dot(y, b).is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rmat, rvec};

    #[test]
    fn small_lp() {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0  -> (8/5, 6/5), value -14/5
        let mut lp = LinearProgram::new(2).nonneg();
        lp.row(rvec(&[1, 2]), Cmp::Le, rat(4))
            .row(rvec(&[3, 1]), Cmp::Le, rat(6))
            .minimize(rvec(&[-1, -1]));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![Rat::new(8.into(), 5.into()), Rat::new(6.into(), 5.into())]);
                assert_eq!(value, Rat::new((-14).into(), 5.into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_and_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.row(rvec(&[1]), Cmp::Ge, rat(0)).minimize(rvec(&[-1]));
        assert!(matches!(lp.solve(), LpOutcome::Unbounded { .. }));

        let a = rmat(&[&[1, 0], &[-1, 0]]);
        let b = rvec(&[-1, -1]);
        let y = feasible_point(&a, &b, 2).unwrap_err();
        assert!(verify_farkas(&a, &b, 2, &y));
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let mut lp = LinearProgram::new(2).nonneg();
        lp.row(rvec(&[1, 1]), Cmp::Eq, rat(1))
            .row(rvec(&[2, 2]), Cmp::Eq, rat(2))
            .minimize(rvec(&[1, 0]));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(0));
                assert_eq!(x, rvec(&[0, 1]));
            }
            other => panic!("{other:?}"),
        }
    }
}
