//! Floating-point helpers for the parts that are numerical by nature: grid scans, compass
//! search, Newton polishing of KKT systems, and interval branch-and-bound lower bounds.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, DVector};
use num::{Signed, Zero};

use crate::rat::Rat;

/// Absolute feasibility tolerance for non-polyhedral data.
pub const FEAS_TOL: f64 = 1e-9;

/// Grid points `center + h·k` (`k ∈ ℤⁿ`) inside the ball, `h = radius / 2^level`, in
/// lexicographic order of `k`. Returns `None` once more than `budget` points would be produced.
pub fn ball_grid(center: &[f64], radius: f64, level: u32, budget: usize) -> Option<Vec<Vec<f64>>> {
    let n = center.len();
    let m = 1i64 << level;
    let h = radius / m as f64;
    let side = (2 * m + 1) as f64;
    if side.powi(n as i32) * ball_fraction(n) > budget as f64 * 4.0 {
        return None;
    }
    let mut out = Vec::new();
    let mut k = vec![-m; n];
    loop {
        let norm2: i64 = k.iter().map(|x| x * x).sum();
        if norm2 <= m * m {
            out.push(center.iter().zip(&k).map(|(c, ki)| c + h * *ki as f64).collect());
            if out.len() > budget {
                return None;
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            if k[i] < m {
                k[i] += 1;
                break;
            }
            k[i] = -m;
        }
    }
}

fn ball_fraction(n: usize) -> f64 {
    // volume of the unit ball relative to its bounding cube
    match n {
        0 | 1 => 1.0,
        2 => 0.785,
        3 => 0.524,
        4 => 0.308,
        _ => 0.2,
    }
}

/// Moves `x` onto the closed ball if it lies outside.
pub fn project_to_ball(x: &mut [f64], center: &[f64], radius: f64) {
    let d2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
    if d2 > radius * radius {
        let s = radius / d2.sqrt();
        for (a, c) in x.iter_mut().zip(center) {
            *a = c + (*a - c) * s;
        }
    }
}

/// Compass search: tries `±step·eᵢ`, keeps improvements, halves the step on failure.
pub fn pattern_search<F, P>(f: F, project: P, x0: &[f64], step: f64, min_step: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&mut [f64]),
{
    let mut x = x0.to_vec();
    project(&mut x);
    let mut fx = f(&x);
    let mut h = step;
    let mut iters = 0usize;
    while h > min_step && iters < 100_000 {
        iters += 1;
        let mut improved = false;
        for i in 0..x.len() {
            for s in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += s * h;
                project(&mut y);
                let fy = f(&y);
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (x, fx)
}

/// A smooth constraint `g(x) <= 0` for the KKT polish: value, gradient, Hessian.
pub trait Smooth {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    fn hessian(&self, x: &[f64]) -> DMatrix<f64>;
}

/// Result of a Newton solve on the KKT system of the active constraints.
#[derive(Debug, Clone)]
pub struct KktPolish {
    pub x: Vec<f64>,
    pub multipliers: Vec<f64>,
    /// `‖∇f + Σλᵢ∇gᵢ‖∞` together with `max |gᵢ|` over the active set.
    pub residual: f64,
}

/// Newton's method on `∇f + Σ λᵢ∇gᵢ = 0, gᵢ = 0` over the given active constraints.
pub fn kkt_newton(
    objective: &dyn Smooth,
    active: &[&dyn Smooth],
    x0: &[f64],
    lambda0: &[f64],
    iters: usize,
) -> KktPolish {
    let n = x0.len();
    let m = active.len();
    let mut x = DVector::from_column_slice(x0);
    let mut lam = DVector::from_column_slice(lambda0);
    let residual_of = |x: &DVector<f64>, lam: &DVector<f64>| -> DVector<f64> {
        let xs = x.as_slice();
        let mut r = DVector::from_vec(objective.gradient(xs));
        let mut out = DVector::zeros(n + m);
        for (k, g) in active.iter().enumerate() {
            r += DVector::from_vec(g.gradient(xs)) * lam[k];
            out[n + k] = g.value(xs);
        }
        out.rows_mut(0, n).copy_from(&r);
        out
    };
    for _ in 0..iters {
        let r = residual_of(&x, &lam);
        if r.amax() < 1e-14 {
            break;
        }
        let xs = x.as_slice();
        let mut jac = DMatrix::zeros(n + m, n + m);
        let mut h = objective.hessian(xs);
        for (k, g) in active.iter().enumerate() {
            h += g.hessian(xs) * lam[k];
            let gr = g.gradient(xs);
            for i in 0..n {
                jac[(i, n + k)] = gr[i];
                jac[(n + k, i)] = gr[i];
            }
        }
        jac.view_mut((0, 0), (n, n)).copy_from(&h);
        let step = match jac.clone().lu().solve(&(-&r)) {
            Some(s) => s,
            None => match jac.svd(true, true).solve(&(-&r), 1e-14) {
                Ok(s) => s,
                Err(_) => break,
            },
        };
        x += step.rows(0, n);
        lam += step.rows(n, m);
    }
    let r = residual_of(&x, &lam);
    KktPolish {
        x: x.as_slice().to_vec(),
        multipliers: lam.as_slice().to_vec(),
        residual: r.amax(),
    }
}

/// A closed rational interval; arithmetic is exact, so enclosures need no outward rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, k: &Rat) -> Interval {
        if !k.is_negative() {
            Interval::new(&self.lo * k, &self.hi * k)
        } else {
            Interval::new(&self.hi * k, &self.lo * k)
        }
    }

    pub fn sqr(&self) -> Interval {
        if !self.lo.is_negative() {
            Interval::new(&self.lo * &self.lo, &self.hi * &self.hi)
        } else if !self.hi.is_positive() {
            Interval::new(&self.hi * &self.hi, &self.lo * &self.lo)
        } else {
            let m = (&self.lo * &self.lo).max(&self.hi * &self.hi);
            Interval::new(Rat::zero(), m)
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }
}

/// Outcome of [`branch_and_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// Certified lower bound on the objective over the feasible part of the root box; `None`
    /// when that part is certified empty.
    pub lower: Option<Rat>,
    /// Best objective value seen at a feasible sample point, if any.
    pub upper: Option<Rat>,
    pub boxes: usize,
    /// Whether `stop` accepted the bounds before the box budget ran out.
    pub converged: bool,
}

/// Best-first branch-and-bound over a rational box. `bound` returns a lower bound of the
/// objective on a sub-box, or `None` when the sub-box is certified infeasible; `sample` returns
/// the objective at a feasible point of the sub-box if it finds one. The search ends when
/// `stop(lower, upper)` holds or after `budget` boxes; the returned lower bound is valid either
/// way.
pub fn branch_and_bound<B, S, T>(root: Vec<Interval>, bound: B, sample: S, stop: T, budget: usize) -> BoundResult
where
    B: Fn(&[Interval]) -> Option<Rat>,
    S: Fn(&[Interval]) -> Option<Rat>,
    T: Fn(&Rat, Option<&Rat>) -> bool,
{
    let mut upper: Option<Rat> = None;
    let mut heap: BinaryHeap<Reverse<Node>> = BinaryHeap::new();
    if let Some(lo) = bound(&root) {
        heap.push(Reverse(Node(lo, root)));
    }
    let mut boxes = 0usize;
    let mut converged = false;
    while let Some(Reverse(Node(lower, _))) = heap.peek() {
        if stop(lower, upper.as_ref()) {
            converged = true;
            break;
        }
        if boxes >= budget {
            break;
        }
        let Reverse(Node(_, bx)) = heap.pop().expect("peeked");
        boxes += 1;
        if let Some(v) = sample(&bx) {
            if upper.as_ref().is_none_or(|u| &v < u) {
                upper = Some(v);
            }
        }
        let (k, _) = bx
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.width().cmp(&b.1.width()))
            .expect("nonempty box");
        let m = bx[k].mid();
        for half in [
            Interval::new(bx[k].lo.clone(), m.clone()),
            Interval::new(m.clone(), bx[k].hi.clone()),
        ] {
            let mut child = bx.clone();
            child[k] = half;
            if let Some(lo) = bound(&child) {
                if upper.as_ref().is_none_or(|u| &lo <= u) {
                    heap.push(Reverse(Node(lo, child)));
                }
            }
        }
    }
    let lower = match heap.peek() {
        Some(Reverse(Node(lo, _))) => Some(lo.clone()),
        None => {
            converged = true;
            upper.clone()
        }
    };
    BoundResult {
        lower,
        upper,
        boxes,
        converged,
    }
}

/// A box keyed by its lower bound.
struct Node(Rat, Vec<Interval>);

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn grid_covers_ball() {
        let g = ball_grid(&[0.0, 0.0], 1.0, 1, 1000).unwrap();
        // k ∈ {-2..2}², |k|² <= 4
        assert_eq!(g.len(), 13);
        assert!(ball_grid(&[0.0; 4], 1.0, 6, 1000).is_none());
    }

    #[test]
    fn compass_search_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 0.3).powi(2) + (x[1] + 0.2).powi(2);
        let (x, v) = pattern_search(f, |_: &mut [f64]| {}, &[0.0, 0.0], 0.5, 1e-10);
        assert!(v < 1e-16);
        assert!((x[0] - 0.3).abs() < 1e-8);
    }

    struct Sq(usize);
    impl Smooth for Sq {
        fn value(&self, x: &[f64]) -> f64 {
            x[self.0] * x[self.0]
        }
        fn gradient(&self, x: &[f64]) -> Vec<f64> {
            let mut g = vec![0.0; x.len()];
            g[self.0] = 2.0 * x[self.0];
            g
        }
        fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
            let mut h = DMatrix::zeros(x.len(), x.len());
            h[(self.0, self.0)] = 2.0;
            h
        }
    }

    struct Circle;
    impl Smooth for Circle {
        fn value(&self, x: &[f64]) -> f64 {
            x[0] * x[0] + x[1] * x[1] - 1.0
        }
        fn gradient(&self, x: &[f64]) -> Vec<f64> {
            vec![2.0 * x[0], 2.0 * x[1]]
        }
        fn hessian(&self, _: &[f64]) -> DMatrix<f64> {
            DMatrix::identity(2, 2) * 2.0
        }
    }

    #[test]
    fn newton_on_circle() {
        // minimize (x₀)² on the unit circle → x = (0, ±1), λ = 0
        let p = kkt_newton(&Sq(0), &[&Circle], &[0.1, 0.9], &[0.0], 30);
        assert!(p.residual < 1e-12);
        assert!(p.x[0].abs() < 1e-12);
    }

    #[test]
    fn interval_bound_of_square() {
        // x² − 1 on [−2, 3] has minimum −1 at 0, which is a bisection point
        let r = branch_and_bound(
            vec![Interval::new(Rat::from_integer((-2).into()), Rat::from_integer(3.into()))],
            |b| Some(&b[0].sqr().lo - Rat::one()),
            |b| {
                let m = b[0].mid();
                Some(&m * &m - Rat::one())
            },
            |lo, up| up.is_some_and(|u| u - lo < Rat::new(1.into(), 1000.into())),
            10_000,
        );
        assert!(r.converged);
        let lower = r.lower.unwrap();
        assert!(lower <= Rat::from_integer((-1).into()));
        assert!(lower > Rat::new((-1001).into(), 1000.into()));
    }
}
