//! Strategies and samplers shared by the property tests.

#![allow(dead_code)]

use fwsets::rat::{rat, RMat, RVec, Rat};
use fwsets::{HPolyhedron, PolyCone, Quadratic};
use num::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A dimension from `dims` paired with a value drawn for that dimension.
pub fn dim_and<S: Strategy, F: Fn(usize) -> S>(
    dims: std::ops::RangeInclusive<usize>,
    f: F,
) -> impl Strategy<Value = (usize, S::Value)> {
    dims.prop_flat_map(move |n| (Just(n), f(n)))
}

pub fn ints(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = RVec> {
    prop::collection::vec(lo..=hi, n).prop_map(|v| v.into_iter().map(rat).collect())
}

pub fn int_rows(
    rows: std::ops::RangeInclusive<usize>,
    n: usize,
    lo: i64,
    hi: i64,
) -> impl Strategy<Value = RMat> {
    prop::collection::vec(ints(n, lo, hi), rows)
}

pub fn symmetric(n: usize) -> impl Strategy<Value = RMat> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        (0..n)
            .map(|i| (0..n).map(|j| rat(v[i.min(j) * n + i.max(j)])).collect())
            .collect()
    })
}

/// `MᵀM` for an integer `M` with at most `n` rows, often rank-deficient.
pub fn psd(n: usize) -> impl Strategy<Value = RMat> {
    int_rows(1..=n, n, -2, 2).prop_map(move |m| {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| m.iter().fold(Rat::zero(), |s, r| s + &r[i] * &r[j]))
                    .collect()
            })
            .collect()
    })
}

pub fn hessian(n: usize) -> impl Strategy<Value = RMat> {
    prop_oneof![symmetric(n), psd(n)]
}

pub fn quadratic(n: usize) -> impl Strategy<Value = Quadratic> {
    (hessian(n), ints(n, -4, 4), -2i64..=2)
        .prop_map(|(a, b, c)| Quadratic::new(a, b, rat(c)).expect("square data"))
}

pub fn convex_quadratic(n: usize) -> impl Strategy<Value = Quadratic> {
    (psd(n), ints(n, -4, 4), -2i64..=2)
        .prop_map(|(a, b, c)| Quadratic::new(a, b, rat(c)).expect("square data"))
}

/// Nonempty H-polyhedra: every right-hand side is nonnegative, so the origin is feasible.
pub fn hpoly(n: usize, extra_rows: usize) -> impl Strategy<Value = HPolyhedron> {
    prop::collection::vec((ints(n, -3, 3), 0i64..=4), n..=n + extra_rows).prop_map(move |rows| {
        let (a, b): (RMat, RVec) = rows.into_iter().map(|(r, b)| (r, rat(b))).unzip();
        HPolyhedron::new(n, a, b).expect("consistent shape")
    })
}

pub fn cone(n: usize, max_generators: usize) -> impl Strategy<Value = PolyCone> {
    int_rows(1..=max_generators, n, -2, 2)
        .prop_map(move |g| PolyCone::from_generators(n, g).expect("generator shape"))
}

pub fn points(n: usize, max_points: usize) -> impl Strategy<Value = RMat> {
    int_rows(1..=max_points, n, -3, 3)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational point with coordinates in `[-bound, bound]` and denominators up to 3.
pub fn rational_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> RVec {
    (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=3);
            Rat::new(rng.gen_range(-bound * d..=bound * d).into(), d.into())
        })
        .collect()
}
