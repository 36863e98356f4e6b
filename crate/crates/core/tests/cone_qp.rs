mod common;

use common::{cone, dim_and, hessian, psd, quadratic, rational_point, rng};
use fwsets::cone_qp::{
    dom_f, form_value, is_bounded_below_on_cone, minimize_on_polyhedral_cone, value_function_eval,
    zero_set_pieces, ConeMinVerdict,
};
use fwsets::rat::{add, dot, mat_vec, rat, ratio, scale, to_f64, transpose, Rat};
use fwsets::{PolyCone, Quadratic, RMat, RVec};
use num::{Signed, Zero};
use proptest::prelude::*;

/// `ZᵀGZ` for the generator matrix `Z` of `d`.
fn pulled_back_form(g: &[RVec], d: &PolyCone) -> RMat {
    let z = d.generators();
    z.iter()
        .map(|zi| z.iter().map(|zj| dot(zi, &mat_vec(g, zj))).collect())
        .collect()
}

fn weights_grid(p: usize) -> Vec<RVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|u: RVec| (0..=2).map(move |k| [u.clone(), vec![rat(k)]].concat()))
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn domain_membership_matches_the_boundedness_oracle(
        (n, (g, d)) in dim_and(1..=3, |n| (hessian(n), cone(n, 5))),
        seed in any::<u64>(),
    ) {
        let dom = dom_f(&g, &d).unwrap();
        let mut rng = rng(seed);
        for _ in 0..200 {
            let c = rational_point(&mut rng, n, 3);
            let bounded = is_bounded_below_on_cone(&c, &g, &d).unwrap().is_bounded();
            prop_assert_eq!(dom.contains(&c), bounded);
        }
    }

    #[test]
    fn pieces_cover_the_zero_set((_, (g, d)) in dim_and(1..=3, |n| (psd(n), cone(n, 4)))) {
        let pieces = zero_set_pieces(&g, &d).unwrap();
        let m = pulled_back_form(&g, &d);
        let p = d.generators().len();
        for piece in &pieces {
            for u in &piece.generators {
                prop_assert!(u.iter().all(|x| !x.is_negative()));
                prop_assert!(form_value(&m, u).is_zero());
            }
        }
        let cones: Vec<PolyCone> = pieces.iter().map(|pc| pc.cone(p).unwrap()).collect();
        for u in weights_grid(p) {
            if u.iter().all(Zero::is_zero) || !form_value(&m, &u).is_zero() {
                continue;
            }
            prop_assert!(cones.iter().any(|c| c.contains(&u)), "uncovered zero {:?}", u);
        }
    }

    #[test]
    fn attained_minima_are_exact_kkt_points(
        (n, (q, d)) in dim_and(1..=3, |n| (quadratic(n), cone(n, 4))),
        seed in any::<u64>(),
    ) {
        let ConeMinVerdict::Attained { point, value, weights, reduced_gradient } =
            minimize_on_polyhedral_cone(&q, &d).unwrap()
        else {
            return Ok(());
        };
        prop_assert!(weights.iter().all(|w| !w.is_negative()));
        prop_assert!(reduced_gradient.iter().all(|r| !r.is_negative()));
        prop_assert!(dot(&weights, &reduced_gradient).is_zero());
        let z = transpose(d.generators(), n);
        prop_assert_eq!(&mat_vec(&z, &weights), &point);
        prop_assert_eq!(&q.value(&point), &value);
        let mut rng = rng(seed);
        for _ in 0..500 {
            let x = d.sample(&mut rng, 4);
            prop_assert!(q.value(&x) >= value);
        }
    }

    #[test]
    fn value_function_is_continuous_on_its_domain(
        (n, (g, d)) in dim_and(1..=3, |n| (psd(n), cone(n, 4))),
        seed in any::<u64>(),
    ) {
        let dom = dom_f(&g, &d).unwrap();
        let mut rng = rng(seed);
        let c = rational_point(&mut rng, n, 3);
        let dir = rational_point(&mut rng, n, 2);
        let steps = [ratio(1, 100), ratio(1, 10_000), ratio(1, 1_000_000)];
        let shifted: Vec<RVec> = steps.iter().map(|e| add(&c, &scale(e, &dir))).collect();
        prop_assume!(dom.contains(&c) && shifted.iter().all(|x| dom.contains(x)));
        let f0 = value_function_eval(&c, &g, &d).unwrap();
        let gaps: Vec<Rat> = shifted
            .iter()
            .map(|x| (value_function_eval(x, &g, &d).unwrap() - &f0).abs())
            .collect();
        prop_assert!(gaps[1] <= gaps[0] && gaps[2] <= gaps[1], "gaps {:?}", gaps);
        prop_assert!(to_f64(&gaps[2]) < 1e-3);
    }

    #[test]
    fn value_function_against_a_sample_oracle(
        (n, (g, d)) in dim_and(1..=3, |n| (hessian(n), cone(n, 4))),
        seed in any::<u64>(),
    ) {
        let mut rng = rng(seed);
        let c = rational_point(&mut rng, n, 3);
        let Ok(f) = value_function_eval(&c, &g, &d) else { return Ok(()) };
        let q = Quadratic::new(g.clone(), c.clone(), Rat::zero()).unwrap();
        for _ in 0..200 {
            prop_assert!(q.value(&d.sample(&mut rng, 3)) >= f);
        }
        if !f.is_positive() {
            let f2 = value_function_eval(&scale(&rat(2), &c), &g, &d).unwrap();
            prop_assert!(f2 <= rat(2) * &f);
        }
    }
}
