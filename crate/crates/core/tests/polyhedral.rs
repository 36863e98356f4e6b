mod common;

use common::{cone, dim_and, hpoly, rational_point, rng};
use fwsets::poly::{dd_convert, h_to_v, polar_cone, project_fm, recession_cone, v_to_h};
use fwsets::rat::{axpy, ratio, Rat};
use fwsets::Polyhedron;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dd_roundtrip_preserves_membership((n, p) in dim_and(1..=4, |n| hpoly(n, 4)), seed in any::<u64>()) {
        let Polyhedron::V(v) = dd_convert(&Polyhedron::H(p.clone())).unwrap() else { unreachable!() };
        let Polyhedron::H(back) = dd_convert(&Polyhedron::V(v.clone())).unwrap() else { unreachable!() };
        let mut rng = rng(seed);
        for k in 0..1000 {
            let x = if k % 2 == 0 { v.sample(&mut rng, 3) } else { rational_point(&mut rng, n, 4) };
            prop_assert_eq!(p.contains(&x), back.contains(&x));
        }
    }

    #[test]
    fn polar_of_polar_is_the_cone((_, d) in dim_and(1..=4, |n| cone(n, 5))) {
        let dd = polar_cone(&polar_cone(&d).unwrap()).unwrap();
        prop_assert!(d.generators().iter().all(|g| dd.contains(g)));
        prop_assert!(dd.generators().iter().all(|g| d.contains(g)));
    }

    #[test]
    fn projection_is_exact(
        (n, p) in dim_and(2..=4, |n| hpoly(n, 3)),
        mask in 1u32..15,
        seed in any::<u64>(),
    ) {
        let coords: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!coords.is_empty());
        let proj = project_fm(&p, &coords).unwrap();
        let v = h_to_v(&p).unwrap();
        let mut rng = rng(seed);
        for _ in 0..100 {
            let x = v.sample(&mut rng, 3);
            let y: Vec<Rat> = coords.iter().map(|&i| x[i].clone()).collect();
            prop_assert!(proj.contains(&y));
        }
        let pv = h_to_v(&proj).unwrap();
        for _ in 0..30 {
            let y = pv.sample(&mut rng, 3);
            let mut lifted = p.clone();
            for (k, &i) in coords.iter().enumerate() {
                lifted.push_equality(fwsets::rat::unit(n, i), y[k].clone());
            }
            prop_assert!(lifted.feasible_point().is_ok());
        }
    }

    #[test]
    fn recession_directions_keep_points_inside((_, p) in dim_and(1..=4, |n| hpoly(n, 3)), seed in any::<u64>()) {
        let d = recession_cone(&p).unwrap();
        let v = h_to_v(&p).unwrap();
        let mut rng = rng(seed);
        for _ in 0..50 {
            let x = v.sample(&mut rng, 2);
            for g in d.generators() {
                for t in [ratio(1, 2), ratio(3, 1), ratio(40, 3)] {
                    prop_assert!(p.contains(&axpy(&x, &t, g)));
                }
            }
        }
        prop_assert!(d.same_set(&v.recession_cone().unwrap()));
        prop_assert!(recession_cone(&v_to_h(&v).unwrap()).unwrap().same_set(&d));
    }
}
