mod common;

use common::{cone, dim_and, int_rows, points, rational_point, rng};
use fwsets::motzkin::{classify_fw, CompactPart, ConeRep, FwClass, MotzkinSet};
use fwsets::rat::{axpy, rat};
use fwsets::set_algebra::{
    affine_image, affine_preimage, intersect_fwm, order_cancellation_check, product,
    sum_with_subspace,
};
use fwsets::{AffineMap, Error, VPolyhedron};
use proptest::prelude::*;

fn motzkin(n: usize) -> impl Strategy<Value = MotzkinSet> {
    (points(n, 3), cone(n, 3)).prop_map(|(k, d)| {
        MotzkinSet::new(CompactPart::Polytope(k), ConeRep::Polyhedral(d)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn affine_images_contain_mapped_samples_and_stay_fw(
        (n, f) in dim_and(1..=3, motzkin),
        m in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let mut rng = rng(seed);
        let t = AffineMap::new(
            (0..m).map(|_| rational_point(&mut rng, n, 2)).collect(),
            rational_point(&mut rng, m, 2),
            n,
        ).unwrap();
        let image = affine_image(&f, &t).unwrap();
        prop_assert_eq!(classify_fw(&image).class, FwClass::FW);
        let v = f.to_vpolyhedron().unwrap();
        for _ in 0..100 {
            prop_assert!(image.contains(&t.apply(&v.sample(&mut rng, 3))).unwrap());
        }
    }

    #[test]
    fn preimage_membership_is_membership_of_the_image(
        (m, f) in dim_and(1..=3, motzkin),
        n in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let mut rng = rng(seed);
        let t = AffineMap::new(
            (0..m).map(|_| rational_point(&mut rng, n, 2)).collect(),
            rational_point(&mut rng, m, 2),
            n,
        ).unwrap();
        let pre = match affine_preimage(&f, &t) {
            Ok(p) => p,
            Err(Error::Empty { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(classify_fw(&pre).class, FwClass::FW);
        let pv = pre.to_vpolyhedron().unwrap();
        for k in 0..200 {
            let x = if k % 2 == 0 { pv.sample(&mut rng, 3) } else { rational_point(&mut rng, n, 4) };
            prop_assert_eq!(pre.contains(&x).unwrap(), f.contains(&t.apply(&x)).unwrap());
        }
    }

    #[test]
    fn product_membership_factorizes(
        (n1, f1) in dim_and(1..=2, motzkin),
        (n2, f2) in dim_and(1..=2, motzkin),
        seed in any::<u64>(),
    ) {
        let p = product(&f1, &f2).unwrap();
        prop_assert_eq!(p.dim(), n1 + n2);
        let (v1, v2) = (f1.to_vpolyhedron().unwrap(), f2.to_vpolyhedron().unwrap());
        let mut rng = rng(seed);
        for k in 0..200 {
            let x = if k % 2 == 0 { v1.sample(&mut rng, 2) } else { rational_point(&mut rng, n1, 4) };
            let y = if k % 3 == 0 { v2.sample(&mut rng, 2) } else { rational_point(&mut rng, n2, 4) };
            let xy = [x.clone(), y.clone()].concat();
            prop_assert_eq!(
                p.contains(&xy).unwrap(),
                f1.contains(&x).unwrap() && f2.contains(&y).unwrap()
            );
        }
    }

    #[test]
    fn fwm_intersection_membership_is_joint_membership(
        (n, (f1, f2)) in dim_and(1..=3, |n| (motzkin(n), motzkin(n))),
        seed in any::<u64>(),
    ) {
        let i = match intersect_fwm(&f1, &f2) {
            Ok(i) => i,
            Err(Error::Empty { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let iv = i.to_vpolyhedron().unwrap();
        let mut rng = rng(seed);
        for k in 0..200 {
            let x = if k % 2 == 0 { iv.sample(&mut rng, 3) } else { rational_point(&mut rng, n, 4) };
            prop_assert_eq!(
                i.contains(&x).unwrap(),
                f1.contains(&x).unwrap() && f2.contains(&x).unwrap()
            );
        }
    }

    #[test]
    fn subspace_sums_contain_every_shift(
        (n, (f, basis)) in dim_and(1..=3, |n| (motzkin(n), int_rows(0..=2, n, -2, 2))),
        seed in any::<u64>(),
    ) {
        let s = sum_with_subspace(&f, &basis).unwrap();
        let v = f.to_vpolyhedron().unwrap();
        let mut rng = rng(seed);
        for _ in 0..100 {
            let mut x = v.sample(&mut rng, 3);
            for b in &basis {
                x = axpy(&x, &rational_point(&mut rng, 1, 5)[0], b);
            }
            prop_assert!(s.contains(&x).unwrap());
        }
        if basis.is_empty() {
            for _ in 0..100 {
                let x = rational_point(&mut rng, n, 4);
                prop_assert_eq!(s.contains(&x).unwrap(), f.contains(&x).unwrap());
            }
        }
    }

    #[test]
    fn order_cancellation_never_fails(
        (n, (a, extra, unrelated, k)) in dim_and(1..=3, |n| (points(n, 4), points(n, 2), points(n, 4), points(n, 3))),
        superset in any::<bool>(),
    ) {
        let b = if superset { [a.clone(), extra].concat() } else { unrelated };
        let poly = |v| VPolyhedron::polytope(n, v).unwrap();
        let r = order_cancellation_check(&poly(a), &poly(b), &poly(k)).unwrap();
        prop_assert!(!r.is_violation());
        if superset {
            prop_assert!(r.contained && r.sums_contained);
        }
    }
}

#[test]
fn nested_sums_are_not_forced_by_a_wider_summand() {
    let a = VPolyhedron::polytope(1, vec![vec![rat(0)], vec![rat(2)]]).unwrap();
    let b = VPolyhedron::polytope(1, vec![vec![rat(0)], vec![rat(1)]]).unwrap();
    let k = VPolyhedron::polytope(1, vec![vec![rat(0)], vec![rat(1)]]).unwrap();
    let r = order_cancellation_check(&a, &b, &k).unwrap();
    assert!(!r.sums_contained && !r.contained);
}
