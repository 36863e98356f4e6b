mod common;

use common::{cone, dim_and, hpoly, points, quadratic, rational_point, rng};
use fwsets::asymptote::SetDescriptor;
use fwsets::document::{parse, serialize, Payload};
use fwsets::motzkin::{CompactPart, ConeRep, MotzkinSet};
use fwsets::{AffineManifold, AffineMap, Error};
use proptest::prelude::*;

fn assert_canonical_roundtrip(p: &Payload) -> Result<(), TestCaseError> {
    let text = serialize(p);
    let back = parse(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, p);
    prop_assert_eq!(serialize(&back), text);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratics_roundtrip((n, q) in dim_and(1..=4, quadratic), seed in any::<u64>()) {
        assert_canonical_roundtrip(&Payload::Quadratic(q.clone()))?;
        let mut rng = rng(seed);
        let a = (0..n).map(|_| rational_point(&mut rng, n, 3)).collect();
        let fractional = fwsets::Quadratic::new(a, rational_point(&mut rng, n, 3), rational_point(&mut rng, 1, 3).remove(0)).unwrap();
        assert_canonical_roundtrip(&Payload::Quadratic(fractional))?;
    }

    #[test]
    fn sets_roundtrip(
        (_, (k, d, p)) in dim_and(1..=3, |n| (points(n, 3), cone(n, 3), hpoly(n, 2))),
        as_points in any::<bool>(),
    ) {
        let compact = if as_points { CompactPart::FinitePointSet(k) } else { CompactPart::Polytope(k) };
        let m = SetDescriptor::Motzkin(MotzkinSet::new(compact, ConeRep::Polyhedral(d)).unwrap());
        let h = SetDescriptor::HPoly(p);
        assert_canonical_roundtrip(&Payload::Set(m.clone()))?;
        assert_canonical_roundtrip(&Payload::Set(SetDescriptor::Union(vec![m.clone(), h.clone()])))?;
        assert_canonical_roundtrip(&Payload::Set(SetDescriptor::Product(vec![m, h])))?;
    }

    #[test]
    fn maps_and_manifolds_roundtrip((n, point) in dim_and(1..=3, |n| common::ints(n, -4, 4)), seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = AffineMap::new((0..2).map(|_| rational_point(&mut rng, n, 2)).collect(), rational_point(&mut rng, 2, 2), n).unwrap();
        assert_canonical_roundtrip(&Payload::AffineMap(t))?;
        let dir = rational_point(&mut rng, n, 2);
        prop_assume!(dir.iter().any(|x| !num::Zero::is_zero(x)));
        assert_canonical_roundtrip(&Payload::Manifold(AffineManifold::from_point(point, vec![dir]).unwrap()))?;
    }

    #[test]
    fn garbage_never_panics(text in ".{0,80}") {
        let _ = parse(&text);
    }
}

#[test]
fn zero_denominators_are_rejected() {
    let text = r#"{"version": "1", "quadratic": {"A": [["1/0"]], "b": [0], "c": "0"}}"#;
    assert!(matches!(parse(text), Err(Error::Parse(_))));
}

#[test]
fn unknown_fields_are_rejected_at_every_level() {
    for text in [
        r#"{"version": "1", "quadratic": {"A": [[1]], "b": [0], "c": "0"}, "extra": 1}"#,
        r#"{"version": "1", "quadratic": {"A": [[1]], "b": [0], "c": "0", "extra": 1}}"#,
        r#"{"version": "1", "set": {"hpoly": {"dim": 1, "A": [[1]], "b": [1], "extra": 1}}}"#,
    ] {
        let e = parse(text).unwrap_err();
        assert!(e.to_string().contains("unknown field"), "{e}");
    }
}

#[test]
fn shape_errors_are_parse_errors() {
    let text = r#"{"version": "1", "quadratic": {"A": [[1, 2]], "b": [0], "c": "0"}}"#;
    assert!(matches!(parse(text), Err(Error::Parse(_))));
}
