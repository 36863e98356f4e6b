//! Operations that keep Motzkin sets with polyhedral recession cones inside their class: affine
//! images and pre-images, products, sums with subspaces, intersections, and unions.

use num::{One, Zero};
use serde::Serialize;

use crate::affine::AffineMap;
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{kernel, orth_complement, solve, span_basis};
use crate::asymptote::SetDescriptor;
use crate::motzkin::{
    classify_fw, minimize_on_hpoly, minimize_on_motzkin, AttainmentVerdict, CompactPart, ConeRep,
    FwClass, MotzkinSet,
};
use crate::poly::{
    h_to_v, minkowski_sum, v_subset_of_h, v_to_h, HPolyhedron, PolyCone, VPolyhedron,
};
use crate::quadratic::Quadratic;
use crate::rat::{mat_mul, neg, transpose, zeros, RMat, RVec, Rat};

fn polyhedral(f: &MotzkinSet, op: &str) -> Result<PolyCone> {
    f.polyhedral_cone()
        .cloned()
        .ok_or_else(|| Error::Unsupported(format!("{op} needs a polyhedral recession cone")))
}

/// Vertices of `K` when it is convex and polyhedral; a single point counts as a polytope.
fn polytope_vertices(f: &MotzkinSet, op: &str) -> Result<RMat> {
    match f.compact() {
        CompactPart::Polytope(v) => Ok(v.clone()),
        CompactPart::FinitePointSet(v) if v.len() == 1 => Ok(v.clone()),
        other => Err(Error::Unsupported(format!(
            "{op} needs a polytope compact part, got a {}",
            other.kind()
        ))),
    }
}

fn is_isometry(t: &AffineMap) -> bool {
    let n = t.domain_dim;
    if t.codomain_dim() != n {
        return false;
    }
    let mt = transpose(&t.matrix, n);
    mat_mul(&mt, &t.matrix, n) == crate::rat::identity(n)
}

/// `T(K) + M·D` computed point-wise and generator-wise.
pub fn affine_image(f: &MotzkinSet, t: &AffineMap) -> Result<MotzkinSet> {
    ensure_dim("map domain", t.domain_dim, f.dim())?;
    let d = polyhedral(f, "affine image")?;
    let m = t.codomain_dim();
    let k = match f.compact() {
        CompactPart::Polytope(v) => CompactPart::Polytope(v.iter().map(|x| t.apply(x)).collect()),
        CompactPart::FinitePointSet(v) => {
            CompactPart::FinitePointSet(v.iter().map(|x| t.apply(x)).collect())
        }
        CompactPart::Ball { center, radius } => {
            if !is_isometry(t) {
                return Err(Error::Unsupported(
                    "a ball maps to an ellipsoid under a non-isometric map".into(),
                ));
            }
            CompactPart::Ball {
                center: t.apply(center),
                radius: radius.clone(),
            }
        }
    };
    let gens: RMat = d.generators().iter().map(|g| t.apply_linear(g)).collect();
    MotzkinSet::new(k, ConeRep::Polyhedral(PolyCone::from_generators(m, gens)?))
}

/// `K + (D + L)`, with `L` added to `D` as `±` basis generators.
pub fn sum_with_subspace(f: &MotzkinSet, basis: &[RVec]) -> Result<MotzkinSet> {
    let d = polyhedral(f, "sum with a subspace")?;
    let n = f.dim();
    for b in basis {
        ensure_dim("subspace basis vector", b.len(), n)?;
    }
    let mut gens = d.generators().to_vec();
    for b in span_basis(basis, n) {
        gens.push(neg(&b));
        gens.push(b);
    }
    MotzkinSet::new(
        f.compact().clone(),
        ConeRep::Polyhedral(PolyCone::from_generators(n, gens)?),
    )
}

fn concat(a: &[Rat], b: &[Rat]) -> RVec {
    a.iter().chain(b).cloned().collect()
}

/// `(K₁ × K₂) + (D₁ × D₂)`.
pub fn product(f1: &MotzkinSet, f2: &MotzkinSet) -> Result<MotzkinSet> {
    let d1 = polyhedral(f1, "product")?;
    let d2 = polyhedral(f2, "product")?;
    let (n1, n2) = (f1.dim(), f2.dim());
    let pairs = |a: &RMat, b: &RMat| -> RMat {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| concat(x, y)))
            .collect()
    };
    let k = match (f1.compact(), f2.compact()) {
        (CompactPart::FinitePointSet(a), CompactPart::FinitePointSet(b)) => {
            CompactPart::FinitePointSet(pairs(a, b))
        }
        (CompactPart::Ball { .. }, _) | (_, CompactPart::Ball { .. }) => {
            return Err(Error::Unsupported("a product with a ball is not a ball".into()))
        }
        _ => {
            let a = polytope_vertices(f1, "product")?;
            let b = polytope_vertices(f2, "product")?;
            CompactPart::Polytope(pairs(&a, &b))
        }
    };
    let mut gens: RMat = d1.generators().iter().map(|g| concat(g, &zeros(n2))).collect();
    gens.extend(d2.generators().iter().map(|g| concat(&zeros(n1), g)));
    MotzkinSet::new(
        k,
        ConeRep::Polyhedral(PolyCone::from_generators(n1 + n2, gens)?),
    )
}

/// `(K + D) ∩ L` for a linear subspace `L = span(basis)`, recomposed as `K₀ + (D ∩ L)`.
pub fn intersect_subspace_motzkin(f: &MotzkinSet, basis: &[RVec]) -> Result<MotzkinSet> {
    let n = f.dim();
    let d = polyhedral(f, "subspace intersection")?;
    let verts = polytope_vertices(f, "subspace intersection")?;
    for b in basis {
        ensure_dim("subspace basis vector", b.len(), n)?;
    }
    let v = VPolyhedron {
        dim: n,
        vertices: verts,
        rays: d.generators().to_vec(),
        lineality: Vec::new(),
        infeasibility: None,
    };
    let mut h = v_to_h(&v)?;
    let eqs = orth_complement(basis, n);
    for e in &eqs {
        h.push_equality(e.clone(), Rat::zero());
    }
    if let Err(farkas) = h.feasible_point() {
        return Err(Error::Empty {
            context: "the set does not meet the subspace".into(),
            farkas: Some(farkas),
        });
    }
    let w = h_to_v(&h)?;
    let cone = w.recession_cone()?;
    let mut dl_rows = d.halfspaces().to_vec();
    for e in &eqs {
        dl_rows.push(e.clone());
        dl_rows.push(neg(e));
    }
    let expected = PolyCone::from_halfspaces(n, dl_rows)?;
    if !cone.same_set(&expected) {
        return Err(Error::Malformed(
            "recomposed recession cone differs from D ∩ L".into(),
        ));
    }
    MotzkinSet::new(CompactPart::Polytope(w.vertices), ConeRep::Polyhedral(cone))
}

/// `F₁ ∩ F₂` as the projection of `(F₁ × F₂) ∩ Δ` onto the first factor.
pub fn intersect_fwm(f1: &MotzkinSet, f2: &MotzkinSet) -> Result<MotzkinSet> {
    ensure_dim("intersection operand dimension", f2.dim(), f1.dim())?;
    let n = f1.dim();
    let as_polytope = |f: &MotzkinSet| -> Result<MotzkinSet> {
        let v = polytope_vertices(f, "intersection")?;
        MotzkinSet::new(CompactPart::Polytope(v), f.cone().clone())
    };
    let prod = product(&as_polytope(f1)?, &as_polytope(f2)?)?;
    let diagonal: RMat = (0..n)
        .map(|i| {
            let mut e = zeros(2 * n);
            e[i] = Rat::one();
            e[n + i] = Rat::one();
            e
        })
        .collect();
    let on_diag = intersect_subspace_motzkin(&prod, &diagonal).map_err(|e| match e {
        Error::Empty { farkas, .. } => Error::Empty {
            context: "the two sets do not intersect".into(),
            farkas,
        },
        other => other,
    })?;
    let first: RMat = (0..n)
        .map(|i| {
            let mut e = zeros(2 * n);
            e[i] = Rat::one();
            e
        })
        .collect();
    affine_image(&on_diag, &AffineMap::linear(first, 2 * n)?)
}

/// `T⁻¹(F) = (T restricted to ker(T)⊥)⁻¹(F ∩ R(T)) + ker(T)`.
pub fn affine_preimage(f: &MotzkinSet, t: &AffineMap) -> Result<MotzkinSet> {
    ensure_dim("map codomain", t.codomain_dim(), f.dim())?;
    let n = t.domain_dim;
    let shift = AffineMap::new(crate::rat::identity(f.dim()), neg(&t.offset), f.dim())?;
    let shifted = affine_image(f, &shift)?;
    let range = t.range_basis();
    let on_range = intersect_subspace_motzkin(&shifted, &range).map_err(|e| match e {
        Error::Empty { farkas, .. } => Error::Empty {
            context: "the pre-image is empty".into(),
            farkas,
        },
        other => other,
    })?;
    // restricted inverse: y ∈ R(M) ↦ the unique x ∈ row(M) with Mx = y, i.e. x = Mᵀw, MMᵀw = y
    let mt = transpose(&t.matrix, n);
    let mmt = mat_mul(&t.matrix, &mt, t.codomain_dim());
    let inv = |y: &RVec| -> Result<RVec> {
        let w = solve(&mmt, y, t.codomain_dim())
            .ok_or_else(|| Error::Malformed("point outside the range of the map".into()))?;
        Ok(crate::rat::mat_t_vec(&t.matrix, &w, n))
    };
    let verts = match on_range.compact() {
        CompactPart::Polytope(v) => v.iter().map(inv).collect::<Result<RMat>>()?,
        _ => unreachable!("subspace intersection returns a polytope"),
    };
    let gens = on_range
        .polyhedral_cone()
        .expect("polyhedral")
        .generators()
        .iter()
        .map(inv)
        .collect::<Result<RMat>>()?;
    let base = MotzkinSet::new(
        CompactPart::Polytope(verts),
        ConeRep::Polyhedral(PolyCone::from_generators(n, gens)?),
    )?;
    sum_with_subspace(&base, &kernel(&t.matrix, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderCancellation {
    /// `A + K ⊆ B + K`
    pub sums_contained: bool,
    /// `A ⊆ B`
    pub contained: bool,
}

impl OrderCancellation {
    /// The cancellation law fails only if the sums are nested while the sets are not.
    pub fn is_violation(&self) -> bool {
        self.sums_contained && !self.contained
    }
}

/// Decides both containments of the order cancellation law exactly.
pub fn order_cancellation_check(
    a: &VPolyhedron,
    b: &VPolyhedron,
    k: &VPolyhedron,
) -> Result<OrderCancellation> {
    ensure_dim("B dimension", b.dim, a.dim)?;
    ensure_dim("K dimension", k.dim, a.dim)?;
    if !k.is_bounded() || k.is_empty() {
        return Err(Error::Malformed("K must be a nonempty polytope".into()));
    }
    let ak = minkowski_sum(a, k)?;
    let bk = minkowski_sum(b, k)?;
    Ok(OrderCancellation {
        sums_contained: v_subset_of_h(&ak, &v_to_h(&bk)?),
        contained: v_subset_of_h(a, &v_to_h(b)?),
    })
}

/// Minimum over a finite union: the least member minimum. Any unbounded member makes the union
/// unbounded; an undecided member makes the result undecided unless another is unbounded.
pub fn minimize_on_union(q: &Quadratic, members: &[MotzkinSet]) -> Result<AttainmentVerdict> {
    if members.is_empty() {
        return Err(Error::Empty {
            context: "empty union".into(),
            farkas: None,
        });
    }
    let mut best: Option<AttainmentVerdict> = None;
    let mut unknown: Option<String> = None;
    for f in members {
        let v = minimize_on_motzkin(q, f)?;
        match &v {
            AttainmentVerdict::UnboundedBelow(_) => return Ok(v),
            AttainmentVerdict::Unknown(why) => unknown = Some(why.clone()),
            AttainmentVerdict::Attained { value, .. } => {
                if best.as_ref().and_then(|b| b.value()).is_none_or(|b| value < b) {
                    best = Some(v);
                }
            }
            AttainmentVerdict::NotAttained { .. } => unknown = Some("member infimum not attained".into()),
        }
    }
    if let Some(why) = unknown {
        return Ok(AttainmentVerdict::Unknown(why));
    }
    Ok(best.expect("nonempty union"))
}

/// Motzkin decomposition of an H-polyhedron: its minimal-face points form `K`, and its extreme
/// rays together with both signs of a lineality basis generate `D`.
pub fn decompose_hpoly(h: &HPolyhedron) -> Result<MotzkinSet> {
    let v = h_to_v(h)?;
    if v.is_empty() {
        return Err(Error::Empty {
            context: "the polyhedron is empty".into(),
            farkas: v.infeasibility,
        });
    }
    let mut gens = v.rays;
    for l in &v.lineality {
        gens.push(l.clone());
        gens.push(neg(l));
    }
    MotzkinSet::new(
        CompactPart::Polytope(v.vertices),
        ConeRep::Polyhedral(PolyCone::from_generators(h.dim(), gens)?),
    )
}

/// Rewrites a set as a single Motzkin set when it is polyhedral or built from Motzkin sets by
/// products, affine images and intersections. Quadratic constraints, epigraphs and unions give
/// `None`.
pub fn as_motzkin(f: &SetDescriptor) -> Result<Option<MotzkinSet>> {
    let parts = |fs: &[SetDescriptor]| -> Result<Option<Vec<MotzkinSet>>> {
        fs.iter().map(as_motzkin).collect::<Result<Vec<_>>>().map(|v| v.into_iter().collect())
    };
    Ok(match f {
        SetDescriptor::Motzkin(m) => Some(m.clone()),
        SetDescriptor::HPoly(h) => Some(decompose_hpoly(h)?),
        SetDescriptor::AffineImage { map, inner } => match as_motzkin(inner)? {
            Some(m) => Some(affine_image(&m, map)?),
            None => None,
        },
        SetDescriptor::Product(fs) => match parts(fs)? {
            Some(ms) => Some(fold_nonempty(ms, |a, b| product(&a, &b))?),
            None => None,
        },
        SetDescriptor::Intersection(fs) => match parts(fs)? {
            Some(ms) => Some(fold_nonempty(ms, |a, b| intersect_fwm(&a, &b))?),
            None => None,
        },
        SetDescriptor::QuadSublevel { .. }
        | SetDescriptor::Epigraph1D(_)
        | SetDescriptor::Union(_) => None,
    })
}

fn fold_nonempty(
    ms: Vec<MotzkinSet>,
    op: impl Fn(MotzkinSet, MotzkinSet) -> Result<MotzkinSet>,
) -> Result<MotzkinSet> {
    let mut it = ms.into_iter();
    let first = it
        .next()
        .ok_or_else(|| Error::Malformed("combination of zero sets".into()))?;
    it.try_fold(first, op)
}

/// Minimizes `q` over any set that [`as_motzkin`] can rewrite, or over a union of such sets.
/// Other sets give an `Unknown` verdict.
pub fn minimize_on_set(q: &Quadratic, f: &SetDescriptor) -> Result<AttainmentVerdict> {
    ensure_dim("set dimension", f.dim(), q.dim())?;
    match f {
        SetDescriptor::HPoly(h) => minimize_on_hpoly(q, h),
        SetDescriptor::Union(fs) => {
            let ms: Option<Vec<MotzkinSet>> =
                fs.iter().map(as_motzkin).collect::<Result<Vec<_>>>()?.into_iter().collect();
            match ms {
                Some(ms) => minimize_on_union(q, &ms),
                None => Ok(unsupported_minimization()),
            }
        }
        _ => match as_motzkin(f)? {
            Some(m) => minimize_on_motzkin(q, &m),
            None => Ok(unsupported_minimization()),
        },
    }
}

fn unsupported_minimization() -> AttainmentVerdict {
    AttainmentVerdict::Unknown(
        "exact minimization covers polyhedral and Motzkin sets and their unions; this set has \
         quadratic or transcendental constraints"
            .into(),
    )
}

/// `Some(FW)` when every member is FW; otherwise the union is left undecided.
pub fn classify_union_fw(members: &[MotzkinSet]) -> Option<FwClass> {
    members
        .iter()
        .all(|f| classify_fw(f).class == FwClass::FW)
        .then_some(FwClass::FW)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rmat, rvec};

    fn square_orthant() -> MotzkinSet {
        MotzkinSet::new(
            CompactPart::Polytope(rmat(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])),
            ConeRep::Polyhedral(PolyCone::orthant(2)),
        )
        .unwrap()
    }

    fn ray(n: usize, g: &[i64]) -> PolyCone {
        PolyCone::from_generators(n, vec![rvec(g)]).unwrap()
    }

    #[test]
    fn image_examples() {
        let f = square_orthant();
        assert_eq!(affine_image(&f, &AffineMap::identity(2)).unwrap(), f);

        let p1 = AffineMap::linear(rmat(&[&[1, 0]]), 2).unwrap();
        let img = affine_image(&f, &p1).unwrap();
        assert!(img.polyhedral_cone().unwrap().same_set(&PolyCone::orthant(1)));
        assert!(img.contains(&rvec(&[0])).unwrap());
        assert!(!img.contains(&rvec(&[-1])).unwrap());

        let sum = AffineMap::linear(rmat(&[&[1, 1]]), 2).unwrap();
        let cone = MotzkinSet::new(
            CompactPart::Polytope(vec![zeros(2)]),
            ConeRep::Polyhedral(PolyCone::orthant(2)),
        )
        .unwrap();
        let img = affine_image(&cone, &sum).unwrap();
        assert!(img.polyhedral_cone().unwrap().same_set(&PolyCone::orthant(1)));

        let ball = MotzkinSet::new(
            CompactPart::Ball { center: zeros(2), radius: rat(1) },
            ConeRep::Polyhedral(PolyCone::zero(2)),
        )
        .unwrap();
        assert!(matches!(affine_image(&ball, &sum), Err(Error::Unsupported(_))));
    }

    #[test]
    fn subspace_sum_examples() {
        let sq = MotzkinSet::new(
            CompactPart::Polytope(rmat(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])),
            ConeRep::Polyhedral(PolyCone::zero(2)),
        )
        .unwrap();
        let s = sum_with_subspace(&sq, &rmat(&[&[1, 0]])).unwrap();
        assert_eq!(s.polyhedral_cone().unwrap().lineality(), vec![rvec(&[1, 0])]);
        assert_eq!(sum_with_subspace(&sq, &[]).unwrap(), sq);

        let pr = MotzkinSet::new(CompactPart::Polytope(vec![zeros(2)]), ConeRep::Polyhedral(ray(2, &[1, 0]))).unwrap();
        let s = sum_with_subspace(&pr, &rmat(&[&[0, 1]])).unwrap();
        let half = PolyCone::from_halfspaces(2, rmat(&[&[-1, 0]])).unwrap();
        assert!(s.polyhedral_cone().unwrap().same_set(&half));
    }

    #[test]
    fn product_examples() {
        let pt = MotzkinSet::new(CompactPart::Polytope(vec![zeros(1)]), ConeRep::Polyhedral(PolyCone::zero(1))).unwrap();
        let p = product(&square_orthant(), &pt).unwrap();
        assert_eq!(p.dim(), 3);
        assert!(p.contains(&rvec(&[5, 7, 0])).unwrap());
        assert!(!p.contains(&rvec(&[5, 7, 1])).unwrap());

        let r = MotzkinSet::new(CompactPart::Polytope(vec![zeros(1)]), ConeRep::Polyhedral(PolyCone::orthant(1))).unwrap();
        let rr = product(&r, &r).unwrap();
        assert!(rr.polyhedral_cone().unwrap().same_set(&PolyCone::orthant(2)));
    }

    #[test]
    fn subspace_intersection_examples() {
        let cone = MotzkinSet::new(CompactPart::Polytope(vec![zeros(2)]), ConeRep::Polyhedral(PolyCone::orthant(2))).unwrap();
        let r = intersect_subspace_motzkin(&cone, &rmat(&[&[1, 1]])).unwrap();
        assert!(r.polyhedral_cone().unwrap().same_set(&ray(2, &[1, 1])));
        assert!(r.contains(&zeros(2)).unwrap());

        let seg = MotzkinSet::new(
            CompactPart::Polytope(rmat(&[&[0, 0], &[0, 1]])),
            ConeRep::Polyhedral(ray(2, &[1, 0])),
        )
        .unwrap();
        let r = intersect_subspace_motzkin(&seg, &rmat(&[&[1, 0]])).unwrap();
        assert_eq!(r.compact(), &CompactPart::Polytope(vec![zeros(2)]));
        assert!(r.polyhedral_cone().unwrap().same_set(&ray(2, &[1, 0])));

        let sq = MotzkinSet::new(
            CompactPart::Polytope(rmat(&[&[1, 1], &[2, 1], &[1, 2], &[2, 2]])),
            ConeRep::Polyhedral(PolyCone::orthant(2)),
        )
        .unwrap();
        let r = intersect_subspace_motzkin(&sq, &rmat(&[&[1, 1]])).unwrap();
        assert_eq!(r.compact(), &CompactPart::Polytope(vec![rvec(&[1, 1])]));
        assert!(r.polyhedral_cone().unwrap().same_set(&ray(2, &[1, 1])));

        let far = MotzkinSet::new(CompactPart::Polytope(vec![rvec(&[1, 0])]), ConeRep::Polyhedral(ray(2, &[1, 0]))).unwrap();
        match intersect_subspace_motzkin(&far, &rmat(&[&[0, 1]])) {
            Err(Error::Empty { farkas: Some(_), .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fwm_intersection_examples() {
        let f = square_orthant();
        let ff = intersect_fwm(&f, &f).unwrap();
        for x in [rvec(&[0, 0]), rvec(&[3, 5]), rvec(&[-1, 0])] {
            assert_eq!(ff.contains(&x).unwrap(), f.contains(&x).unwrap());
        }

        let strip = MotzkinSet::new(
            CompactPart::Polytope(rmat(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])),
            ConeRep::Polyhedral(ray(2, &[0, 1])),
        )
        .unwrap();
        let orth = MotzkinSet::new(CompactPart::Polytope(vec![zeros(2)]), ConeRep::Polyhedral(PolyCone::orthant(2))).unwrap();
        let i = intersect_fwm(&orth, &strip).unwrap();
        for (x, inside) in [(rvec(&[1, 9]), true), (rvec(&[0, 0]), true), (rvec(&[2, 1]), false), (rvec(&[0, -1]), false)] {
            assert_eq!(i.contains(&x).unwrap(), inside, "{x:?}");
        }

        let a = MotzkinSet::new(CompactPart::Polytope(vec![zeros(2)]), ConeRep::Polyhedral(PolyCone::zero(2))).unwrap();
        let b = MotzkinSet::new(CompactPart::Polytope(vec![rvec(&[1, 0])]), ConeRep::Polyhedral(PolyCone::zero(2))).unwrap();
        assert!(matches!(intersect_fwm(&a, &b), Err(Error::Empty { .. })));
    }

    #[test]
    fn preimage_examples() {
        let f = square_orthant();
        let same = affine_preimage(&f, &AffineMap::identity(2)).unwrap();
        for x in [rvec(&[0, 0]), rvec(&[3, 5]), rvec(&[-1, 0])] {
            assert_eq!(same.contains(&x).unwrap(), f.contains(&x).unwrap());
        }

        let half_line = MotzkinSet::new(CompactPart::Polytope(vec![zeros(1)]), ConeRep::Polyhedral(PolyCone::orthant(1))).unwrap();
        let pr = AffineMap::linear(rmat(&[&[1, 0]]), 2).unwrap();
        let hp = affine_preimage(&half_line, &pr).unwrap();
        let expect = PolyCone::from_halfspaces(2, rmat(&[&[-1, 0]])).unwrap();
        assert!(hp.polyhedral_cone().unwrap().same_set(&expect));

        let unit = MotzkinSet::new(CompactPart::Polytope(rmat(&[&[0], &[1]])), ConeRep::Polyhedral(PolyCone::zero(1))).unwrap();
        let sum = AffineMap::linear(rmat(&[&[1, 1]]), 2).unwrap();
        let slab = affine_preimage(&unit, &sum).unwrap();
        assert_eq!(slab.polyhedral_cone().unwrap().lineality().len(), 1);
        for (x, inside) in [(rvec(&[5, -5]), true), (rvec(&[1, 0]), true), (rvec(&[1, 1]), false)] {
            assert_eq!(slab.contains(&x).unwrap(), inside);
        }
    }

    fn interval(lo: i64, hi: i64) -> VPolyhedron {
        VPolyhedron::polytope(1, rmat(&[&[lo], &[hi]])).unwrap()
    }

    #[test]
    fn cancellation_examples() {
        let a = interval(0, 2);
        let b = interval(0, 1);
        let k = interval(0, 1);
        let r = order_cancellation_check(&a, &a, &k).unwrap();
        assert!(r.sums_contained && r.contained);
        let r = order_cancellation_check(&a, &b, &k).unwrap();
        assert!(!r.sums_contained && !r.contained);
        let r = order_cancellation_check(&b, &b, &interval(5, 6)).unwrap();
        assert!(r.sums_contained && r.contained);
    }

    #[test]
    fn union_examples() {
        let p1 = MotzkinSet::new(CompactPart::Polytope(rmat(&[&[0], &[1]])), ConeRep::Polyhedral(PolyCone::zero(1))).unwrap();
        let p2 = MotzkinSet::new(CompactPart::Polytope(rmat(&[&[-3], &[-2]])), ConeRep::Polyhedral(PolyCone::zero(1))).unwrap();
        let q = Quadratic::linear(rvec(&[1]), rat(0));
        assert_eq!(minimize_on_union(&q, &[p1.clone(), p2.clone()]).unwrap().value(), Some(&rat(-3)));
        assert_eq!(
            minimize_on_union(&q, &[p1.clone()]).unwrap().value(),
            minimize_on_motzkin(&q, &p1).unwrap().value()
        );
        let soc = MotzkinSet::new(CompactPart::Polytope(vec![zeros(3)]), ConeRep::ice_cream(3)).unwrap();
        assert_eq!(classify_union_fw(&[soc]), None);
        assert_eq!(classify_union_fw(&[p1, p2]), Some(FwClass::FW));
    }

    #[test]
    fn slab_decomposes_into_segment_plus_line() {
        let slab = HPolyhedron::new(2, rmat(&[&[1, 1], &[-1, -1]]), rvec(&[1, 0])).unwrap();
        let m = decompose_hpoly(&slab).unwrap();
        let d = m.polyhedral_cone().unwrap();
        assert!(d.contains(&rvec(&[1, -1])) && d.contains(&rvec(&[-1, 1])));
        assert!(!d.contains(&rvec(&[1, 0])));
        for (x, inside) in [(rvec(&[5, -5]), true), (rvec(&[3, -2]), true), (rvec(&[1, 1]), false)] {
            assert_eq!(m.contains(&x).unwrap(), inside);
        }
        let empty = HPolyhedron::new(1, rmat(&[&[1], &[-1]]), rvec(&[-1, 0])).unwrap();
        assert!(matches!(decompose_hpoly(&empty), Err(Error::Empty { .. })));
    }

    #[test]
    fn set_level_minimization_dispatch() {
        let q = Quadratic::new(rmat(&[&[2, 0], &[0, 0]]), rvec(&[0, 1]), rat(0)).unwrap();
        let f = SetDescriptor::Motzkin(square_orthant());
        assert_eq!(minimize_on_set(&q, &f).unwrap().value(), Some(&rat(0)));
        let shifted = SetDescriptor::AffineImage {
            map: AffineMap::new(rmat(&[&[1, 0], &[0, 1]]), rvec(&[3, 2]), 2).unwrap(),
            inner: Box::new(f.clone()),
        };
        assert_eq!(minimize_on_set(&q, &shifted).unwrap().value(), Some(&rat(11)));
        let union = SetDescriptor::Union(vec![f.clone(), shifted]);
        assert_eq!(minimize_on_set(&q, &union).unwrap().value(), Some(&rat(0)));
        let curved = SetDescriptor::QuadSublevel {
            base: Box::new(f),
            constraints: vec![q.clone()],
        };
        assert!(matches!(minimize_on_set(&q, &curved).unwrap(), AttainmentVerdict::Unknown(_)));
    }
}
