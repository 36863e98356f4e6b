//! f-asymptotes, closedness of projections, and qFW classification.
//!
//! An affine manifold `M` is an f-asymptote of `F` when `F ∩ M = ∅` and `dist(F, M) = 0`. A
//! convex set is qFW exactly when it has none, equivalently when every orthogonal projection of
//! it is closed. Polyhedral data is decided exactly; sets cut out by quadratic inequalities are
//! handled through exact univariate tests on lines, Lagrangian certificates, and explicit
//! minimizing sequences.

use std::cmp::Ordering;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::affine::{AffineManifold, AffineMap};
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{in_span, kernel, orth_complement, rank, solve, span_basis};
use crate::motzkin::{
    classify_fw, minimize_on_hpoly, AttainmentVerdict, CompactPart, ConeRep, FwClass, MotzkinSet,
};
use crate::numeric::pattern_search;
use crate::poly::{v_to_h, HPolyhedron, VPolyhedron};
use crate::quadratic::Quadratic;
use crate::rat::{
    add, axpy, dot, dyadic_vec, mat_t_vec, mat_vec, neg, norm_sq, rat, ratio, scale,
    sqrt_bracket, sub, to_f64, unit, vec_to_f64, zeros, RMat, RVec, Rat,
};

/// Built-in one-dimensional functions whose epigraphs can be described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinFn {
    /// `x² + e^{−x²}`
    ParabolaExp,
}

impl BuiltinFn {
    pub fn tag(&self) -> &'static str {
        match self {
            BuiltinFn::ParabolaExp => "parabola_exp",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "parabola_exp" => Some(BuiltinFn::ParabolaExp),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BuiltinFn::ParabolaExp => x * x + (-x * x).exp(),
        }
    }
}

/// A set built from Motzkin sets, polyhedra and quadratic inequalities.
#[derive(Debug, Clone, PartialEq)]
pub enum SetDescriptor {
    Motzkin(MotzkinSet),
    HPoly(HPolyhedron),
    /// `{x ∈ base : g(x) <= 0 for every constraint g}`.
    QuadSublevel {
        base: Box<SetDescriptor>,
        constraints: Vec<Quadratic>,
    },
    /// `{(x, y) ∈ ℝ² : y >= f(x)}`.
    Epigraph1D(BuiltinFn),
    Product(Vec<SetDescriptor>),
    AffineImage {
        map: AffineMap,
        inner: Box<SetDescriptor>,
    },
    Intersection(Vec<SetDescriptor>),
    Union(Vec<SetDescriptor>),
}

impl SetDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            SetDescriptor::Motzkin(m) => m.dim(),
            SetDescriptor::HPoly(h) => h.dim(),
            SetDescriptor::QuadSublevel { base, .. } => base.dim(),
            SetDescriptor::Epigraph1D(_) => 2,
            SetDescriptor::Product(parts) => parts.iter().map(|p| p.dim()).sum(),
            SetDescriptor::AffineImage { map, .. } => map.codomain_dim(),
            SetDescriptor::Intersection(parts) | SetDescriptor::Union(parts) => {
                parts.first().map_or(0, |p| p.dim())
            }
        }
    }

    /// Checks dimensions across composite nodes.
    pub fn validate(&self) -> Result<()> {
        match self {
            SetDescriptor::Motzkin(_) | SetDescriptor::HPoly(_) | SetDescriptor::Epigraph1D(_) => Ok(()),
            SetDescriptor::QuadSublevel { base, constraints } => {
                base.validate()?;
                for g in constraints {
                    ensure_dim("constraint dimension", g.dim(), base.dim())?;
                }
                Ok(())
            }
            SetDescriptor::Product(parts) => {
                if parts.is_empty() {
                    return Err(Error::Malformed("empty product".into()));
                }
                parts.iter().try_for_each(|p| p.validate())
            }
            SetDescriptor::AffineImage { map, inner } => {
                inner.validate()?;
                ensure_dim("map domain", map.domain_dim, inner.dim())
            }
            SetDescriptor::Intersection(parts) | SetDescriptor::Union(parts) => {
                let first = parts
                    .first()
                    .ok_or_else(|| Error::Malformed("empty list of sets".into()))?;
                for p in parts {
                    p.validate()?;
                    ensure_dim("member dimension", p.dim(), first.dim())?;
                }
                Ok(())
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SetDescriptor::Motzkin(_) => "motzkin",
            SetDescriptor::HPoly(_) => "hpoly",
            SetDescriptor::QuadSublevel { .. } => "quad_sublevel",
            SetDescriptor::Epigraph1D(_) => "epigraph1d",
            SetDescriptor::Product(_) => "product",
            SetDescriptor::AffineImage { .. } => "affine_image",
            SetDescriptor::Intersection(_) => "intersection",
            SetDescriptor::Union(_) => "union",
        }
    }
}

/// `{x ∈ base : g(x) <= 0}` with exact membership.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSet {
    pub base: HPolyhedron,
    pub constraints: Vec<Quadratic>,
}

impl QuadSet {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.base.contains(x) && self.constraints.iter().all(|g| !g.value(x).is_positive())
    }

    fn is_polyhedral(&self) -> bool {
        self.constraints.is_empty()
    }

    fn violation_f64(&self, x: &[f64]) -> f64 {
        let mut v = 0.0;
        for (row, b) in self.base.rows().iter().zip(self.base.rhs()) {
            let s: f64 = row.iter().zip(x).map(|(a, xi)| to_f64(a) * xi).sum::<f64>() - to_f64(b);
            v += s.max(0.0).powi(2);
        }
        for g in &self.constraints {
            v += g.value_f64(x).max(0.0).powi(2);
        }
        v
    }
}

/// One piece of a flattened set: `inner ⊆ piece ⊆ outer`. Both are equal when the piece is
/// described exactly.
#[derive(Debug, Clone, PartialEq)]
struct Piece {
    inner: QuadSet,
    outer: QuadSet,
}

impl Piece {
    fn exact(q: QuadSet) -> Self {
        Piece {
            inner: q.clone(),
            outer: q,
        }
    }

    fn is_exact(&self) -> bool {
        self.inner == self.outer
    }
}

fn embed_quadratic(q: &Quadratic, offset: usize, total: usize) -> Quadratic {
    let n = q.dim();
    let mut a = vec![zeros(total); total];
    let mut b = zeros(total);
    for i in 0..n {
        b[offset + i] = q.linear_term()[i].clone();
        for j in 0..n {
            a[offset + i][offset + j] = q.hessian()[i][j].clone();
        }
    }
    Quadratic::new(a, b, q.constant().clone()).expect("total >= 1")
}

fn embed_hpoly(h: &HPolyhedron, offset: usize, total: usize) -> HPolyhedron {
    let mut out = HPolyhedron::whole(total);
    for (row, rhs) in h.rows().iter().zip(h.rhs()) {
        let mut r = zeros(total);
        for (i, x) in row.iter().enumerate() {
            r[offset + i] = x.clone();
        }
        out.push(r, rhs.clone());
    }
    out
}

fn stack(a: &QuadSet, b: &QuadSet) -> QuadSet {
    let mut base = a.base.clone();
    for (row, rhs) in b.base.rows().iter().zip(b.base.rhs()) {
        base.push(row.clone(), rhs.clone());
    }
    let mut constraints = a.constraints.clone();
    constraints.extend(b.constraints.iter().cloned());
    QuadSet { base, constraints }
}

fn cone_translate(y: &[Rat], halfspaces: &[RVec], n: usize) -> HPolyhedron {
    let mut h = HPolyhedron::whole(n);
    for a in halfspaces {
        h.push(a.clone(), dot(a, y));
    }
    h
}

/// `v + D` for a second-order cone `D` as `{aᵀ(x−v) >= 0, α²‖a‖²‖x−v‖² − (aᵀ(x−v))² <= 0}`.
fn soc_quadset(v: &[Rat], axis: &[Rat], aperture_sq: &Rat) -> QuadSet {
    let n = v.len();
    let k = aperture_sq * norm_sq(axis);
    // g(x) = k‖x − v‖² − (aᵀ(x − v))², written as ½xᵀAx + bᵀx + c
    let mut a = vec![zeros(n); n];
    for i in 0..n {
        for j in 0..n {
            let mut e = -(&axis[i] * &axis[j]);
            if i == j {
                e += &k;
            }
            a[i][j] = e * rat(2);
        }
    }
    let av = mat_vec(&a, v);
    let b = neg(&av);
    let c = dot(v, &av) / rat(2);
    let g = Quadratic::new(a, b, c).expect("n >= 1");
    let mut base = HPolyhedron::whole(n);
    base.push(neg(axis), -dot(axis, v));
    QuadSet {
        base,
        constraints: vec![g],
    }
}

/// Flattens a descriptor into a finite union of quadratic pieces, or `None` when a node has no
/// such description (affine images, balls plus nonzero cones, polytopes plus circular cones).
fn flatten(f: &SetDescriptor) -> Option<Vec<Piece>> {
    match f {
        SetDescriptor::HPoly(h) => Some(vec![Piece::exact(QuadSet {
            base: h.clone(),
            constraints: Vec::new(),
        })]),
        SetDescriptor::Motzkin(m) => flatten_motzkin(m),
        SetDescriptor::QuadSublevel { base, constraints } => {
            let pieces = flatten(base)?;
            Some(
                pieces
                    .into_iter()
                    .map(|p| {
                        let mut inner = p.inner;
                        let mut outer = p.outer;
                        inner.constraints.extend(constraints.iter().cloned());
                        outer.constraints.extend(constraints.iter().cloned());
                        Piece { inner, outer }
                    })
                    .collect(),
            )
        }
        SetDescriptor::Epigraph1D(BuiltinFn::ParabolaExp) => {
            // x² <= x² + e^{−x²} <= x² + 1, and x² + e^{−x²} >= 1
            let inner_g = Quadratic::from_terms(2, &[(0, 0, rat(1))], vec![rat(0), rat(-1)], rat(1));
            let outer_g = Quadratic::from_terms(2, &[(0, 0, rat(1))], vec![rat(0), rat(-1)], rat(0));
            let mut outer_base = HPolyhedron::whole(2);
            outer_base.push(vec![rat(0), rat(-1)], rat(-1));
            Some(vec![Piece {
                inner: QuadSet {
                    base: HPolyhedron::whole(2),
                    constraints: vec![inner_g],
                },
                outer: QuadSet {
                    base: outer_base,
                    constraints: vec![outer_g],
                },
            }])
        }
        SetDescriptor::Product(parts) => {
            let total: usize = parts.iter().map(|p| p.dim()).sum();
            let mut acc: Vec<Piece> = vec![Piece::exact(QuadSet {
                base: HPolyhedron::whole(total),
                constraints: Vec::new(),
            })];
            let mut offset = 0;
            for part in parts {
                let pieces = flatten(part)?;
                let lift = |q: &QuadSet| QuadSet {
                    base: embed_hpoly(&q.base, offset, total),
                    constraints: q
                        .constraints
                        .iter()
                        .map(|g| embed_quadratic(g, offset, total))
                        .collect(),
                };
                let mut next = Vec::new();
                for a in &acc {
                    for p in &pieces {
                        next.push(Piece {
                            inner: stack(&a.inner, &lift(&p.inner)),
                            outer: stack(&a.outer, &lift(&p.outer)),
                        });
                    }
                }
                acc = next;
                offset += part.dim();
            }
            Some(acc)
        }
        SetDescriptor::Intersection(parts) => {
            let mut acc: Option<Vec<Piece>> = None;
            for part in parts {
                let pieces = flatten(part)?;
                acc = Some(match acc {
                    None => pieces,
                    Some(prev) => prev
                        .iter()
                        .flat_map(|a| {
                            pieces.iter().map(move |p| Piece {
                                inner: stack(&a.inner, &p.inner),
                                outer: stack(&a.outer, &p.outer),
                            })
                        })
                        .collect(),
                });
            }
            acc
        }
        SetDescriptor::Union(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.extend(flatten(p)?);
            }
            Some(out)
        }
        SetDescriptor::AffineImage { .. } => None,
    }
}

fn flatten_motzkin(m: &MotzkinSet) -> Option<Vec<Piece>> {
    let n = m.dim();
    match (m.compact(), m.cone()) {
        (CompactPart::Polytope(v), ConeRep::Polyhedral(d)) => {
            let vp = VPolyhedron {
                dim: n,
                vertices: v.clone(),
                rays: d.generators().to_vec(),
                lineality: Vec::new(),
                infeasibility: None,
            };
            let h = v_to_h(&vp).ok()?;
            Some(vec![Piece::exact(QuadSet {
                base: h,
                constraints: Vec::new(),
            })])
        }
        (CompactPart::FinitePointSet(pts), ConeRep::Polyhedral(d)) => Some(
            pts.iter()
                .map(|y| {
                    Piece::exact(QuadSet {
                        base: cone_translate(y, d.halfspaces(), n),
                        constraints: Vec::new(),
                    })
                })
                .collect(),
        ),
        (CompactPart::Ball { center, radius }, ConeRep::Polyhedral(d)) if d.is_zero() => {
            let squares: Vec<_> = (0..n).map(|i| (i, i, Rat::one())).collect();
            let g = Quadratic::from_terms(
                n,
                &squares,
                scale(&rat(-2), center),
                norm_sq(center) - radius * radius,
            );
            Some(vec![Piece::exact(QuadSet {
                base: HPolyhedron::whole(n),
                constraints: vec![g],
            })])
        }
        (CompactPart::FinitePointSet(pts), ConeRep::SecondOrder { axis, aperture_sq }) => Some(
            pts.iter()
                .map(|y| Piece::exact(soc_quadset(y, axis, aperture_sq)))
                .collect(),
        ),
        (CompactPart::Polytope(v), ConeRep::SecondOrder { axis, aperture_sq }) if v.len() == 1 => {
            Some(vec![Piece::exact(soc_quadset(&v[0], axis, aperture_sq))])
        }
        _ => None,
    }
}

/// Exact membership where the description decides it; `None` for affine images and for points
/// between the inner and outer descriptions of a piece.
pub fn set_contains(f: &SetDescriptor, x: &[Rat]) -> Option<bool> {
    if x.len() != f.dim() {
        return Some(false);
    }
    if let SetDescriptor::Motzkin(m) = f {
        return m.contains(x).ok();
    }
    let pieces = flatten(f)?;
    if pieces.iter().any(|p| p.inner.contains(x)) {
        Some(true)
    } else if pieces.iter().all(|p| !p.outer.contains(x)) {
        Some(false)
    } else {
        None
    }
}

/// Exact test that `d` is a recession direction of every piece, using the sample point `p` of
/// each piece: for a closed convex piece one point suffices.
pub fn is_recession_direction(f: &SetDescriptor, d: &[Rat]) -> Option<bool> {
    let pieces = flatten(f)?;
    for piece in pieces.iter().filter(|p| p.is_exact()) {
        let q = &piece.inner;
        if q.base.rows().iter().any(|r| dot(r, d).is_positive()) {
            return Some(false);
        }
        let Some(p) = interior_samples(q, 1).pop() else {
            continue;
        };
        for g in &q.constraints {
            // g(p + t d) = g(p) + t·slope + t²·curv must stay <= 0 for all t >= 0
            let curv = g.form(d);
            let slope = dot(&g.gradient(&p), d);
            let stays = if curv.is_positive() {
                false
            } else if curv.is_zero() {
                !slope.is_positive()
            } else {
                !slope.is_positive() || !(g.value(&p) - &slope * &slope / (rat(4) * &curv)).is_positive()
            };
            if !stays {
                return Some(false);
            }
        }
    }
    if pieces.iter().any(|p| !p.is_exact()) {
        return None;
    }
    Some(true)
}

/// The recession cone of the polyhedral base of a single-piece description.
pub fn base_recession_cone(f: &SetDescriptor) -> Option<crate::poly::PolyCone> {
    let pieces = flatten(f)?;
    match pieces.as_slice() {
        [p] => crate::poly::recession_cone(&p.outer.base).ok(),
        _ => None,
    }
}

/// A manifold with the data needed for exact distances: an orthonormal-free basis `E` of `M⊥`
/// and `(EEᵀ)⁻¹`.
struct Frame {
    m: AffineManifold,
    e: RMat,
    gram_inv: RMat,
}

impl Frame {
    fn new(m: &AffineManifold) -> Self {
        let e = orth_complement(&m.directions, m.dim);
        let k = e.len();
        let gram: RMat = e.iter().map(|r| e.iter().map(|s| dot(r, s)).collect()).collect();
        let gram_inv: RMat = (0..k)
            .map(|j| solve(&gram, &unit(k, j), k).expect("independent rows"))
            .collect();
        Frame {
            m: m.clone(),
            e,
            gram_inv,
        }
    }

    fn dist_sq(&self, x: &[Rat]) -> Rat {
        if self.e.is_empty() {
            return Rat::zero();
        }
        let r = mat_vec(&self.e, &sub(x, &self.m.point));
        dot(&r, &mat_vec(&self.gram_inv, &r))
    }

    fn nearest(&self, x: &[Rat]) -> RVec {
        if self.e.is_empty() {
            return x.to_vec();
        }
        let r = mat_vec(&self.e, &sub(x, &self.m.point));
        let w = mat_vec(&self.gram_inv, &r);
        sub(x, &mat_t_vec(&self.e, &w, self.m.dim))
    }

    /// `dist(·, M)²` as a quadratic.
    fn dist_quadratic(&self) -> Quadratic {
        let n = self.m.dim;
        // A = 2 EᵀG E
        let ge: RMat = self
            .gram_inv
            .iter()
            .map(|row| mat_t_vec(&self.e, row, n))
            .collect();
        let a: RMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s: Rat = self.e.iter().zip(&ge).map(|(er, gr)| &er[i] * &gr[j]).sum();
                        s * rat(2)
                    })
                    .collect()
            })
            .collect();
        let p = &self.m.point;
        let ap = mat_vec(&a, p);
        let c = dot(p, &ap) / rat(2);
        Quadratic::new(a, neg(&ap), c).expect("n >= 1")
    }
}

/// A pair of points at small distance, one in `F` and one in `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidencePair {
    pub in_set: Vec<f64>,
    pub in_manifold: Vec<f64>,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistanceVerdict {
    /// A point of `F ∩ M`. `exact` holds a rational witness when one was found; `approx` is
    /// always filled.
    Intersects { exact: Option<RVec>, approx: Vec<f64> },
    /// `dist(F, M)² >= bound`, with equality when `exact`.
    Positive { dist_sq_bound: Rat, exact: bool },
    /// Pairs with strictly decreasing distances, reaching below 10⁻², 10⁻⁴ and 10⁻⁶.
    ZeroEvidence(Vec<EvidencePair>),
    Unknown(String),
}

impl DistanceVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            DistanceVerdict::Intersects { .. } => "intersects",
            DistanceVerdict::Positive { .. } => "positive",
            DistanceVerdict::ZeroEvidence(_) => "zero_evidence",
            DistanceVerdict::Unknown(_) => "unknown",
        }
    }
}

/// `a + b√d`.
#[derive(Debug, Clone, PartialEq)]
struct Surd {
    a: Rat,
    b: Rat,
    d: Rat,
}

impl Surd {
    fn rational(a: Rat) -> Self {
        Surd {
            a,
            b: Rat::zero(),
            d: Rat::zero(),
        }
    }

    fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Rat::zero());
        if self.b.is_zero() || self.d.is_zero() {
            return sa;
        }
        let sb = self.b.cmp(&Rat::zero());
        if sa != Ordering::Less && sb != Ordering::Less {
            return Ordering::Greater;
        }
        if sa != Ordering::Greater && sb != Ordering::Greater {
            return Ordering::Less;
        }
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.d)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&self.d).sqrt()
    }

    fn is_rational(&self) -> bool {
        self.b.is_zero() || self.d.is_zero()
    }

    /// `αu² + βu + γ` at `u = self`.
    fn eval_poly(&self, alpha: &Rat, beta: &Rat, gamma: &Rat) -> Surd {
        let sq_a = &self.a * &self.a + &self.b * &self.b * &self.d;
        let sq_b = rat(2) * &self.a * &self.b;
        Surd {
            a: alpha * sq_a + beta * &self.a + gamma,
            b: alpha * sq_b + beta * &self.b,
            d: self.d.clone(),
        }
    }
}

/// `F ∩ {x₀ + u v}` for one exact piece, decided exactly. Returns the feasible parameter.
fn line_feasible(s: &QuadSet, x0: &[Rat], v: &[Rat]) -> Option<Surd> {
    struct Cons {
        alpha: Rat,
        beta: Rat,
        gamma: Rat,
    }
    let mut cons: Vec<Cons> = Vec::new();
    for (row, rhs) in s.base.rows().iter().zip(s.base.rhs()) {
        cons.push(Cons {
            alpha: Rat::zero(),
            beta: dot(row, v),
            gamma: dot(row, x0) - rhs,
        });
    }
    for g in &s.constraints {
        cons.push(Cons {
            alpha: g.form(v),
            beta: dot(&g.gradient(x0), v),
            gamma: g.value(x0),
        });
    }
    let mut candidates = vec![Surd::rational(Rat::zero())];
    for c in &cons {
        if !c.alpha.is_zero() {
            let disc = &c.beta * &c.beta - rat(4) * &c.alpha * &c.gamma;
            if disc.is_negative() {
                continue;
            }
            let two_a = rat(2) * &c.alpha;
            for sgn in [1, -1] {
                candidates.push(Surd {
                    a: -&c.beta / &two_a,
                    b: rat(sgn) / &two_a,
                    d: disc.clone(),
                });
            }
        } else if !c.beta.is_zero() {
            candidates.push(Surd::rational(-&c.gamma / &c.beta));
        }
    }
    let feasible = |u: &Surd| {
        cons.iter()
            .all(|c| u.eval_poly(&c.alpha, &c.beta, &c.gamma).sign() != Ordering::Greater)
    };
    let found: Vec<Surd> = candidates.into_iter().filter(|u| feasible(u)).collect();
    if let Some(r) = found.iter().find(|u| u.is_rational()) {
        return Some(r.clone());
    }
    // prefer a rational parameter near an irrational feasible endpoint
    for u in &found {
        let (lo, hi) = sqrt_bracket(&u.d, 64);
        for approx in [&u.a + &u.b * &lo, &u.a + &u.b * &hi] {
            for k in [0u32, 8, 16, 24, 32, 40] {
                let eps = Rat::new(1.into(), num::BigInt::from(1u64) << k as usize);
                for cand in [&approx + &eps, &approx - &eps, approx.clone()] {
                    let c = Surd::rational(cand);
                    if feasible(&c) {
                        return Some(c);
                    }
                }
            }
        }
    }
    found.into_iter().next()
}

fn point_on_line(x0: &[Rat], v: &[Rat], u: &Surd) -> (Option<RVec>, Vec<f64>) {
    let approx: Vec<f64> = x0
        .iter()
        .zip(v)
        .map(|(a, b)| to_f64(a) + to_f64(b) * u.to_f64())
        .collect();
    if u.is_rational() {
        (Some(axpy(x0, &u.a, v)), approx)
    } else {
        (None, approx)
    }
}

/// `F ∩ M` for a general manifold: `Some(true)` nonempty, `Some(false)` certified empty.
fn manifold_meets(s: &QuadSet, m: &AffineManifold) -> (Option<bool>, Option<(Option<RVec>, Vec<f64>)>) {
    match m.flat_dim() {
        0 => {
            let inside = s.contains(&m.point);
            let w = inside.then(|| (Some(m.point.clone()), vec_to_f64(&m.point)));
            (Some(inside), w)
        }
        1 => match line_feasible(s, &m.point, &m.directions[0]) {
            Some(u) => (Some(true), Some(point_on_line(&m.point, &m.directions[0], &u))),
            None => (Some(false), None),
        },
        _ => {
            if let Some(x) = search_point_on_manifold(s, m) {
                let approx = vec_to_f64(&x);
                return (Some(true), Some((Some(x), approx)));
            }
            if lagrangian_empty(s, m) {
                (Some(false), None)
            } else {
                (None, None)
            }
        }
    }
}

fn search_point_on_manifold(s: &QuadSet, m: &AffineManifold) -> Option<RVec> {
    let k = m.flat_dim();
    let x0 = vec_to_f64(&m.point);
    let dirs: Vec<Vec<f64>> = m.directions.iter().map(|d| vec_to_f64(d)).collect();
    let at = |u: &[f64]| -> Vec<f64> {
        let mut x = x0.clone();
        for (d, ui) in dirs.iter().zip(u) {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += ui * di;
            }
        }
        x
    };
    let mut starts = vec![vec![0.0; k]];
    for j in 0..k {
        for s in [1.0, -1.0, 10.0, -10.0] {
            let mut u = vec![0.0; k];
            u[j] = s;
            starts.push(u);
        }
    }
    for u0 in starts {
        let (u, v) = pattern_search(|u| s.violation_f64(&at(u)), |_: &mut [f64]| {}, &u0, 1.0, 1e-12);
        if v > 1e-10 {
            continue;
        }
        for bits in [8u32, 16, 24, 32, 48] {
            let ur = dyadic_vec(&u, bits);
            let x = m.at(&ur);
            if s.contains(&x) {
                return Some(x);
            }
        }
    }
    None
}

const LAMBDA_GRID: [(i64, i64); 8] = [(1, 1), (1, 2), (2, 1), (1, 4), (4, 1), (1, 8), (8, 1), (0, 1)];

fn lambda_vectors(m: usize) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for prefix in &out {
            for &(p, q) in &LAMBDA_GRID {
                let mut v = prefix.clone();
                v.push(ratio(p, q));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn combine(constraints: &[Quadratic], lambda: &[Rat], n: usize) -> Quadratic {
    let mut q = Quadratic::zero(n);
    for (g, l) in constraints.iter().zip(lambda) {
        if !l.is_zero() {
            q = q.add_scaled(l, g);
        }
    }
    q
}

/// Certifies `F ∩ M = ∅` by `λ >= 0` with `min_{u : x(u) ∈ base} Σλᵢgᵢ(x(u)) > 0`.
fn lagrangian_empty(s: &QuadSet, m: &AffineManifold) -> bool {
    let k = m.flat_dim();
    if k == 0 {
        return !s.contains(&m.point);
    }
    let par = m.parameterization();
    let mut base_u = HPolyhedron::whole(k);
    for (row, rhs) in s.base.rows().iter().zip(s.base.rhs()) {
        base_u.push(mat_t_vec(&par.matrix, row, k), rhs - dot(row, &m.point));
    }
    if base_u.feasible_point().is_err() {
        return true;
    }
    let pulled: Vec<Quadratic> = s
        .constraints
        .iter()
        .filter_map(|g| g.compose_affine(&par).ok())
        .collect();
    for lambda in lambda_vectors(pulled.len()) {
        if lambda.iter().all(|l| l.is_zero()) {
            continue;
        }
        let q = combine(&pulled, &lambda, k);
        if let Ok(AttainmentVerdict::Attained { value, .. }) = minimize_on_hpoly(&q, &base_u) {
            if value.is_positive() {
                return true;
            }
        }
    }
    false
}

/// A separating slab: `h ⟂ M` with `inf_{outer} hᵀx > hᵀx₀`, the infimum bounded through a
/// Lagrangian relaxation solved exactly over the polyhedral base.
fn slab_bound(s: &QuadSet, frame: &Frame) -> Option<Rat> {
    let n = s.dim();
    let mut hs: RMat = Vec::new();
    for (i, e) in frame.e.iter().enumerate() {
        hs.push(e.clone());
        for f in &frame.e[i + 1..] {
            hs.push(add(e, f));
            hs.push(sub(e, f));
        }
    }
    let hs: RMat = hs.iter().flat_map(|h| [h.clone(), neg(h)]).collect();
    let lambdas = lambda_vectors(s.constraints.len());
    for h in &hs {
        let level = dot(h, &frame.m.point);
        let lin = Quadratic::linear(h.clone(), Rat::zero());
        for lambda in &lambdas {
            let q = combine(&s.constraints, lambda, n).add_scaled(&Rat::one(), &lin);
            if let Ok(AttainmentVerdict::Attained { value, .. }) = minimize_on_hpoly(&q, &s.base) {
                if value > level {
                    let gap = value - &level;
                    return Some(&gap * &gap / norm_sq(h));
                }
            }
        }
    }
    None
}

/// Rational points of `s` near the origin, from the base's feasible point and a small integer
/// grid ordered by sup-norm.
fn interior_samples(s: &QuadSet, limit: usize) -> Vec<RVec> {
    let n = s.dim();
    let mut out: Vec<RVec> = Vec::new();
    if let Ok(p) = s.base.feasible_point() {
        if s.contains(&p) {
            out.push(p);
        }
    }
    for radius in 0i64..=3 {
        let side = 2 * radius + 1;
        let Some(total) = (side as u64).checked_pow(n as u32) else {
            break;
        };
        if total > 200_000 {
            break;
        }
        for idx in 0..total {
            let mut x = Vec::with_capacity(n);
            let mut r = idx;
            let mut on_shell = false;
            for _ in 0..n {
                let c = (r % side as u64) as i64 - radius;
                r /= side as u64;
                on_shell |= c.abs() == radius;
                x.push(rat(c));
            }
            if on_shell && !out.contains(&x) && s.contains(&x) {
                out.push(x);
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}

/// Walks along a direction `v` of `M` that is also a recession direction of `s` and bisects
/// between `M` and the shifted inner point to produce pairs at shrinking distance.
fn zero_evidence(s: &QuadSet, frame: &Frame) -> Option<Vec<EvidencePair>> {
    let m = &frame.m;
    let mut dirs: RMat = Vec::new();
    for (i, d) in m.directions.iter().enumerate() {
        dirs.push(d.clone());
        for e in &m.directions[i + 1..] {
            dirs.push(add(d, e));
            dirs.push(sub(d, e));
        }
    }
    let dirs: RMat = dirs.iter().flat_map(|d| [d.clone(), neg(d)]).collect();
    let samples = interior_samples(s, 16);
    for x_in in &samples {
        let base = frame.nearest(x_in);
        if let Some(pairs) = walk(s, frame, x_in, &base, &dirs) {
            return Some(pairs);
        }
    }
    None
}

fn walk(s: &QuadSet, frame: &Frame, x_in: &[Rat], base: &[Rat], dirs: &[RVec]) -> Option<Vec<EvidencePair>> {
    'dir: for v in dirs {
        for t in [1i64, 10, 100, 1000] {
            if !s.contains(&axpy(x_in, &rat(t), v)) {
                continue 'dir;
            }
        }
        let mut pairs: Vec<EvidencePair> = Vec::new();
        let mut scale_s = rat(10);
        for _ in 0..14 {
            let y = axpy(base, &scale_s, v);
            let z = axpy(x_in, &scale_s, v);
            if s.contains(&y) {
                return None;
            }
            let (mut lo, mut hi) = (Rat::zero(), Rat::one());
            let dz = sub(&z, &y);
            for _ in 0..64 {
                let mid = (&lo + &hi) / rat(2);
                if s.contains(&axpy(&y, &mid, &dz)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let w = axpy(&y, &hi, &dz);
            let dist = to_f64(&frame.dist_sq(&w)).sqrt();
            let proj = frame.nearest(&w);
            if pairs.last().is_none_or(|p| dist < p.distance) {
                pairs.push(EvidencePair {
                    in_set: vec_to_f64(&w),
                    in_manifold: vec_to_f64(&proj),
                    distance: dist,
                });
            }
            if dist < 1e-6 {
                break;
            }
            scale_s *= rat(10);
        }
        let reached = |t: f64| pairs.iter().any(|p| p.distance < t);
        if reached(1e-2) && reached(1e-4) && reached(1e-6) {
            return Some(pairs);
        }
    }
    None
}

/// Exact squared distance between an H-polyhedron and `M`.
fn polyhedral_distance(h: &HPolyhedron, frame: &Frame) -> Result<Option<DistanceVerdict>> {
    if h.feasible_point().is_err() {
        return Ok(None);
    }
    let q = frame.dist_quadratic();
    match minimize_on_hpoly(&q, h)? {
        AttainmentVerdict::Attained { point, value, .. } => Ok(Some(if value.is_zero() {
            let approx = vec_to_f64(&point);
            DistanceVerdict::Intersects {
                exact: Some(point),
                approx,
            }
        } else {
            DistanceVerdict::Positive {
                dist_sq_bound: value,
                exact: true,
            }
        })),
        other => Err(Error::Malformed(format!(
            "distance quadratic reported {}",
            other.kind()
        ))),
    }
}

struct PieceOutcome {
    distance: DistanceVerdict,
    /// `Some(true)` when `piece ∩ M = ∅` is certified.
    empty: Option<bool>,
}

fn analyze_piece(p: &Piece, frame: &Frame) -> Result<Option<PieceOutcome>> {
    if p.is_exact() && p.inner.is_polyhedral() {
        return Ok(polyhedral_distance(&p.inner.base, frame)?.map(|d| {
            let empty = Some(!matches!(d, DistanceVerdict::Intersects { .. }));
            PieceOutcome { distance: d, empty }
        }));
    }
    if p.outer.base.feasible_point().is_err() {
        return Ok(None);
    }
    let (inner_meets, witness) = manifold_meets(&p.inner, &frame.m);
    if inner_meets == Some(true) {
        let (exact, approx) = witness.expect("witness accompanies a nonempty intersection");
        return Ok(Some(PieceOutcome {
            distance: DistanceVerdict::Intersects { exact, approx },
            empty: Some(false),
        }));
    }
    let outer_empty = if p.is_exact() {
        inner_meets.map(|meets| !meets)
    } else {
        manifold_meets(&p.outer, &frame.m).0.map(|meets| !meets)
    };
    if outer_empty == Some(true) {
        if let Some(bound) = slab_bound(&p.outer, frame) {
            return Ok(Some(PieceOutcome {
                distance: DistanceVerdict::Positive {
                    dist_sq_bound: bound,
                    exact: false,
                },
                empty: Some(true),
            }));
        }
    }
    let distance = match zero_evidence(&p.inner, frame) {
        Some(ev) => DistanceVerdict::ZeroEvidence(ev),
        None => DistanceVerdict::Unknown(
            "no intersection point, separating slab, or minimizing sequence found".into(),
        ),
    };
    Ok(Some(PieceOutcome {
        distance,
        empty: outer_empty,
    }))
}

fn fw_shortcut(f: &SetDescriptor) -> Option<&MotzkinSet> {
    match f {
        SetDescriptor::Motzkin(m) if classify_fw(m).class == FwClass::FW => Some(m),
        _ => None,
    }
}

/// Distance trichotomy between `F` and `M`.
pub fn distance_to_manifold(f: &SetDescriptor, m: &AffineManifold) -> Result<DistanceVerdict> {
    Ok(analyze(f, m)?.0)
}

fn analyze(f: &SetDescriptor, m: &AffineManifold) -> Result<(DistanceVerdict, Option<bool>)> {
    f.validate()?;
    ensure_dim("manifold dimension", m.dim, f.dim())?;
    let pieces = match flatten(f) {
        Some(p) => p,
        None => {
            return Ok((
                DistanceVerdict::Unknown(format!(
                    "no quadratic description available for this {} set",
                    f.kind()
                )),
                None,
            ))
        }
    };
    let frame = Frame::new(m);
    let mut outcomes = Vec::new();
    for p in &pieces {
        if let Some(o) = analyze_piece(p, &frame)? {
            outcomes.push(o);
        }
    }
    if outcomes.is_empty() {
        return Err(Error::Empty {
            context: "the set is empty".into(),
            farkas: None,
        });
    }
    let all_empty = if outcomes.iter().all(|o| o.empty == Some(true)) {
        Some(true)
    } else if outcomes.iter().any(|o| o.empty == Some(false)) {
        Some(false)
    } else {
        None
    };
    if let Some(o) = outcomes
        .iter()
        .find(|o| matches!(o.distance, DistanceVerdict::Intersects { .. }))
    {
        return Ok((o.distance.clone(), Some(false)));
    }
    if let Some(o) = outcomes
        .iter()
        .find(|o| matches!(o.distance, DistanceVerdict::ZeroEvidence(_)))
    {
        return Ok((o.distance.clone(), all_empty));
    }
    if outcomes
        .iter()
        .all(|o| matches!(o.distance, DistanceVerdict::Positive { .. }))
    {
        let mut best: Option<(Rat, bool)> = None;
        for o in &outcomes {
            if let DistanceVerdict::Positive { dist_sq_bound, exact } = &o.distance {
                if best.as_ref().is_none_or(|(b, _)| dist_sq_bound < b) {
                    best = Some((dist_sq_bound.clone(), *exact));
                }
            }
        }
        let (dist_sq_bound, exact) = best.expect("nonempty");
        return Ok((DistanceVerdict::Positive { dist_sq_bound, exact }, all_empty));
    }
    let why = outcomes
        .iter()
        .find_map(|o| match &o.distance {
            DistanceVerdict::Unknown(w) => Some(w.clone()),
            _ => None,
        })
        .unwrap_or_else(|| "undecided".into());
    Ok((DistanceVerdict::Unknown(why), all_empty))
}

pub const ASYMPTOTE_CITATION: &str =
    "f-asymptote definition: F ∩ M = ∅ and dist(F, M) = 0; FW-sets have no f-asymptotes";

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoteReport {
    /// `None` when either leg of the definition is undecided.
    pub is_asymptote: Option<bool>,
    pub distance: DistanceVerdict,
    pub intersection_empty: Option<bool>,
    pub justification: String,
    pub citation: String,
}

/// Decides whether `M` is an f-asymptote of `F`.
pub fn is_f_asymptote(f: &SetDescriptor, m: &AffineManifold) -> Result<AsymptoteReport> {
    if let Some(ms) = fw_shortcut(f) {
        if flatten_motzkin(ms).is_none() {
            return Ok(AsymptoteReport {
                is_asymptote: Some(false),
                distance: DistanceVerdict::Unknown("distance not computed".into()),
                intersection_empty: None,
                justification: "the Motzkin set has a polyhedral recession cone, so it is FW and FW-sets have no f-asymptotes".into(),
                citation: ASYMPTOTE_CITATION.into(),
            });
        }
    }
    let (distance, empty) = analyze(f, m)?;
    let (is_asymptote, justification) = match (&distance, empty) {
        (DistanceVerdict::Intersects { .. }, _) => (Some(false), "M meets F".to_string()),
        (DistanceVerdict::Positive { .. }, _) => {
            (Some(false), "dist(F, M) is bounded away from zero".to_string())
        }
        (DistanceVerdict::ZeroEvidence(ev), Some(true)) => (
            Some(true),
            format!(
                "F ∩ M = ∅ is certified and {} pairs reach distance {:.3e}",
                ev.len(),
                ev.last().map_or(f64::NAN, |p| p.distance)
            ),
        ),
        (DistanceVerdict::ZeroEvidence(_), _) => {
            (None, "distance tends to zero but emptiness of F ∩ M is not certified".to_string())
        }
        (DistanceVerdict::Unknown(why), _) => (None, why.clone()),
    };
    Ok(AsymptoteReport {
        is_asymptote,
        distance,
        intersection_empty: empty,
        justification,
        citation: ASYMPTOTE_CITATION.into(),
    })
}

/// The map whose closedness is tested: keep the listed coordinates, or quotient by a kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    /// 0-based coordinates that are kept.
    Coords(Vec<usize>),
    /// Basis of the kernel of an orthogonal projection.
    Kernel(RMat),
}

impl Projection {
    pub fn kernel_basis(&self, n: usize) -> Result<RMat> {
        match self {
            Projection::Coords(c) => {
                if c.iter().any(|&i| i >= n) {
                    return Err(Error::Malformed(format!(
                        "projection coordinates {c:?} exceed dimension {n}"
                    )));
                }
                Ok((0..n).filter(|i| !c.contains(i)).map(|i| unit(n, i)).collect())
            }
            Projection::Kernel(k) => {
                for v in k {
                    ensure_dim("kernel vector", v.len(), n)?;
                }
                Ok(span_basis(k, n))
            }
        }
    }
}

pub const CLOSEDNESS_CITATION: &str = "closed-projection characterization: a convex set is qFW iff it has no f-asymptotes iff every orthogonal projection of it is closed";

#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessReport {
    pub closed: Option<bool>,
    pub justification: String,
    pub citation: String,
    /// An f-asymptote of the form `x₀ + ker P` witnessing non-closedness.
    pub witness: Option<AffineManifold>,
}

fn closed(justification: impl Into<String>, citation: &str) -> ClosednessReport {
    ClosednessReport {
        closed: Some(true),
        justification: justification.into(),
        citation: citation.into(),
        witness: None,
    }
}

/// Closedness of the image of a circular cone `{aᵀx >= α‖a‖‖x‖}` under the projection with
/// kernel `N`. With `s² = ‖P_N a‖²`: if `s² < α²‖a‖²` then `N ∩ D = {0}`; if `s² > α²‖a‖²` then
/// `N` meets the interior and the image is the whole space; at equality `N ∩ D` is a boundary
/// ray, `N` lies in the tangent hyperplane along it, and the image is closed exactly when `N`
/// is that whole hyperplane.
pub fn soc_projection_closed(axis: &[Rat], aperture_sq: &Rat, kernel_basis: &[RVec]) -> ClosednessReport {
    let n = axis.len();
    let cite = "closedness of linear images of circular cones";
    let nb = span_basis(kernel_basis, n);
    if nb.is_empty() {
        return closed("the projection is injective", cite);
    }
    let k = nb.len();
    let gram: RMat = nb.iter().map(|r| nb.iter().map(|s| dot(r, s)).collect()).collect();
    let na: RVec = nb.iter().map(|r| dot(r, axis)).collect();
    let w = solve(&gram, &na, k).expect("independent basis");
    let s2 = dot(&na, &w);
    let bound = aperture_sq * norm_sq(axis);
    match s2.cmp(&bound) {
        Ordering::Less => closed("the kernel meets the cone only at the origin", cite),
        Ordering::Greater => closed(
            "the kernel contains an interior ray, so the image is the whole space",
            cite,
        ),
        Ordering::Equal if k == n - 1 => closed(
            "the kernel is the tangent hyperplane along a boundary ray; the image is a closed half-line",
            cite,
        ),
        Ordering::Equal => ClosednessReport {
            closed: Some(false),
            justification: format!(
                "the kernel contains the boundary ray {:?} but no interior ray",
                vec_to_f64(&mat_t_vec(&nb, &w, n))
            ),
            citation: cite.into(),
            witness: None,
        },
    }
}

/// Whether `P(F)` is closed.
pub fn projection_closed(f: &SetDescriptor, proj: &Projection) -> Result<ClosednessReport> {
    f.validate()?;
    let n = f.dim();
    let nb = proj.kernel_basis(n)?;
    if nb.is_empty() {
        return Ok(closed(
            "the projection is injective and F is closed",
            CLOSEDNESS_CITATION,
        ));
    }
    match f {
        SetDescriptor::HPoly(_) => {
            return Ok(closed(
                "projections of polyhedra are polyhedra",
                "Fourier–Motzkin elimination",
            ))
        }
        SetDescriptor::Motzkin(m) => {
            return Ok(match m.cone() {
                ConeRep::Polyhedral(_) => closed(
                    "the image is a compact set plus a polyhedral cone",
                    "linear images of compact sets and polyhedral cones are closed",
                ),
                ConeRep::SecondOrder { axis, aperture_sq } => {
                    let mut r = soc_projection_closed(axis, aperture_sq, &nb);
                    r.justification = format!(
                        "image is a compact set plus the image of the recession cone; {}",
                        r.justification
                    );
                    r
                }
            })
        }
        _ => {}
    }
    let q = classify_qfw(f)?;
    if q.class == QfwClass::QFW {
        return Ok(ClosednessReport {
            closed: Some(true),
            justification: format!("F is qFW ({}), so every projection is closed", q.justification),
            citation: CLOSEDNESS_CITATION.into(),
            witness: None,
        });
    }
    for cand in candidate_points(f) {
        if !in_span(&nb, &cand.direction, n) {
            continue;
        }
        let m = AffineManifold::from_point(cand.point.clone(), nb.clone())?;
        let rep = is_f_asymptote(f, &m)?;
        if rep.is_asymptote == Some(true) {
            return Ok(ClosednessReport {
                closed: Some(false),
                justification: format!(
                    "x₀ + ker P with x₀ = {:?} is an f-asymptote, so P(x₀) is a limit point of P(F) outside P(F)",
                    vec_to_f64(&cand.point)
                ),
                citation: CLOSEDNESS_CITATION.into(),
                witness: Some(m),
            });
        }
    }
    Ok(ClosednessReport {
        closed: None,
        justification: "no closedness argument or asymptote witness found".into(),
        citation: CLOSEDNESS_CITATION.into(),
        witness: None,
    })
}

/// A candidate asymptote: `point + span(direction)`.
#[derive(Debug, Clone, PartialEq)]
struct Candidate {
    point: RVec,
    direction: RVec,
}

/// Isotropic rational directions `v` (`vᵀAv = 0`) of an indefinite or singular form.
fn isotropic_directions(a: &[RVec]) -> RMat {
    let n = a.len();
    let mut out: RMat = kernel(a, n);
    for i in 0..n {
        if a[i][i].is_zero() {
            out.push(unit(n, i));
        }
        for j in i + 1..n {
            for sgn in [1i64, -1] {
                let v = axpy(&unit(n, i), &rat(sgn), &unit(n, j));
                if dot(&v, &mat_vec(a, &v)).is_zero() {
                    out.push(v);
                }
            }
        }
    }
    let mut uniq: RMat = Vec::new();
    for v in out {
        if !uniq.iter().any(|u| rank(&[u.clone(), v.clone()], n) < 2) {
            uniq.push(v);
        }
    }
    uniq
}

/// Lines `x₀ + span(v)` along which a nonconvex constraint `g` is constant and positive, so they
/// miss `{g <= 0}`; these are the natural asymptote candidates of hyperbolic boundaries.
fn candidate_points(f: &SetDescriptor) -> Vec<Candidate> {
    let Some(pieces) = flatten(f) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for p in pieces.iter().filter(|p| p.is_exact()) {
        let n = p.inner.dim();
        for g in &p.inner.constraints {
            if g.is_convex() {
                continue;
            }
            for v in isotropic_directions(g.hessian()) {
                let w = mat_vec(g.hessian(), &v);
                let rhs = -dot(&v, g.linear_term());
                if w.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let x_min = scale(&(&rhs / norm_sq(&w)), &w);
                let mut tries = vec![x_min.clone()];
                for k in kernel(&[w.clone()], n) {
                    if rank(&[k.clone(), v.clone()], n) < 2 {
                        continue;
                    }
                    tries.push(add(&x_min, &k));
                    tries.push(sub(&x_min, &k));
                }
                for x0 in tries {
                    if g.value(&x0).is_positive() {
                        out.push(Candidate {
                            point: x0,
                            direction: v.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Candidate f-asymptotes of `F`; completeness is not claimed.
pub fn candidate_manifolds(f: &SetDescriptor) -> Vec<AffineManifold> {
    candidate_points(f)
        .into_iter()
        .filter_map(|c| AffineManifold::from_point(c.point, vec![c.direction]).ok())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QfwClass {
    QFW,
    NotQFW,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QfwVerdict {
    pub class: QfwClass,
    pub justification: String,
    pub citation: String,
    /// An f-asymptote found for `NotQFW` verdicts.
    pub asymptote: Option<AffineManifold>,
}

fn qfw(class: QfwClass, justification: impl Into<String>, citation: &str) -> QfwVerdict {
    QfwVerdict {
        class,
        justification: justification.into(),
        citation: citation.into(),
        asymptote: None,
    }
}

/// qFW classification with justification.
pub fn classify_qfw(f: &SetDescriptor) -> Result<QfwVerdict> {
    f.validate()?;
    Ok(match f {
        SetDescriptor::HPoly(_) => qfw(
            QfwClass::QFW,
            "polyhedra are FW, hence qFW",
            "Frank–Wolfe theorem",
        ),
        SetDescriptor::Motzkin(m) => {
            let fw = classify_fw(m);
            match fw.class {
                FwClass::FW => qfw(
                    QfwClass::QFW,
                    format!("{}; FW implies qFW", fw.justification),
                    &fw.citation,
                ),
                FwClass::NotFW => qfw(
                    QfwClass::NotQFW,
                    format!(
                        "{}; for Motzkin sets qFW is equivalent to a polyhedral recession cone",
                        fw.justification
                    ),
                    &fw.citation,
                ),
            }
        }
        SetDescriptor::QuadSublevel { base, constraints } => {
            let b = classify_qfw(base)?;
            let convex = constraints.iter().all(|g| g.is_convex());
            if b.class == QfwClass::QFW && convex {
                qfw(
                    QfwClass::QFW,
                    "sublevel set of convex quadratics over a qFW base",
                    "qFW is preserved by finite intersections and by sublevel sets of convex polynomials",
                )
            } else {
                asymptote_search(f)?
            }
        }
        SetDescriptor::Epigraph1D(func) => qfw(
            QfwClass::QFW,
            format!(
                "the epigraph of {} has no f-asymptotes (it lies between the parabolas y = x² and y = x² + 1)",
                func.tag()
            ),
            CLOSEDNESS_CITATION,
        ),
        SetDescriptor::Product(parts) => {
            let verdicts = parts.iter().map(classify_qfw).collect::<Result<Vec<_>>>()?;
            if verdicts.iter().all(|v| v.class == QfwClass::QFW) {
                qfw(
                    QfwClass::QFW,
                    "cartesian product of qFW-sets",
                    "qFW is preserved by cartesian products",
                )
            } else if let Some((i, v)) = verdicts
                .iter()
                .enumerate()
                .find(|(_, v)| v.class == QfwClass::NotQFW)
            {
                qfw(
                    QfwClass::NotQFW,
                    format!("factor {i} is not qFW ({}); an f-asymptote of a factor times the other factors is an f-asymptote of the product", v.justification),
                    CLOSEDNESS_CITATION,
                )
            } else {
                qfw(QfwClass::Unknown, "some factor is undecided", CLOSEDNESS_CITATION)
            }
        }
        SetDescriptor::Intersection(parts) => {
            let verdicts = parts.iter().map(classify_qfw).collect::<Result<Vec<_>>>()?;
            if verdicts.iter().all(|v| v.class == QfwClass::QFW) {
                qfw(
                    QfwClass::QFW,
                    "finite intersection of qFW-sets",
                    "qFW is preserved by finite intersections",
                )
            } else {
                asymptote_search(f)?
            }
        }
        SetDescriptor::AffineImage { inner, .. } => {
            let v = classify_qfw(inner)?;
            if v.class == QfwClass::QFW {
                qfw(
                    QfwClass::QFW,
                    "affine image of a qFW-set: every affine image of it is again an affine image of the original set, hence closed",
                    CLOSEDNESS_CITATION,
                )
            } else {
                qfw(QfwClass::Unknown, "affine image of a set that is not known to be qFW", CLOSEDNESS_CITATION)
            }
        }
        SetDescriptor::Union(_) => qfw(
            QfwClass::Unknown,
            "a union need not be convex; qFW is only characterized for convex sets",
            CLOSEDNESS_CITATION,
        ),
    })
}

/// FW verdict for a described set: `class` is `None` when no theorem applies.
#[derive(Debug, Clone, PartialEq)]
pub struct FwSetVerdict {
    pub class: Option<FwClass>,
    pub justification: String,
    pub citation: String,
}

fn bounded_base(f: &SetDescriptor) -> bool {
    match f {
        SetDescriptor::HPoly(h) => crate::poly::recession_cone(h).is_ok_and(|c| c.is_zero()),
        SetDescriptor::QuadSublevel { base, .. } => bounded_base(base),
        SetDescriptor::Motzkin(m) => matches!(m.cone(), ConeRep::Polyhedral(d) if d.is_zero()),
        _ => false,
    }
}

/// FW classification of a described set from the theorems that cover it.
pub fn classify_fw_set(f: &SetDescriptor) -> Result<FwSetVerdict> {
    f.validate()?;
    let verdict = |class: Option<FwClass>, justification: String, citation: &str| FwSetVerdict {
        class,
        justification,
        citation: citation.into(),
    };
    if let SetDescriptor::Motzkin(m) = f {
        let v = classify_fw(m);
        return Ok(verdict(Some(v.class), v.justification, &v.citation));
    }
    if let SetDescriptor::HPoly(_) = f {
        return Ok(verdict(
            Some(FwClass::FW),
            "every quadratic bounded below on a polyhedron attains its infimum".into(),
            "Frank–Wolfe theorem",
        ));
    }
    if let SetDescriptor::QuadSublevel { base, constraints } = f {
        if matches!(**base, SetDescriptor::HPoly(_))
            && constraints.len() == 1
            && constraints[0].is_convex()
        {
            return Ok(verdict(
                Some(FwClass::FW),
                "a polyhedron cut by a single convex quadratic inequality".into(),
                "Luo–Zhang theorem: {x ∈ P : xᵀQx + qᵀx + c <= 0} with P a polyhedron and Q positive semidefinite is FW",
            ));
        }
    }
    if bounded_base(f) {
        return Ok(verdict(
            Some(FwClass::FW),
            "the set is compact, so every continuous function attains its minimum".into(),
            "Weierstrass theorem",
        ));
    }
    let q = classify_qfw(f)?;
    if q.class == QfwClass::NotQFW {
        return Ok(verdict(
            Some(FwClass::NotFW),
            format!("F is not qFW ({})", q.justification),
            "FW-sets are qFW",
        ));
    }
    Ok(verdict(
        None,
        "no FW theorem covers this description".into(),
        CLOSEDNESS_CITATION,
    ))
}

fn asymptote_search(f: &SetDescriptor) -> Result<QfwVerdict> {
    for m in candidate_manifolds(f) {
        let rep = is_f_asymptote(f, &m)?;
        if rep.is_asymptote == Some(true) {
            return Ok(QfwVerdict {
                class: QfwClass::NotQFW,
                justification: format!(
                    "found an f-asymptote through {:?} with direction {:?}",
                    vec_to_f64(&m.point),
                    vec_to_f64(&m.directions[0])
                ),
                citation: CLOSEDNESS_CITATION.into(),
                asymptote: Some(m),
            });
        }
    }
    Ok(qfw(
        QfwClass::Unknown,
        "nonconvex description and no f-asymptote among the generated candidates",
        CLOSEDNESS_CITATION,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyCone;
    use crate::rat::{rmat, rvec};

    pub(crate) fn hyperbola() -> SetDescriptor {
        SetDescriptor::QuadSublevel {
            base: Box::new(SetDescriptor::HPoly(HPolyhedron::orthant(2))),
            constraints: vec![Quadratic::from_terms(2, &[(0, 1, rat(-1))], zeros(2), rat(1))],
        }
    }

    pub(crate) fn ice_cream_cut() -> SetDescriptor {
        let mut base = HPolyhedron::whole(2);
        base.push(vec![rat(0), rat(-1)], rat(0));
        SetDescriptor::QuadSublevel {
            base: Box::new(SetDescriptor::HPoly(base)),
            constraints: vec![Quadratic::from_terms(2, &[(0, 0, rat(1)), (1, 1, rat(-1))], zeros(2), rat(1))],
        }
    }

    pub(crate) fn parabola() -> SetDescriptor {
        SetDescriptor::QuadSublevel {
            base: Box::new(SetDescriptor::HPoly(HPolyhedron::whole(2))),
            constraints: vec![Quadratic::from_terms(2, &[(0, 0, rat(1))], rvec(&[0, -1]), rat(0))],
        }
    }

    fn line(p: &[i64], d: &[i64]) -> AffineManifold {
        AffineManifold::from_point(rvec(p), vec![rvec(d)]).unwrap()
    }

    #[test]
    fn polyhedral_distance_examples() {
        let f = SetDescriptor::HPoly(HPolyhedron::orthant(2));
        match distance_to_manifold(&f, &line(&[0, -1], &[1, 0])).unwrap() {
            DistanceVerdict::Positive { dist_sq_bound, exact } => {
                assert_eq!(dist_sq_bound, rat(1));
                assert!(exact);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            distance_to_manifold(&f, &line(&[0, 0], &[1, 1])).unwrap(),
            DistanceVerdict::Intersects { exact: Some(_), .. }
        ));
        let r = is_f_asymptote(&f, &line(&[0, -1], &[1, 0])).unwrap();
        assert_eq!(r.is_asymptote, Some(false));
    }

    #[test]
    fn hyperbola_axis_is_an_asymptote() {
        let r = is_f_asymptote(&hyperbola(), &line(&[0, 0], &[1, 0])).unwrap();
        assert_eq!(r.is_asymptote, Some(true), "{r:?}");
        if let DistanceVerdict::ZeroEvidence(ev) = &r.distance {
            assert!(ev.windows(2).all(|w| w[1].distance < w[0].distance));
            assert!(ev.last().unwrap().distance < 1e-6);
        } else {
            panic!("{r:?}");
        }
        let r = is_f_asymptote(&hyperbola(), &line(&[0, -1], &[1, 0])).unwrap();
        assert_eq!(r.is_asymptote, Some(false));
        let r = is_f_asymptote(&hyperbola(), &line(&[0, 0], &[1, 1])).unwrap();
        assert_eq!(r.is_asymptote, Some(false));
        assert!(matches!(r.distance, DistanceVerdict::Intersects { exact: Some(_), .. }));
    }

    #[test]
    fn ice_cream_cut_asymptote() {
        let r = is_f_asymptote(&ice_cream_cut(), &line(&[0, 0], &[1, 1])).unwrap();
        assert_eq!(r.is_asymptote, Some(true), "{r:?}");
        assert_eq!(classify_qfw(&ice_cream_cut()).unwrap().class, QfwClass::NotQFW);
    }

    #[test]
    fn parabola_has_no_asymptotes_on_a_battery() {
        let f = parabola();
        for (p, d) in [([0, -1], [1, 0]), ([0, 1], [1, 0]), ([3, 0], [0, 1]), ([0, -5], [1, 2])] {
            let r = is_f_asymptote(&f, &line(&p, &d)).unwrap();
            assert_eq!(r.is_asymptote, Some(false), "{p:?} {d:?}: {r:?}");
        }
        assert_eq!(classify_qfw(&f).unwrap().class, QfwClass::QFW);
        assert_eq!(classify_fw_set(&f).unwrap().class, Some(FwClass::FW));
    }

    #[test]
    fn hyperbola_classification_and_projections() {
        let v = classify_qfw(&hyperbola()).unwrap();
        assert_eq!(v.class, QfwClass::NotQFW);
        assert!(v.asymptote.is_some());
        let p = projection_closed(&hyperbola(), &Projection::Coords(vec![1])).unwrap();
        assert_eq!(p.closed, Some(false), "{p:?}");
        let p = projection_closed(&hyperbola(), &Projection::Coords(vec![0, 1])).unwrap();
        assert_eq!(p.closed, Some(true));
    }

    #[test]
    fn soc_projection_criterion() {
        let axis = rvec(&[0, 0, 1]);
        let half = ratio(1, 2);
        assert_eq!(soc_projection_closed(&axis, &half, &[rvec(&[1, 0, 1])]).closed, Some(false));
        assert_eq!(soc_projection_closed(&axis, &half, &[rvec(&[0, 0, 1])]).closed, Some(true));
        assert_eq!(soc_projection_closed(&axis, &half, &[rvec(&[1, 0, 0])]).closed, Some(true));
        // tangent plane along the boundary ray (1, 0, 1)
        assert_eq!(
            soc_projection_closed(&axis, &half, &[rvec(&[1, 0, 1]), rvec(&[0, 1, 0])]).closed,
            Some(true)
        );
    }

    #[test]
    fn soc_motzkin_candidates_find_asymptote() {
        let m = MotzkinSet::new(CompactPart::Polytope(vec![zeros(3)]), ConeRep::ice_cream(3)).unwrap();
        let f = SetDescriptor::Motzkin(m);
        assert_eq!(classify_qfw(&f).unwrap().class, QfwClass::NotQFW);
        let asym = AffineManifold::from_point(rvec(&[0, 1, 0]), vec![rvec(&[1, 0, 1])]).unwrap();
        assert_eq!(is_f_asymptote(&f, &asym).unwrap().is_asymptote, Some(true));
        let r = projection_closed(&f, &Projection::Kernel(vec![rvec(&[1, 0, 1])])).unwrap();
        assert_eq!(r.closed, Some(false));
    }

    #[test]
    fn polyhedral_motzkin_shortcuts() {
        let m = MotzkinSet::new(CompactPart::Polytope(vec![zeros(2)]), ConeRep::Polyhedral(PolyCone::orthant(2))).unwrap();
        let f = SetDescriptor::Motzkin(m);
        assert_eq!(classify_qfw(&f).unwrap().class, QfwClass::QFW);
        assert_eq!(projection_closed(&f, &Projection::Coords(vec![0])).unwrap().closed, Some(true));
        let r = is_f_asymptote(&f, &line(&[0, -1], &[1, 0])).unwrap();
        assert_eq!(r.is_asymptote, Some(false));
    }

    #[test]
    fn epigraph_manifolds() {
        let f = SetDescriptor::Epigraph1D(BuiltinFn::ParabolaExp);
        let r = distance_to_manifold(&f, &line(&[0, 0], &[1, 0])).unwrap();
        assert!(matches!(r, DistanceVerdict::Positive { .. }), "{r:?}");
        let r = distance_to_manifold(&f, &line(&[0, 0], &[0, 1])).unwrap();
        assert!(matches!(r, DistanceVerdict::Intersects { .. }), "{r:?}");
    }

    #[test]
    fn products_and_planes() {
        let lz = SetDescriptor::Product(vec![parabola(), parabola()]);
        assert_eq!(classify_qfw(&lz).unwrap().class, QfwClass::QFW);
        let plane = AffineManifold::from_equations(4, rmat(&[&[0, 1, 0, 0], &[0, 0, 0, 1]]), rvec(&[-1, 5])).unwrap();
        let r = is_f_asymptote(&lz, &plane).unwrap();
        assert_eq!(r.is_asymptote, Some(false), "{r:?}");
    }

    #[test]
    fn surd_signs() {
        let s = Surd { a: rat(-1), b: rat(1), d: rat(2) };
        assert_eq!(s.sign(), Ordering::Greater);
        let s = Surd { a: rat(2), b: rat(-1), d: rat(4) };
        assert_eq!(s.sign(), Ordering::Equal);
        let s = Surd { a: rat(1), b: rat(-1), d: rat(2) };
        assert_eq!(s.sign(), Ordering::Less);
    }
}
