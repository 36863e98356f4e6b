//! Exact polyhedral calculus: H- and V-representations, double description conversion,
//! Fourier–Motzkin projection, polarity, intersection, Minkowski sums and recession cones.
//!
//! Everything here is rational; no operation in this module touches floating point.

pub mod dd;
mod fm;

use std::collections::HashSet;

use num::{One, Signed, Zero};
use rand::Rng;

use crate::caps::{check_dim, check_rows};
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{independent_rows, span_basis};
use crate::lp::{feasible_point, Cmp, LinearProgram, LpOutcome};
use crate::rat::{add, dot, mat_vec, neg, primitive, rat, scale, unit, zeros, RMat, RVec, Rat};

pub use dd::{cone_generators, ConeGens};
pub use fm::project_fm;

/// `{x ∈ ℝⁿ : A x <= b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolyhedron {
    dim: usize,
    a: RMat,
    b: RVec,
}

impl HPolyhedron {
    pub fn new(dim: usize, a: RMat, b: RVec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("polyhedron dimension must be at least 1".into()));
        }
        ensure_dim("right-hand side length", b.len(), a.len())?;
        for row in &a {
            ensure_dim("constraint row length", row.len(), dim)?;
        }
        Ok(HPolyhedron { dim, a, b })
    }

    pub fn whole(dim: usize) -> Self {
        HPolyhedron {
            dim,
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    /// `{x : x >= 0}`
    pub fn orthant(dim: usize) -> Self {
        let a = (0..dim).map(|i| neg(&unit(dim, i))).collect();
        HPolyhedron {
            dim,
            a,
            b: zeros(dim),
        }
    }

    /// Axis-parallel box `lo <= x <= hi`.
    pub fn cube(lo: &[Rat], hi: &[Rat]) -> Self {
        let dim = lo.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..dim {
            a.push(unit(dim, i));
            b.push(hi[i].clone());
            a.push(neg(&unit(dim, i)));
            b.push(-lo[i].clone());
        }
        HPolyhedron { dim, a, b }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[RVec] {
        &self.a
    }

    pub fn rhs(&self) -> &[Rat] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty_system(&self) -> bool {
        self.a.is_empty()
    }

    pub fn push(&mut self, row: RVec, rhs: Rat) {
        debug_assert_eq!(row.len(), self.dim);
        self.a.push(row);
        self.b.push(rhs);
    }

    /// Adds `rowᵀx = rhs` as two inequalities.
    pub fn push_equality(&mut self, row: RVec, rhs: Rat) {
        self.a.push(neg(&row));
        self.b.push(-rhs.clone());
        self.a.push(row);
        self.b.push(rhs);
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim && self.a.iter().zip(&self.b).all(|(r, b)| dot(r, x) <= *b)
    }

    /// Indices of rows satisfied with equality at `x`.
    pub fn active_rows(&self, x: &[Rat]) -> Vec<usize> {
        (0..self.a.len())
            .filter(|&i| dot(&self.a[i], x) == self.b[i])
            .collect()
    }

    /// A feasible point, or a Farkas certificate of emptiness.
    pub fn feasible_point(&self) -> Result<RVec, RVec> {
        feasible_point(&self.a, &self.b, self.dim)
    }

    /// Translate by `t`: `{x + t : A x <= b}`.
    pub fn translate(&self, t: &[Rat]) -> Self {
        let b = self
            .a
            .iter()
            .zip(&self.b)
            .map(|(r, b)| b + dot(r, t))
            .collect();
        HPolyhedron {
            dim: self.dim,
            a: self.a.clone(),
            b,
        }
    }

    /// Removes exact duplicate rows (after scaling to primitive form) and trivially satisfied rows.
    pub fn dedup(&self) -> Self {
        let mut seen = HashSet::new();
        let mut out = HPolyhedron::whole(self.dim);
        for (row, b) in self.a.iter().zip(&self.b) {
            if row.iter().all(|x| x.is_zero()) {
                if b.is_negative() {
                    out.push(row.clone(), b.clone());
                }
                continue;
            }
            let mut full = row.clone();
            full.push(b.clone());
            let p = primitive(&full);
            if seen.insert(p.clone()) {
                let b = p[self.dim].clone();
                out.push(p[..self.dim].to_vec(), b);
            }
        }
        out
    }
}

/// `conv(vertices) + cone(rays) + span(lineality)`. An empty vertex list encodes the empty set,
/// in which case `infeasibility` may carry the Farkas witness of the H-system it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolyhedron {
    pub dim: usize,
    pub vertices: RMat,
    pub rays: RMat,
    pub lineality: RMat,
    pub infeasibility: Option<RVec>,
}

impl VPolyhedron {
    pub fn new(dim: usize, vertices: RMat, rays: RMat, lineality: RMat) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("polyhedron dimension must be at least 1".into()));
        }
        for v in vertices.iter().chain(&rays).chain(&lineality) {
            ensure_dim("generator length", v.len(), dim)?;
        }
        if rays.iter().any(|r| r.iter().all(|x| x.is_zero())) {
            return Err(Error::Malformed("rays must be nonzero".into()));
        }
        if independent_rows(&lineality, dim).len() != lineality.len() {
            return Err(Error::Malformed("lineality vectors must be independent".into()));
        }
        Ok(VPolyhedron {
            dim,
            vertices,
            rays,
            lineality,
            infeasibility: None,
        })
    }

    pub fn polytope(dim: usize, vertices: RMat) -> Result<Self> {
        Self::new(dim, vertices, Vec::new(), Vec::new())
    }

    pub fn empty(dim: usize, farkas: Option<RVec>) -> Self {
        VPolyhedron {
            dim,
            vertices: Vec::new(),
            rays: Vec::new(),
            lineality: Vec::new(),
            infeasibility: farkas,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Cone generators of the recession cone (lineality contributes ± pairs).
    pub fn recession_generators(&self) -> RMat {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(neg(l));
        }
        g
    }

    pub fn recession_cone(&self) -> Result<PolyCone> {
        PolyCone::from_generators(self.dim, self.recession_generators())
    }

    /// Exact membership by an LP over the convex-combination coefficients.
    pub fn contains(&self, x: &[Rat]) -> bool {
        if self.is_empty() || x.len() != self.dim {
            return false;
        }
        let nv = self.vertices.len();
        let nr = self.rays.len();
        let nl = self.lineality.len();
        let mut lp = LinearProgram::new(nv + nr + nl);
        for i in 0..nv + nr {
            lp.set_nonneg(i);
        }
        for j in 0..self.dim {
            let mut row = Vec::with_capacity(nv + nr + nl);
            row.extend(self.vertices.iter().map(|v| v[j].clone()));
            row.extend(self.rays.iter().map(|v| v[j].clone()));
            row.extend(self.lineality.iter().map(|v| v[j].clone()));
            lp.row(row, Cmp::Eq, x[j].clone());
        }
        let mut ones = zeros(nv + nr + nl);
        for o in ones.iter_mut().take(nv) {
            *o = Rat::one();
        }
        lp.row(ones, Cmp::Eq, Rat::one());
        matches!(lp.solve(), LpOutcome::Optimal { .. })
    }

    /// Random point with small-denominator coefficients: a convex combination of vertices plus
    /// nonnegative ray and arbitrary lineality multiples.
    pub fn sample<R: Rng>(&self, rng: &mut R, spread: i64) -> RVec {
        assert!(!self.is_empty(), "cannot sample the empty set");
        let weights: Vec<i64> = self.vertices.iter().map(|_| rng.gen_range(0..=6)).collect();
        let total: i64 = weights.iter().sum();
        let mut x = zeros(self.dim);
        if total == 0 {
            let k = rng.gen_range(0..self.vertices.len());
            x = self.vertices[k].clone();
        } else {
            for (v, w) in self.vertices.iter().zip(&weights) {
                if *w != 0 {
                    x = add(&x, &scale(&Rat::new((*w).into(), total.into()), v));
                }
            }
        }
        for r in &self.rays {
            let t = Rat::new(rng.gen_range(0..=spread * 4).into(), 4.into());
            x = add(&x, &scale(&t, r));
        }
        for l in &self.lineality {
            let t = Rat::new(rng.gen_range(-spread * 4..=spread * 4).into(), 4.into());
            x = add(&x, &scale(&t, l));
        }
        x
    }
}

/// A polyhedral cone held in both forms: `cone(generators)` and `{x : hᵀx <= 0 for h in halfspaces}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCone {
    dim: usize,
    generators: RMat,
    halfspaces: RMat,
}

impl PolyCone {
    pub fn from_generators(dim: usize, generators: RMat) -> Result<Self> {
        for g in &generators {
            ensure_dim("cone generator length", g.len(), dim)?;
        }
        let generators: RMat = generators
            .into_iter()
            .filter(|g| !g.iter().all(|x| x.is_zero()))
            .collect();
        // polar: {w : gᵀw <= 0}; its generators are the facet normals of the cone
        let polar = cone_generators(&generators, dim)?;
        let mut halfspaces = polar.rays;
        for l in polar.lineality {
            halfspaces.push(neg(&l));
            halfspaces.push(l);
        }
        Ok(PolyCone {
            dim,
            generators,
            halfspaces,
        })
    }

    pub fn from_halfspaces(dim: usize, halfspaces: RMat) -> Result<Self> {
        for h in &halfspaces {
            ensure_dim("cone halfspace length", h.len(), dim)?;
        }
        let g = cone_generators(&halfspaces, dim)?;
        let mut generators = g.rays;
        for l in g.lineality {
            generators.push(l.clone());
            generators.push(neg(&l));
        }
        Ok(PolyCone {
            dim,
            generators,
            halfspaces,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_generators(dim, Vec::new()).expect("zero cone")
    }

    pub fn orthant(dim: usize) -> Self {
        Self::from_generators(dim, (0..dim).map(|i| unit(dim, i)).collect()).expect("orthant")
    }

    pub fn whole(dim: usize) -> Self {
        let mut g = Vec::new();
        for i in 0..dim {
            g.push(unit(dim, i));
            g.push(neg(&unit(dim, i)));
        }
        Self::from_generators(dim, g).expect("whole space")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RVec] {
        &self.generators
    }

    pub fn halfspaces(&self) -> &[RVec] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim && self.halfspaces.iter().all(|h| !dot(h, x).is_positive())
    }

    /// `self ⊆ other`, decided by generator membership.
    pub fn is_subset_of(&self, other: &PolyCone) -> bool {
        self.dim == other.dim && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_set(&self, other: &PolyCone) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator matrix `Z` as a list of columns; `D = {Zu : u >= 0}`.
    pub fn generator_columns(&self) -> &[RVec] {
        &self.generators
    }

    /// Lineality space basis: directions `d` with `±d` in the cone.
    pub fn lineality(&self) -> RMat {
        let eqs: RMat = self.halfspaces.clone();
        crate::linalg::kernel(&eqs, self.dim)
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality().is_empty()
    }

    /// Lifts to a pointed cone in doubled dimension via `d = x⁺ - x⁻`: the returned generators
    /// are `(g, 0)` for pointed generators and `(l, 0), (0, l)` for each lineality direction, so
    /// that `D` is the image of the result under `(x⁺, x⁻) ↦ x⁺ - x⁻`.
    pub fn pointed_lift(&self) -> Result<PolyCone> {
        let n = self.dim;
        let lin = self.lineality();
        let mut gens = Vec::new();
        for g in &self.generators {
            if crate::linalg::in_span(&lin, g, n) {
                continue;
            }
            let mut v = g.clone();
            v.extend(zeros(n));
            gens.push(v);
        }
        for l in &lin {
            let mut a = l.clone();
            a.extend(zeros(n));
            let mut b = zeros(n);
            b.extend(l.iter().cloned());
            gens.push(a);
            gens.push(b);
        }
        PolyCone::from_generators(2 * n, gens)
    }

    /// Random element with small nonnegative generator weights.
    pub fn sample<R: Rng>(&self, rng: &mut R, spread: i64) -> RVec {
        let mut x = zeros(self.dim);
        for g in &self.generators {
            let t = Rat::new(rng.gen_range(0..=spread * 4).into(), 4.into());
            x = add(&x, &scale(&t, g));
        }
        x
    }
}

/// Either representation of a polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub enum Polyhedron {
    H(HPolyhedron),
    V(VPolyhedron),
}

/// Converts between H- and V-representations exactly.
pub fn dd_convert(p: &Polyhedron) -> Result<Polyhedron> {
    match p {
        Polyhedron::H(h) => {
            check_dim(h.dim())?;
            check_rows("constraint rows", h.len())?;
            h_to_v(h).map(Polyhedron::V)
        }
        Polyhedron::V(v) => {
            check_dim(v.dim)?;
            check_rows(
                "generators",
                v.vertices.len() + v.rays.len() + v.lineality.len(),
            )?;
            v_to_h(v).map(Polyhedron::H)
        }
    }
}

/// H → V by double description on the homogenized cone `{(x, t) : A x - b t <= 0, t >= 0}`.
pub fn h_to_v(h: &HPolyhedron) -> Result<VPolyhedron> {
    let n = h.dim();
    let mut rows: RMat = Vec::with_capacity(h.len() + 1);
    let mut t_row = zeros(n + 1);
    t_row[n] = -Rat::one();
    rows.push(t_row);
    for (a, b) in h.rows().iter().zip(h.rhs()) {
        let mut r = a.clone();
        r.push(-b.clone());
        rows.push(r);
    }
    let g = cone_generators(&rows, n + 1)?;
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in g.rays {
        let t = r[n].clone();
        if t.is_positive() {
            vertices.push(r[..n].iter().map(|x| x / &t).collect());
        } else {
            rays.push(r[..n].to_vec());
        }
    }
    if vertices.is_empty() {
        let farkas = h.feasible_point().err();
        return Ok(VPolyhedron::empty(n, farkas));
    }
    let lineality = g.lineality.into_iter().map(|l| l[..n].to_vec()).collect();
    Ok(VPolyhedron {
        dim: n,
        vertices,
        rays,
        lineality,
        infeasibility: None,
    })
}

/// V → H through the polar of the homogenized generator cone.
pub fn v_to_h(v: &VPolyhedron) -> Result<HPolyhedron> {
    let n = v.dim;
    if v.is_empty() {
        let mut h = HPolyhedron::whole(n);
        h.push(zeros(n), rat(-1));
        return Ok(h);
    }
    let mut rows: RMat = Vec::new();
    for x in &v.vertices {
        let mut r = x.clone();
        r.push(Rat::one());
        rows.push(r);
    }
    for x in &v.rays {
        let mut r = x.clone();
        r.push(Rat::zero());
        rows.push(r);
    }
    for x in &v.lineality {
        let mut r = x.clone();
        r.push(Rat::zero());
        rows.push(neg(&r));
        rows.push(r);
    }
    let polar = cone_generators(&rows, n + 1)?;
    let mut h = HPolyhedron::whole(n);
    let mut add_row = |w: &RVec| {
        let a = w[..n].to_vec();
        if a.iter().all(|x| x.is_zero()) {
            return;
        }
        h.push(a, -w[n].clone());
    };
    for w in &polar.rays {
        add_row(w);
    }
    for w in &polar.lineality {
        add_row(w);
        add_row(&neg(w));
    }
    Ok(h)
}

/// Positive polar `{c : cᵀx >= 0 for all x ∈ D}`.
pub fn polar_cone(d: &PolyCone) -> Result<PolyCone> {
    // c is in the positive polar iff (-g)ᵀc <= 0 for every generator g
    let rows: RMat = d.generators().iter().map(|g| neg(g)).collect();
    PolyCone::from_halfspaces(d.dim(), rows)
}

/// Stacks constraint rows.
pub fn intersect(p: &HPolyhedron, q: &HPolyhedron) -> Result<HPolyhedron> {
    ensure_dim("intersection operand dimension", q.dim(), p.dim())?;
    let mut out = p.clone();
    for (a, b) in q.rows().iter().zip(q.rhs()) {
        out.push(a.clone(), b.clone());
    }
    Ok(out)
}

/// Sums vertex pairs and unions rays and lineality.
pub fn minkowski_sum(p: &VPolyhedron, q: &VPolyhedron) -> Result<VPolyhedron> {
    ensure_dim("Minkowski sum operand dimension", q.dim, p.dim)?;
    if p.is_empty() || q.is_empty() {
        return Ok(VPolyhedron::empty(p.dim, None));
    }
    let mut seen = HashSet::new();
    let mut vertices = Vec::new();
    for a in &p.vertices {
        for b in &q.vertices {
            let s = add(a, b);
            if seen.insert(s.clone()) {
                vertices.push(s);
            }
        }
    }
    let mut rays: RMat = Vec::new();
    let mut seen_rays = HashSet::new();
    for r in p.rays.iter().chain(&q.rays) {
        let pr = primitive(r);
        if seen_rays.insert(pr.clone()) {
            rays.push(pr);
        }
    }
    let lin: RMat = p.lineality.iter().chain(&q.lineality).cloned().collect();
    let lineality = span_basis(&lin, p.dim);
    Ok(VPolyhedron {
        dim: p.dim,
        vertices,
        rays,
        lineality,
        infeasibility: None,
    })
}

/// `{d : A d <= 0}`.
pub fn recession_cone(p: &HPolyhedron) -> Result<PolyCone> {
    PolyCone::from_halfspaces(p.dim(), p.rows().to_vec())
}

/// `X ⊆ Y` for a V-polyhedron `X` and an H-polyhedron `Y`, exactly.
pub fn v_subset_of_h(x: &VPolyhedron, y: &HPolyhedron) -> bool {
    if x.is_empty() {
        return true;
    }
    x.vertices.iter().all(|v| y.contains(v))
        && x.rays
            .iter()
            .all(|r| y.rows().iter().all(|a| !dot(a, r).is_positive()))
        && x.lineality
            .iter()
            .all(|l| y.rows().iter().all(|a| dot(a, l).is_zero()))
}

/// Evaluates `A x` as a convenience for callers holding a polyhedron.
pub fn row_values(p: &HPolyhedron, x: &[Rat]) -> RVec {
    mat_vec(p.rows(), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rmat, rvec};

    fn sorted(mut v: RMat) -> RMat {
        v.sort();
        v
    }

    #[test]
    fn orthant_h_to_v() {
        let v = h_to_v(&HPolyhedron::orthant(2)).unwrap();
        assert_eq!(v.vertices, vec![rvec(&[0, 0])]);
        assert_eq!(sorted(v.rays), vec![rvec(&[0, 1]), rvec(&[1, 0])]);
        assert!(v.lineality.is_empty());
    }

    #[test]
    fn simplex_v_to_h() {
        let v = VPolyhedron::polytope(2, rmat(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let h = v_to_h(&v).unwrap();
        assert_eq!(h.len(), 3);
        for x in [rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1])] {
            assert!(h.contains(&x));
        }
        assert!(!h.contains(&rvec(&[1, 1])));
        assert!(!h.contains(&rvec(&[-1, 0])));
        // the three facets x >= 0, y >= 0, x + y <= 1 in primitive form
        let expect = [(rvec(&[-1, 0]), rat(0)), (rvec(&[0, -1]), rat(0)), (rvec(&[1, 1]), rat(1))];
        for (a, b) in expect {
            assert!(h.rows().iter().zip(h.rhs()).any(|(r, c)| *r == a && *c == b));
        }
    }

    #[test]
    fn shifted_orthant_vertices() {
        // x ≥ 0, y ≥ 0, x + y ≥ 1: vertices (1,0), (0,1); rays e1, e2
        let h = HPolyhedron::new(2, rmat(&[&[-1, 0], &[0, -1], &[-1, -1]]), rvec(&[0, 0, -1])).unwrap();
        let v = h_to_v(&h).unwrap();
        assert_eq!(sorted(v.vertices), vec![rvec(&[0, 1]), rvec(&[1, 0])]);
        assert_eq!(sorted(v.rays), vec![rvec(&[0, 1]), rvec(&[1, 0])]);
        let rc = recession_cone(&h).unwrap();
        assert!(rc.same_set(&PolyCone::orthant(2)));
    }

    #[test]
    fn empty_h_has_farkas() {
        let h = HPolyhedron::new(1, rmat(&[&[1], &[-1]]), rvec(&[-1, -1])).unwrap();
        let v = h_to_v(&h).unwrap();
        assert!(v.is_empty());
        let y = v.infeasibility.unwrap();
        assert!(crate::lp::verify_farkas(h.rows(), h.rhs(), 1, &y));
    }

    #[test]
    fn polar_examples() {
        let o = PolyCone::orthant(2);
        assert!(polar_cone(&o).unwrap().same_set(&o));
        let whole = PolyCone::whole(2);
        assert!(polar_cone(&whole).unwrap().is_zero());
        let d = PolyCone::from_generators(2, rmat(&[&[1, 0], &[1, 1]])).unwrap();
        let expect = PolyCone::from_generators(2, rmat(&[&[0, 1], &[1, -1]])).unwrap();
        assert!(polar_cone(&d).unwrap().same_set(&expect));
    }

    #[test]
    fn minkowski_square() {
        let a = VPolyhedron::polytope(2, rmat(&[&[0, 0], &[1, 0]])).unwrap();
        let b = VPolyhedron::polytope(2, rmat(&[&[0, 0], &[0, 1]])).unwrap();
        let s = minkowski_sum(&a, &b).unwrap();
        let h = v_to_h(&s).unwrap();
        let sq = HPolyhedron::cube(&rvec(&[0, 0]), &rvec(&[1, 1]));
        assert!(v_subset_of_h(&s, &sq));
        assert!(v_subset_of_h(&h_to_v(&sq).unwrap(), &h));
    }

    #[test]
    fn box_recession_is_zero() {
        let sq = HPolyhedron::cube(&rvec(&[0, 0]), &rvec(&[1, 1]));
        assert!(recession_cone(&sq).unwrap().is_zero());
    }

    #[test]
    fn pointed_lift_maps_back() {
        let d = PolyCone::from_generators(2, rmat(&[&[1, 0], &[-1, 0], &[0, 1]])).unwrap();
        assert!(!d.is_pointed());
        let lifted = d.pointed_lift().unwrap();
        assert!(lifted.is_pointed());
        let image: RMat = lifted
            .generators()
            .iter()
            .map(|g| crate::rat::sub(&g[..2], &g[2..]))
            .collect();
        assert!(PolyCone::from_generators(2, image).unwrap().same_set(&d));
    }

    #[test]
    fn vpoly_membership() {
        let v = VPolyhedron::new(2, rmat(&[&[0, 0]]), rmat(&[&[1, 1]]), Vec::new()).unwrap();
        assert!(v.contains(&rvec(&[3, 3])));
        assert!(!v.contains(&rvec(&[3, 2])));
    }
}
