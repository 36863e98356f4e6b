//! Motzkin sets `F = K + D` with `K` compact and `D` a closed convex cone: construction,
//! recession cones, FW classification and quadratic minimization.
//!
//! Minimization uses `inf_{x∈F} q(x) = inf_{y∈K} [q(y) + f(Ay + b)]`, where `f` is the value
//! function of the form `A` on `D` (see [`crate::cone_qp`]).

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::cone_qp::{
    dom_f, is_bounded_below_on_cone, negative_curvature_direction, value_function_eval,
    Boundedness, DomF, UnboundedCertificate,
};
use crate::caps::{check_dim, check_pieces, check_rows};
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{is_psd, solve};
use crate::numeric::{ball_grid, pattern_search, project_to_ball};
use crate::poly::{h_to_v, v_to_h, HPolyhedron, PolyCone, VPolyhedron};
use crate::qp::{enumerate_minimum, kkt_certificate, KktCertificate};
use crate::quadratic::Quadratic;
use crate::rat::{
    add, axpy, dot, dyadic_vec, mat_vec, norm_sq, rat, scale, sqrt_bracket, sub, to_f64,
    vec_to_f64, zeros, RMat, RVec, Rat,
};

/// The compact part `K`.
#[derive(Debug, Clone, PartialEq)]
pub enum CompactPart {
    /// `conv(vertices)`.
    Polytope(RMat),
    Ball { center: RVec, radius: Rat },
    FinitePointSet(RMat),
}

impl CompactPart {
    pub fn dim(&self) -> usize {
        match self {
            CompactPart::Polytope(v) | CompactPart::FinitePointSet(v) => {
                v.first().map_or(0, |x| x.len())
            }
            CompactPart::Ball { center, .. } => center.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CompactPart::Polytope(_) => "polytope",
            CompactPart::Ball { .. } => "ball",
            CompactPart::FinitePointSet(_) => "finite point set",
        }
    }
}

/// The recession part `D`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeRep {
    Polyhedral(PolyCone),
    /// `{x : aᵀx >= 0, (aᵀx)² >= α²‖a‖²‖x‖²}`: the circular cone around `a` whose half-angle has
    /// cosine `α`, stored through `aperture_sq = α²`.
    SecondOrder { axis: RVec, aperture_sq: Rat },
}

impl ConeRep {
    pub fn dim(&self) -> usize {
        match self {
            ConeRep::Polyhedral(c) => c.dim(),
            ConeRep::SecondOrder { axis, .. } => axis.len(),
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        match self {
            ConeRep::Polyhedral(c) => c.contains(x),
            ConeRep::SecondOrder { axis, aperture_sq } => {
                let ax = dot(axis, x);
                !ax.is_negative() && &ax * &ax >= aperture_sq * norm_sq(axis) * norm_sq(x)
            }
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(self, ConeRep::Polyhedral(_))
    }

    /// The standard ice-cream cone `{x : x_n >= ‖(x_1, …, x_{n−1})‖}`.
    pub fn ice_cream(n: usize) -> Self {
        let mut axis = zeros(n);
        axis[n - 1] = Rat::one();
        ConeRep::SecondOrder {
            axis,
            aperture_sq: Rat::new(1.into(), 2.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotzkinSet {
    k: CompactPart,
    d: ConeRep,
}

impl MotzkinSet {
    pub fn new(k: CompactPart, d: ConeRep) -> Result<Self> {
        let n = d.dim();
        if n == 0 {
            return Err(Error::Malformed("ambient dimension must be at least 1".into()));
        }
        check_dim(n)?;
        match &k {
            CompactPart::Polytope(v) | CompactPart::FinitePointSet(v) => {
                if v.is_empty() {
                    return Err(Error::Malformed(format!("{} needs at least one point", k.kind())));
                }
                check_rows("compact-part points", v.len())?;
                for p in v {
                    ensure_dim("compact-part point", p.len(), n)?;
                }
            }
            CompactPart::Ball { center, radius } => {
                ensure_dim("ball center", center.len(), n)?;
                if !radius.is_positive() {
                    return Err(Error::Malformed("ball radius must be positive".into()));
                }
            }
        }
        if let ConeRep::SecondOrder { axis, aperture_sq } = &d {
            if axis.iter().all(|x| x.is_zero()) {
                return Err(Error::Malformed("second-order cone axis must be nonzero".into()));
            }
            if !aperture_sq.is_positive() || aperture_sq >= &Rat::one() {
                return Err(Error::Malformed("second-order cone aperture must lie in (0, 1)".into()));
            }
        }
        Ok(MotzkinSet { k, d })
    }

    pub fn compact(&self) -> &CompactPart {
        &self.k
    }

    pub fn cone(&self) -> &ConeRep {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.d.dim()
    }

    pub fn polyhedral_cone(&self) -> Option<&PolyCone> {
        match &self.d {
            ConeRep::Polyhedral(c) => Some(c),
            ConeRep::SecondOrder { .. } => None,
        }
    }

    /// `K + D` as a V-polyhedron when `K` is a polytope and `D` is polyhedral.
    pub fn to_vpolyhedron(&self) -> Option<VPolyhedron> {
        match (&self.k, &self.d) {
            (CompactPart::Polytope(v), ConeRep::Polyhedral(d)) => Some(VPolyhedron {
                dim: self.dim(),
                vertices: v.clone(),
                rays: d.generators().to_vec(),
                lineality: Vec::new(),
                infeasibility: None,
            }),
            _ => None,
        }
    }

    /// Exact membership where it is decidable with rational data.
    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        ensure_dim("point", x.len(), self.dim())?;
        match (&self.k, &self.d) {
            (CompactPart::FinitePointSet(pts), d) => Ok(pts.iter().any(|y| d.contains(&sub(x, y)))),
            (CompactPart::Polytope(_), ConeRep::Polyhedral(_)) => {
                Ok(self.to_vpolyhedron().expect("polyhedral").contains(x))
            }
            (CompactPart::Ball { center, radius }, ConeRep::Polyhedral(d)) => {
                // dist(x − center, D)² <= r²
                let w = sub(x, center);
                let q = Quadratic::new(
                    crate::rat::identity(self.dim()),
                    crate::rat::neg(&w),
                    norm_sq(&w) / rat(2),
                )?;
                match crate::cone_qp::minimize_on_polyhedral_cone(&q, d)? {
                    crate::cone_qp::ConeMinVerdict::Attained { value, .. } => {
                        Ok(value * rat(2) <= radius * radius)
                    }
                    crate::cone_qp::ConeMinVerdict::UnboundedBelow(_) => {
                        unreachable!("distance is bounded below")
                    }
                }
            }
            (CompactPart::Polytope(v), ConeRep::SecondOrder { .. }) if v.len() == 1 => {
                Ok(self.d.contains(&sub(x, &v[0])))
            }
            _ => Err(Error::Unsupported(format!(
                "exact membership in {} + second-order cone",
                self.k.kind()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FwClass {
    FW,
    NotFW,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FwVerdict {
    pub class: FwClass,
    pub justification: String,
    pub citation: String,
}

/// Characterization used for Motzkin sets: `K + D` is FW iff its recession cone `D` is polyhedral.
pub const MOTZKIN_FW_CITATION: &str =
    "Motzkin-set characterization: K + D is FW iff the recession cone D is polyhedral";

pub fn classify_fw(f: &MotzkinSet) -> FwVerdict {
    match &f.d {
        ConeRep::Polyhedral(d) => FwVerdict {
            class: FwClass::FW,
            justification: if d.is_zero() {
                "D = {0}, so F = K is compact and every continuous function attains its minimum"
                    .into()
            } else {
                format!(
                    "recession cone is polyhedral ({} generators), hence F is FW",
                    d.generators().len()
                )
            },
            citation: MOTZKIN_FW_CITATION.into(),
        },
        ConeRep::SecondOrder { axis, .. } if axis.len() <= 2 => FwVerdict {
            class: FwClass::FW,
            justification: "a circular cone in dimension at most 2 is a ray or a wedge, hence polyhedral"
                .into(),
            citation: MOTZKIN_FW_CITATION.into(),
        },
        ConeRep::SecondOrder { .. } => FwVerdict {
            class: FwClass::NotFW,
            justification: "recession cone is a circular second-order cone, which is not polyhedral"
                .into(),
            citation: MOTZKIN_FW_CITATION.into(),
        },
    }
}

/// Returns `D`, which equals `0⁺(K + D)` for compact `K`.
pub fn recession_cone_of(f: &MotzkinSet) -> ConeRep {
    f.d.clone()
}

/// Recomputes the recession cone from an H-representation of `K + D` (polytope `K`, polyhedral
/// `D`) and compares it with `D`.
pub fn recession_cross_check(f: &MotzkinSet) -> Result<bool> {
    let v = f
        .to_vpolyhedron()
        .ok_or_else(|| Error::Unsupported("cross-check needs polytope K and polyhedral D".into()))?;
    let h = v_to_h(&v)?;
    let rc = crate::poly::recession_cone(&h)?;
    Ok(rc.same_set(f.polyhedral_cone().expect("polyhedral")))
}

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub enum AttainmentVerdict {
    /// `exact` is true when global optimality is proved in exact arithmetic; otherwise the point
    /// comes from a stabilized grid search and `value` is its exact objective value.
    Attained {
        point: RVec,
        value: Rat,
        exact: bool,
        kkt: Option<KktCertificate>,
    },
    NotAttained {
        infimum: Rat,
        /// Points with strictly decreasing objective values.
        evidence: Vec<(Vec<f64>, f64)>,
        lower_bound: Option<f64>,
    },
    UnboundedBelow(UnboundedCertificate),
    Unknown(String),
}

impl AttainmentVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            AttainmentVerdict::Attained { .. } => "attained",
            AttainmentVerdict::NotAttained { .. } => "not_attained",
            AttainmentVerdict::UnboundedBelow(_) => "unbounded_below",
            AttainmentVerdict::Unknown(_) => "unknown",
        }
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            AttainmentVerdict::Attained { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Exact minimization over `P` given in both representations.
fn minimize_polyhedron(q: &Quadratic, v: &VPolyhedron, h: &HPolyhedron) -> Result<AttainmentVerdict> {
    let d = v.recession_cone()?;
    if let Some(x) = negative_curvature_direction(q.hessian(), &d)? {
        return Ok(AttainmentVerdict::UnboundedBelow(UnboundedCertificate::new(
            q,
            v.vertices[0].clone(),
            x,
        )));
    }
    for vert in &v.vertices {
        let c = q.gradient(vert);
        if let Boundedness::LinearDescent(x) | Boundedness::NegativeCurvature(x) =
            is_bounded_below_on_cone(&c, q.hessian(), &d)?
        {
            return Ok(AttainmentVerdict::UnboundedBelow(UnboundedCertificate::new(
                q,
                vert.clone(),
                x,
            )));
        }
    }
    let sol = enumerate_minimum(q, h)
        .ok_or_else(|| Error::Malformed("no stationary point on a nonempty polyhedron".into()))?;
    let kkt = kkt_certificate(q, h, &sol.point);
    Ok(AttainmentVerdict::Attained {
        point: sol.point,
        value: sol.value,
        exact: true,
        kkt,
    })
}

/// Exact minimization of `q` over an H-polyhedron; boundedness is decided through the vertices
/// and the value-function domain of the recession cone.
pub fn minimize_on_hpoly(q: &Quadratic, p: &HPolyhedron) -> Result<AttainmentVerdict> {
    ensure_dim("polyhedron dimension", p.dim(), q.dim())?;
    check_dim(p.dim())?;
    check_rows("constraint rows", p.len())?;
    if let Err(farkas) = p.feasible_point() {
        return Err(Error::Empty {
            context: "the constraint system is infeasible".into(),
            farkas: Some(farkas),
        });
    }
    let v = h_to_v(p)?;
    minimize_polyhedron(q, &v, p)
}

/// `translate + D` as an H-polyhedron.
fn translate_cone(y: &[Rat], d: &PolyCone) -> HPolyhedron {
    let mut h = HPolyhedron::whole(d.dim());
    for a in d.halfspaces() {
        h.push(a.clone(), dot(a, y));
    }
    h
}

fn better(a: &AttainmentVerdict, b: &AttainmentVerdict) -> bool {
    match (a.value(), b.value()) {
        (Some(x), Some(y)) => x < y,
        _ => false,
    }
}

/// Minimizes `q` over `F = K + D`.
pub fn minimize_on_motzkin(q: &Quadratic, f: &MotzkinSet) -> Result<AttainmentVerdict> {
    ensure_dim("set dimension", f.dim(), q.dim())?;
    let d = match &f.d {
        ConeRep::Polyhedral(d) => d,
        ConeRep::SecondOrder { .. } => {
            return Ok(AttainmentVerdict::Unknown(
                "minimization over a second-order recession cone is not supported".into(),
            ))
        }
    };
    check_pieces(d.generators().len())?;
    match &f.k {
        CompactPart::Polytope(_) => {
            let v = f.to_vpolyhedron().expect("polyhedral");
            let h = v_to_h(&v)?;
            minimize_polyhedron(q, &v, &h)
        }
        CompactPart::FinitePointSet(pts) => {
            let mut best: Option<AttainmentVerdict> = None;
            for y in pts {
                let v = VPolyhedron {
                    dim: f.dim(),
                    vertices: vec![y.clone()],
                    rays: d.generators().to_vec(),
                    lineality: Vec::new(),
                    infeasibility: None,
                };
                let verdict = minimize_polyhedron(q, &v, &translate_cone(y, d))?;
                if matches!(verdict, AttainmentVerdict::UnboundedBelow(_)) {
                    return Ok(verdict);
                }
                if best.as_ref().is_none_or(|b| better(&verdict, b)) {
                    best = Some(verdict);
                }
            }
            Ok(best.expect("nonempty point set"))
        }
        CompactPart::Ball { center, radius } => minimize_ball(q, center, radius, d),
    }
}

/// `min_{y∈K} q(y) + f(Ay + b)` for a finite `K`; `None` when some `Ay + b` lies outside the
/// domain of `f`.
pub fn two_level_value(q: &Quadratic, points: &[RVec], d: &PolyCone) -> Result<Option<Rat>> {
    let mut best: Option<Rat> = None;
    for y in points {
        let inner = match value_function_eval(&q.gradient(y), q.hessian(), d) {
            Ok(v) => v,
            Err(Error::NotInDomain { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let total = q.value(y) + inner;
        if best.as_ref().is_none_or(|b| &total < b) {
            best = Some(total);
        }
    }
    Ok(best)
}

/// The inner value function `f(c) = min_{u>=0} ½uᵀMu + (Zᵀc)ᵀu` for `c ∈ dom f`, evaluated over
/// the supports `J` with `M_JJ` positive definite: the minimizer with the largest zero set is the
/// unique stationary point of its face, so `f(c)` is the least feasible candidate value.
struct InnerValue {
    z: RMat,
    faces: Vec<Face>,
}

struct Face {
    support: Vec<usize>,
    inv: RMat,
    inv_f64: Vec<Vec<f64>>,
}

impl InnerValue {
    fn new(a: &[RVec], d: &PolyCone) -> Self {
        let z = d.generator_columns().to_vec();
        let m = crate::linalg::congruence(a, &z);
        let p = z.len();
        let mut faces = Vec::new();
        for mask in 1u32..(1u32 << p) {
            let support: Vec<usize> = (0..p).filter(|&i| mask & (1 << i) != 0).collect();
            let k = support.len();
            let sub_m: RMat = support
                .iter()
                .map(|&i| support.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            if !is_psd(&sub_m) || crate::linalg::rank(&sub_m, k) < k {
                continue;
            }
            let inv: RMat = (0..k)
                .map(|j| solve(&sub_m, &crate::rat::unit(k, j), k).expect("nonsingular"))
                .collect();
            let inv_f64 = inv.iter().map(|r| vec_to_f64(r)).collect();
            faces.push(Face { support, inv, inv_f64 });
        }
        InnerValue { z, faces }
    }

    fn value_f64(&self, c: &[f64]) -> f64 {
        let h: Vec<f64> = self
            .z
            .iter()
            .map(|col| col.iter().zip(c).map(|(a, b)| to_f64(a) * b).sum())
            .collect();
        let mut best = 0.0f64;
        for face in &self.faces {
            let hj: Vec<f64> = face.support.iter().map(|&i| h[i]).collect();
            let mut val = 0.0;
            let mut feasible = true;
            for (row, _) in face.inv_f64.iter().zip(&hj) {
                let u: f64 = -row.iter().zip(&hj).map(|(a, b)| a * b).sum::<f64>();
                if u < -1e-12 {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
            for (row, hi) in face.inv_f64.iter().zip(&hj) {
                val -= 0.5 * hi * row.iter().zip(&hj).map(|(a, b)| a * b).sum::<f64>();
            }
            best = best.min(val);
        }
        best
    }

    /// Exact value and minimizing weights `u`.
    fn value_exact(&self, c: &[Rat]) -> (Rat, RVec) {
        let p = self.z.len();
        let h: RVec = self.z.iter().map(|col| dot(col, c)).collect();
        let mut best = (Rat::zero(), zeros(p));
        for face in &self.faces {
            let hj: RVec = face.support.iter().map(|i| h[*i].clone()).collect();
            let uj: RVec = crate::rat::neg(&mat_vec(&face.inv, &hj));
            if uj.iter().any(|x| x.is_negative()) {
                continue;
            }
            let val = dot(&hj, &uj) / rat(2);
            if val < best.0 {
                let mut u = zeros(p);
                for (k, &i) in face.support.iter().enumerate() {
                    u[i] = uj[k].clone();
                }
                best = (val, u);
            }
        }
        best
    }

    fn image(&self, u: &[Rat], n: usize) -> RVec {
        let mut x = zeros(n);
        for (col, ui) in self.z.iter().zip(u) {
            if !ui.is_zero() {
                x = axpy(&x, ui, col);
            }
        }
        x
    }
}

/// Largest grid-point count scanned per refinement level.
const GRID_BUDGET: usize = 20_000;
const MAX_LEVEL: u32 = 8;
const STABLE_TOL: f64 = 1e-9;

/// A rational point of the ball where `h·(Ay + b) > 0`, if the linear function `y ↦ h·(Ay + b)`
/// is positive somewhere on the ball.
fn ball_violation(q: &Quadratic, h: &[Rat], center: &[Rat], radius: &Rat) -> Option<RVec> {
    let w = mat_vec(q.hessian(), h);
    let s = dot(h, &q.gradient(center));
    let w2 = norm_sq(&w);
    if w2.is_zero() {
        return s.is_positive().then(|| center.to_vec());
    }
    if !s.is_positive() && radius * radius * &w2 <= &s * &s {
        return None;
    }
    for bits in [16u32, 32, 64, 128, 256] {
        let (_, hi) = sqrt_bracket(&w2, bits);
        let y = axpy(center, &(radius / &hi), &w);
        if dot(h, &q.gradient(&y)).is_positive() {
            return Some(y);
        }
    }
    None
}

fn minimize_ball(q: &Quadratic, center: &RVec, radius: &Rat, d: &PolyCone) -> Result<AttainmentVerdict> {
    let n = q.dim();
    let dom = dom_f(q.hessian(), d)?;
    let cone = match &dom {
        DomF::Empty { direction } => {
            return Ok(AttainmentVerdict::UnboundedBelow(UnboundedCertificate::new(
                q,
                center.clone(),
                direction.clone(),
            )))
        }
        DomF::Cone { cone, .. } => cone,
    };
    for h in cone.halfspaces() {
        if let Some(y) = ball_violation(q, h, center, radius) {
            let x = match is_bounded_below_on_cone(&q.gradient(&y), q.hessian(), d)? {
                Boundedness::LinearDescent(x) | Boundedness::NegativeCurvature(x) => x,
                Boundedness::Bounded => {
                    return Err(Error::Malformed(
                        "domain halfspace and boundedness test disagree".into(),
                    ))
                }
            };
            return Ok(AttainmentVerdict::UnboundedBelow(UnboundedCertificate::new(q, y, x)));
        }
    }

    let inner = InnerValue::new(q.hessian(), d);
    let c0 = vec_to_f64(center);
    let r = to_f64(radius);
    let a: Vec<Vec<f64>> = q.hessian().iter().map(|row| vec_to_f64(row)).collect();
    let b = vec_to_f64(q.linear_term());
    let outer = |y: &[f64]| -> f64 {
        let c: Vec<f64> = (0..n)
            .map(|i| a[i].iter().zip(y).map(|(x, z)| x * z).sum::<f64>() + b[i])
            .collect();
        q.value_f64(y) + inner.value_f64(&c)
    };
    let project = |y: &mut [f64]| project_to_ball(y, &c0, r * (1.0 - 1e-12));

    let mut history: Vec<f64> = Vec::new();
    let mut best_y: Option<Vec<f64>> = None;
    for level in 1..=MAX_LEVEL {
        let grid = match ball_grid(&c0, r, level, GRID_BUDGET) {
            Some(g) => g,
            None => break,
        };
        let mut scored: Vec<(f64, usize)> = grid.iter().enumerate().map(|(i, y)| (outer(y), i)).collect();
        scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let step = r / (1u64 << level) as f64;
        let mut level_best = (f64::INFINITY, Vec::new());
        for &(_, i) in scored.iter().take(4) {
            let (y, v) = pattern_search(outer, project, &grid[i], step, r * 1e-13);
            if v < level_best.0 {
                level_best = (v, y);
            }
        }
        history.push(level_best.0);
        best_y = Some(level_best.1);
        let k = history.len();
        if k >= 3
            && (history[k - 1] - history[k - 2]).abs() < STABLE_TOL
            && (history[k - 2] - history[k - 3]).abs() < STABLE_TOL
        {
            break;
        }
    }
    let k = history.len();
    let stable = k >= 3
        && (history[k - 1] - history[k - 2]).abs() < STABLE_TOL
        && (history[k - 2] - history[k - 3]).abs() < STABLE_TOL;
    if !stable {
        return Ok(AttainmentVerdict::Unknown(format!(
            "grid refinement did not stabilize within {k} levels"
        )));
    }
    let y = exact_ball_point(&best_y.expect("grid level ran"), center, radius);
    let (inner_val, u) = inner.value_exact(&q.gradient(&y));
    let point = add(&y, &inner.image(&u, n));
    let value = q.value(&point);
    debug_assert_eq!(value, q.value(&y) + inner_val);
    Ok(AttainmentVerdict::Attained {
        point,
        value,
        exact: false,
        kkt: None,
    })
}

/// Rounds to a dyadic point and pulls it toward the center until it lies in the ball exactly.
fn exact_ball_point(y: &[f64], center: &[Rat], radius: &Rat) -> RVec {
    let mut p = dyadic_vec(y, 48);
    let r2 = radius * radius;
    let shrink = Rat::one() - Rat::new(1.into(), (1i64 << 40).into());
    while norm_sq(&sub(&p, center)) > r2 {
        p = add(center, &scale(&shrink, &sub(&p, center)));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{identity, ratio, rmat, rvec};

    fn square() -> RMat {
        rmat(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
    }

    #[test]
    fn classification_examples() {
        let f = MotzkinSet::new(CompactPart::Polytope(square()), ConeRep::Polyhedral(PolyCone::orthant(2))).unwrap();
        assert_eq!(classify_fw(&f).class, FwClass::FW);
        let g = MotzkinSet::new(CompactPart::Polytope(vec![zeros(3)]), ConeRep::ice_cream(3)).unwrap();
        assert_eq!(classify_fw(&g).class, FwClass::NotFW);
        let h = MotzkinSet::new(
            CompactPart::Ball { center: zeros(2), radius: rat(1) },
            ConeRep::Polyhedral(PolyCone::zero(2)),
        )
        .unwrap();
        assert_eq!(classify_fw(&h).class, FwClass::FW);
    }

    #[test]
    fn minimize_examples() {
        let f = MotzkinSet::new(CompactPart::Polytope(square()), ConeRep::Polyhedral(PolyCone::orthant(2))).unwrap();
        let q = Quadratic::new(identity(2), zeros(2), rat(0)).unwrap();
        match minimize_on_motzkin(&q, &f).unwrap() {
            AttainmentVerdict::Attained { point, value, exact, kkt } => {
                assert_eq!(point, zeros(2));
                assert_eq!(value, rat(0));
                assert!(exact);
                assert!(kkt.unwrap().is_exact());
            }
            other => panic!("{other:?}"),
        }

        let pt = MotzkinSet::new(CompactPart::Polytope(vec![zeros(2)]), ConeRep::Polyhedral(PolyCone::orthant(2))).unwrap();
        let q = Quadratic::linear(rvec(&[-1, 0]), rat(0));
        match minimize_on_motzkin(&q, &pt).unwrap() {
            AttainmentVerdict::UnboundedBelow(c) => {
                assert_eq!(c.direction, rvec(&[1, 0]));
                assert!(c.verify(&q));
            }
            other => panic!("{other:?}"),
        }

        let wedge = PolyCone::from_generators(2, rmat(&[&[1, 1], &[1, 0]])).unwrap();
        let f = MotzkinSet::new(CompactPart::Polytope(vec![zeros(2)]), ConeRep::Polyhedral(wedge)).unwrap();
        let q = Quadratic::linear(rvec(&[1, 0]), rat(0));
        match minimize_on_motzkin(&q, &f).unwrap() {
            AttainmentVerdict::Attained { point, value, .. } => {
                assert_eq!(point, zeros(2));
                assert_eq!(value, rat(0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn recession_examples() {
        let f = MotzkinSet::new(CompactPart::Polytope(square()), ConeRep::Polyhedral(PolyCone::orthant(2))).unwrap();
        assert_eq!(recession_cone_of(&f), ConeRep::Polyhedral(PolyCone::orthant(2)));
        assert!(recession_cross_check(&f).unwrap());
        let ray = PolyCone::from_generators(2, rmat(&[&[1, 0]])).unwrap();
        let b = MotzkinSet::new(
            CompactPart::Ball { center: zeros(2), radius: rat(1) },
            ConeRep::Polyhedral(ray.clone()),
        )
        .unwrap();
        assert_eq!(recession_cone_of(&b), ConeRep::Polyhedral(ray));
        let p = MotzkinSet::new(CompactPart::Polytope(square()), ConeRep::Polyhedral(PolyCone::zero(2))).unwrap();
        assert!(recession_cross_check(&p).unwrap());
    }

    #[test]
    fn finite_point_set_two_level_agrees() {
        let pts = rmat(&[&[1, 2], &[-1, 0], &[3, -1]]);
        let d = PolyCone::from_generators(2, rmat(&[&[1, 0], &[1, 1]])).unwrap();
        let q = Quadratic::from_terms(2, &[(1, 1, rat(1)), (0, 1, rat(-1)), (0, 0, rat(1))], rvec(&[1, -2]), rat(0));
        let f = MotzkinSet::new(CompactPart::FinitePointSet(pts.clone()), ConeRep::Polyhedral(d.clone())).unwrap();
        let direct = minimize_on_motzkin(&q, &f).unwrap();
        let two = two_level_value(&q, &pts, &d).unwrap().unwrap();
        assert_eq!(direct.value().unwrap(), &two);
    }

    #[test]
    fn ball_plus_ray() {
        // (x₂ − 2)² + x₁ on the unit disk + ray(1,0); the ray only raises x₁, so the minimum is on the disk
        let f = MotzkinSet::new(
            CompactPart::Ball { center: zeros(2), radius: rat(1) },
            ConeRep::Polyhedral(PolyCone::from_generators(2, rmat(&[&[1, 0]])).unwrap()),
        )
        .unwrap();
        let q = Quadratic::from_terms(2, &[(1, 1, rat(1))], rvec(&[1, -4]), rat(4));
        match minimize_on_motzkin(&q, &f).unwrap() {
            AttainmentVerdict::Attained { point, value, exact, .. } => {
                assert!(!exact);
                assert!(f.contains(&point).unwrap());
                // the minimizer is on the circle; scan it
                let mut oracle = f64::INFINITY;
                for i in 0..200_000 {
                    let th = i as f64 / 200_000.0 * std::f64::consts::TAU;
                    let (x1, x2) = (th.cos(), th.sin());
                    oracle = oracle.min((x2 - 2.0).powi(2) + x1);
                }
                assert!((to_f64(&value) - oracle).abs() < 1e-7, "{} vs {}", to_f64(&value), oracle);
            }
            other => panic!("{other:?}"),
        }
        let down = Quadratic::linear(rvec(&[-1, 0]), rat(0));
        assert!(matches!(minimize_on_motzkin(&down, &f).unwrap(), AttainmentVerdict::UnboundedBelow(_)));
    }

    #[test]
    fn ball_violation_found_when_domain_fails_only_on_part_of_the_ball() {
        // q = x₁x₂ − x₂·(1/2) on ball((1,0), 1) + ray(0,1): gradient along ray is x₁ − 1/2,
        // which is negative for x₁ < 1/2 inside the ball
        let f = MotzkinSet::new(
            CompactPart::Ball { center: rvec(&[1, 0]), radius: rat(1) },
            ConeRep::Polyhedral(PolyCone::from_generators(2, rmat(&[&[0, 1]])).unwrap()),
        )
        .unwrap();
        let q = Quadratic::from_terms(2, &[(0, 1, rat(1))], vec![rat(0), ratio(-1, 2)], rat(0));
        match minimize_on_motzkin(&q, &f).unwrap() {
            AttainmentVerdict::UnboundedBelow(c) => {
                assert!(c.verify(&q));
                assert!(f.contains(&c.base).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn membership() {
        let f = MotzkinSet::new(
            CompactPart::Ball { center: zeros(2), radius: rat(1) },
            ConeRep::Polyhedral(PolyCone::from_generators(2, rmat(&[&[1, 0]])).unwrap()),
        )
        .unwrap();
        assert!(f.contains(&rvec(&[10, 1])).unwrap());
        assert!(!f.contains(&rvec(&[10, 2])).unwrap());
        assert!(!f.contains(&rvec(&[-2, 0])).unwrap());
        let g = MotzkinSet::new(CompactPart::Polytope(vec![zeros(3)]), ConeRep::ice_cream(3)).unwrap();
        assert!(g.contains(&rvec(&[3, 4, 5])).unwrap());
        assert!(!g.contains(&rvec(&[3, 4, 4])).unwrap());
    }
}
