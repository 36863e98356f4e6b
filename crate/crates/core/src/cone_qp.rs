//! Quadratics on polyhedral cones: the value function `f(c) = inf_{x∈D} cᵀx + ½xᵀGx`, its
//! domain, and exact minimization on `D`.
//!
//! With `D = {Zu : u >= 0}` and `M = ZᵀGZ`, the domain of `f` is empty as soon as the form is
//! negative somewhere on `D`; otherwise it is the cone of `c` with `cᵀZu >= 0` on the zero set
//! `P = {u >= 0 : uᵀMu = 0}`. Two independent routes decide membership:
//!
//! * [`is_bounded_below_on_cone`] covers `P` by the face cones
//!   `C_J = {u >= 0 : supp u ⊆ J, M_JJ u_J = 0}` and solves one LP per face;
//! * [`dom_f`] covers `P` by the complementarity pieces
//!   `P_I = {u >= 0 : Mu >= 0, u_i = 0 (i ∈ I), (Mu)_j = 0 (j ∉ I)}`, converts each to generators
//!   by double description and intersects the resulting halfspaces.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::caps::check_pieces;
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{congruence, is_psd, kernel};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::poly::{cone_generators, polar_cone, HPolyhedron, PolyCone};
use crate::qp::enumerate_minimum;
use crate::quadratic::Quadratic;
use crate::rat::{dot, format_rat, mat_vec, neg, rat, scale, unit, zeros, RMat, RVec, Rat};

/// One piece `P_I` of the zero set, in parameter space `u ∈ ℝᵖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSetPiece {
    /// Indices `i` with `u_i = 0` on the piece (0-based).
    pub index_set: Vec<usize>,
    /// Generators `u_{I1} … u_{Im}` of the piece.
    pub generators: RMat,
}

impl ZeroSetPiece {
    pub fn cone(&self, p: usize) -> Result<PolyCone> {
        PolyCone::from_generators(p, self.generators.clone())
    }
}

/// The domain of the value function. `Empty` carries a direction `x ∈ D` with `xᵀGx < 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum DomF {
    Empty { direction: RVec },
    Cone {
        cone: PolyCone,
        pieces: Vec<ZeroSetPiece>,
    },
}

impl DomF {
    pub fn contains(&self, c: &[Rat]) -> bool {
        match self {
            DomF::Empty { .. } => false,
            DomF::Cone { cone, .. } => cone.contains(c),
        }
    }

    pub fn cone(&self) -> Option<&PolyCone> {
        match self {
            DomF::Empty { .. } => None,
            DomF::Cone { cone, .. } => Some(cone),
        }
    }
}

/// Why a quadratic is unbounded below along a ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DescentKind {
    /// `dᵀAd < 0`.
    NegativeCurvature,
    /// `dᵀAd = 0` and the first-order term along `d` is negative.
    LinearDescent,
}

/// `q(base + t·direction)` decreases without bound, and strictly at `t = 1, 10, 100`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnboundedCertificate {
    pub base: RVec,
    pub direction: RVec,
    pub kind: DescentKind,
}

impl UnboundedCertificate {
    /// Builds a certificate from a descent direction, rescaling a curvature ray so the
    /// quadratic is already decreasing at `t = 1`.
    pub fn new(q: &Quadratic, base: RVec, direction: RVec) -> Self {
        let curv = q.form(&direction) * rat(2);
        let slope = dot(&q.gradient(&base), &direction);
        if curv.is_negative() {
            // d/dt q(base + t s d) = s·slope + t s²·curv < 0 for t >= 1 once s > slope / (−curv)
            let mut s = Rat::one();
            if slope.is_positive() {
                s = (&slope / (-&curv)).floor() + Rat::one();
            }
            UnboundedCertificate {
                base,
                direction: scale(&s, &direction),
                kind: DescentKind::NegativeCurvature,
            }
        } else {
            UnboundedCertificate {
                base,
                direction,
                kind: DescentKind::LinearDescent,
            }
        }
    }

    pub fn point_at(&self, t: &Rat) -> RVec {
        crate::rat::axpy(&self.base, t, &self.direction)
    }

    /// Checks strict decrease at `t ∈ {1, 10, 100}` and that `q` has no lower bound along the ray.
    pub fn verify(&self, q: &Quadratic) -> bool {
        let vals: Vec<Rat> = [1, 10, 100]
            .iter()
            .map(|&t| q.value(&self.point_at(&rat(t))))
            .collect();
        let curv = q.form(&self.direction);
        let slope = dot(&q.gradient(&self.base), &self.direction);
        let unbounded = curv.is_negative() || (curv.is_zero() && slope.is_negative());
        unbounded && vals[0] > vals[1] && vals[1] > vals[2]
    }
}

/// Result of minimizing a quadratic on a polyhedral cone.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeMinVerdict {
    Attained {
        point: RVec,
        value: Rat,
        /// Parameter vector `u >= 0` with `point = Zu`.
        weights: RVec,
        /// `∇_u` of the pulled-back quadratic at `u`: nonnegative and complementary to `u`.
        reduced_gradient: RVec,
    },
    UnboundedBelow(UnboundedCertificate),
}

impl ConeMinVerdict {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            ConeMinVerdict::Attained { value, .. } => Some(value),
            ConeMinVerdict::UnboundedBelow(_) => None,
        }
    }

    /// KKT in parameter space: `u >= 0`, `∇φ(u) >= 0`, `uᵀ∇φ(u) = 0`, all exact.
    pub fn kkt_exact(&self) -> bool {
        match self {
            ConeMinVerdict::Attained {
                weights,
                reduced_gradient,
                ..
            } => {
                weights.iter().all(|u| !u.is_negative())
                    && reduced_gradient.iter().all(|g| !g.is_negative())
                    && dot(weights, reduced_gradient).is_zero()
            }
            ConeMinVerdict::UnboundedBelow(_) => false,
        }
    }
}

/// Boundedness verdict with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundedness {
    Bounded,
    /// `xᵀGx < 0` for this `x ∈ D`: every `c` is outside the domain.
    NegativeCurvature(RVec),
    /// `x ∈ D`, `xᵀGx = 0`, `cᵀx < 0`.
    LinearDescent(RVec),
}

impl Boundedness {
    pub fn is_bounded(&self) -> bool {
        matches!(self, Boundedness::Bounded)
    }

    pub fn direction(&self) -> Option<&RVec> {
        match self {
            Boundedness::Bounded => None,
            Boundedness::NegativeCurvature(x) | Boundedness::LinearDescent(x) => Some(x),
        }
    }
}

/// The cone data in parameter space.
#[derive(Debug, Clone)]
struct Param {
    z: RMat,
    m: RMat,
}

impl Param {
    fn new(g: &[RVec], d: &PolyCone) -> Result<Self> {
        let n = d.dim();
        ensure_dim("form matrix rows", g.len(), n)?;
        for row in g {
            ensure_dim("form matrix columns", row.len(), n)?;
        }
        check_pieces(d.generators().len())?;
        let z = d.generator_columns().to_vec();
        let m = congruence(g, &z);
        Ok(Param { z, m })
    }

    fn p(&self) -> usize {
        self.z.len()
    }

    fn dim(&self) -> usize {
        self.z.first().map_or(0, |c| c.len())
    }

    fn image(&self, u: &[Rat]) -> RVec {
        let mut x = zeros(self.dim());
        for (col, ui) in self.z.iter().zip(u) {
            if !ui.is_zero() {
                x = crate::rat::axpy(&x, ui, col);
            }
        }
        x
    }
}

/// Searches for `x ∈ D` with `xᵀGx < 0` by minimizing `uᵀMu` over the standard simplex of
/// generator weights.
pub fn negative_curvature_direction(g: &[RVec], d: &PolyCone) -> Result<Option<RVec>> {
    let par = Param::new(g, d)?;
    Ok(negative_curvature(&par))
}

fn negative_curvature(par: &Param) -> Option<RVec> {
    let p = par.p();
    if p == 0 {
        return None;
    }
    for i in 0..p {
        if par.m[i][i].is_negative() {
            return Some(par.z[i].clone());
        }
    }
    if par.m.iter().flatten().all(|x| !x.is_negative()) || is_psd(&par.m) {
        return None;
    }
    let mut simplex = HPolyhedron::whole(p);
    for i in 0..p {
        simplex.push(neg(&unit(p, i)), Rat::zero());
    }
    simplex.push_equality(vec![Rat::one(); p], Rat::one());
    let form = Quadratic::new(par.m.clone(), zeros(p), Rat::zero()).ok()?;
    let best = enumerate_minimum(&form, &simplex)?;
    best.value.is_negative().then(|| par.image(&best.point))
}

/// Decides `c ∈ dom(f)` through the face cones `C_J`, one exact LP per support `J`.
pub fn is_bounded_below_on_cone(c: &[Rat], g: &[RVec], d: &PolyCone) -> Result<Boundedness> {
    ensure_dim("linear term", c.len(), d.dim())?;
    let par = Param::new(g, d)?;
    if let Some(x) = negative_curvature(&par) {
        return Ok(Boundedness::NegativeCurvature(x));
    }
    let p = par.p();
    let h: RVec = par.z.iter().map(|col| dot(col, c)).collect();
    for mask in 1u32..(1u32 << p) {
        let support: Vec<usize> = (0..p).filter(|&i| mask & (1 << i) != 0).collect();
        let sub: RMat = support
            .iter()
            .map(|&i| support.iter().map(|&j| par.m[i][j].clone()).collect())
            .collect();
        if kernel(&sub, support.len()).is_empty() {
            continue;
        }
        let k = support.len();
        let mut lp = LinearProgram::new(k).nonneg();
        for row in &sub {
            lp.row(row.clone(), Cmp::Eq, Rat::zero());
        }
        lp.row(vec![Rat::one(); k], Cmp::Eq, Rat::one());
        lp.minimize(support.iter().map(|&i| h[i].clone()).collect());
        if let LpOutcome::Optimal { x, value } = lp.solve() {
            if value.is_negative() {
                let mut u = zeros(p);
                for (pos, &i) in support.iter().enumerate() {
                    u[i] = x[pos].clone();
                }
                return Ok(Boundedness::LinearDescent(par.image(&u)));
            }
        }
    }
    Ok(Boundedness::Bounded)
}

/// The pieces `P_I` of the zero set `{u >= 0 : uᵀZᵀGZu = 0}`, deduplicated: pieces contained in
/// another piece are dropped, and among equal pieces the largest index set is reported. The
/// zero piece `{0}` is omitted, so an empty list means the zero set is `{0}`.
pub fn zero_set_pieces(g: &[RVec], d: &PolyCone) -> Result<Vec<ZeroSetPiece>> {
    let par = Param::new(g, d)?;
    if negative_curvature(&par).is_some() {
        return Err(Error::Malformed(
            "the form is negative somewhere on the cone; the zero set is not a union of pieces"
                .into(),
        ));
    }
    pieces(&par)
}

fn pieces(par: &Param) -> Result<Vec<ZeroSetPiece>> {
    let p = par.p();
    let mut raw: Vec<(Vec<usize>, PolyCone)> = Vec::new();
    for mask in 0u32..(1u32 << p) {
        let index_set: Vec<usize> = (0..p).filter(|&i| mask & (1 << i) != 0).collect();
        let mut rows: RMat = Vec::new();
        for i in 0..p {
            rows.push(neg(&unit(p, i)));
            rows.push(neg(&par.m[i]));
        }
        for i in 0..p {
            if index_set.contains(&i) {
                rows.push(unit(p, i));
            } else {
                rows.push(par.m[i].clone());
            }
        }
        let gens = cone_generators(&rows, p)?;
        debug_assert!(gens.lineality.is_empty());
        if gens.rays.is_empty() {
            continue;
        }
        raw.push((index_set, PolyCone::from_generators(p, gens.rays)?));
    }
    let mut kept: Vec<ZeroSetPiece> = Vec::new();
    for (i, (idx, cone)) in raw.iter().enumerate() {
        let dominated = raw.iter().enumerate().any(|(j, (idx2, other))| {
            j != i
                && cone.is_subset_of(other)
                && (!other.is_subset_of(cone) || (idx2.len(), idx2) > (idx.len(), idx))
        });
        if !dominated {
            kept.push(ZeroSetPiece {
                index_set: idx.clone(),
                generators: cone.generators().to_vec(),
            });
        }
    }
    Ok(kept)
}

/// `dom(f)` as the intersection of the halfspaces `{c : cᵀZu_{Ij} >= 0}` over all pieces.
pub fn dom_f(g: &[RVec], d: &PolyCone) -> Result<DomF> {
    let par = Param::new(g, d)?;
    if let Some(x) = negative_curvature(&par) {
        return Ok(DomF::Empty { direction: x });
    }
    let pieces = pieces(&par)?;
    let dirs: RMat = pieces
        .iter()
        .flat_map(|pc| pc.generators.iter().map(|u| par.image(u)))
        .collect();
    let zero_cone = PolyCone::from_generators(d.dim(), dirs)?;
    let cone = polar_cone(&zero_cone)?;
    Ok(DomF::Cone { cone, pieces })
}

/// Exact minimization of `q` on `D` by active-set enumeration in the generator weights.
pub fn minimize_on_polyhedral_cone(q: &Quadratic, d: &PolyCone) -> Result<ConeMinVerdict> {
    ensure_dim("cone dimension", d.dim(), q.dim())?;
    let n = q.dim();
    match is_bounded_below_on_cone(q.linear_term(), q.hessian(), d)? {
        Boundedness::Bounded => {}
        Boundedness::NegativeCurvature(x) | Boundedness::LinearDescent(x) => {
            return Ok(ConeMinVerdict::UnboundedBelow(UnboundedCertificate::new(
                q,
                zeros(n),
                x,
            )));
        }
    }
    let par = Param::new(q.hessian(), d)?;
    let p = par.p();
    if p == 0 {
        return Ok(ConeMinVerdict::Attained {
            point: zeros(n),
            value: q.constant().clone(),
            weights: Vec::new(),
            reduced_gradient: Vec::new(),
        });
    }
    let h: RVec = par.z.iter().map(|col| dot(col, q.linear_term())).collect();
    let qu = Quadratic::new(par.m.clone(), h, q.constant().clone())?;
    let orthant = HPolyhedron::orthant(p);
    let sol = enumerate_minimum(&qu, &orthant).ok_or_else(|| {
        Error::Malformed("bounded quadratic produced no feasible stationary point".into())
    })?;
    let reduced_gradient = qu.gradient(&sol.point);
    let point = par.image(&sol.point);
    Ok(ConeMinVerdict::Attained {
        value: sol.value,
        point,
        weights: sol.point,
        reduced_gradient,
    })
}

/// `f(c) = inf_{x∈D} cᵀx + ½xᵀGx`; outside the domain the error carries a descent ray.
pub fn value_function_eval(c: &[Rat], g: &[RVec], d: &PolyCone) -> Result<Rat> {
    let q = Quadratic::new(g.to_vec(), c.to_vec(), Rat::zero())?;
    match minimize_on_polyhedral_cone(&q, d)? {
        ConeMinVerdict::Attained { value, .. } => Ok(value),
        ConeMinVerdict::UnboundedBelow(cert) => Err(Error::NotInDomain {
            direction: cert.direction,
        }),
    }
}

/// Human-readable form of a rational vector, used in reports.
pub fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(format_rat).collect();
    format!("({})", parts.join(", "))
}

/// `xᵀGx` for a direction, exposed for certificate checks.
pub fn form_value(g: &[RVec], x: &[Rat]) -> Rat {
    dot(x, &mat_vec(g, x))
}
