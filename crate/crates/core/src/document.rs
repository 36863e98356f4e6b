//! Versioned JSON documents for quadratics, sets, maps, manifolds and jobs.
//!
//! Rationals are written as strings `"p/q"` (or `"p"` for integers); plain JSON integers are
//! accepted on input. Matrices are row-major arrays of rows. Unknown fields are rejected.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affine::{AffineManifold, AffineMap};
use crate::asymptote::{BuiltinFn, SetDescriptor};
use crate::error::{Error, Result};
use crate::motzkin::{CompactPart, ConeRep, MotzkinSet};
use crate::poly::{HPolyhedron, PolyCone};
use crate::quadratic::Quadratic;
use crate::rat::{format_rat, parse_rat, RMat, RVec, Rat};

pub const VERSION: &str = "1";

/// A rational in document form.
#[derive(Debug, Clone, PartialEq)]
pub struct R(pub Rat);

impl Serialize for R {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(&self.0))
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = R;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as a string \"p/q\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<R, E> {
        parse_rat(v).map(R).map_err(|e| E::custom(e.to_string()))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<R, E> {
        Ok(R(Rat::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<R, E> {
        Ok(R(Rat::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<R, E> {
        Err(E::custom(format!(
            "floating-point number {v} is not allowed; write rationals as \"p/q\""
        )))
    }
}

impl<'de> Deserialize<'de> for R {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<R, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

fn vec_doc(v: &[Rat]) -> Vec<R> {
    v.iter().cloned().map(R).collect()
}

fn mat_doc(m: &[RVec]) -> Vec<Vec<R>> {
    m.iter().map(|r| vec_doc(r)).collect()
}

fn vec_of(v: Vec<R>) -> RVec {
    v.into_iter().map(|r| r.0).collect()
}

fn mat_of(m: Vec<Vec<R>>) -> RMat {
    m.into_iter().map(vec_of).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticDoc {
    #[serde(rename = "A")]
    pub a: Vec<Vec<R>>,
    pub b: Vec<R>,
    pub c: R,
}

impl QuadraticDoc {
    pub fn from_quadratic(q: &Quadratic) -> Self {
        QuadraticDoc {
            a: mat_doc(q.hessian()),
            b: vec_doc(q.linear_term()),
            c: R(q.constant().clone()),
        }
    }

    pub fn build(self) -> Result<Quadratic> {
        Quadratic::new(mat_of(self.a), vec_of(self.b), self.c.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HPolyDoc {
    pub dim: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<R>>,
    pub b: Vec<R>,
}

impl HPolyDoc {
    pub fn from_hpoly(h: &HPolyhedron) -> Self {
        HPolyDoc {
            dim: h.dim(),
            a: mat_doc(h.rows()),
            b: vec_doc(h.rhs()),
        }
    }

    pub fn build(self) -> Result<HPolyhedron> {
        HPolyhedron::new(self.dim, mat_of(self.a), vec_of(self.b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CompactDoc {
    Polytope { vertices: Vec<Vec<R>> },
    Ball { center: Vec<R>, radius: R },
    Points { points: Vec<Vec<R>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeDoc {
    /// `cone(generators)`.
    Polyhedral { dim: usize, generators: Vec<Vec<R>> },
    /// `{x : hᵀx <= 0 for every row h}`.
    Halfspaces { dim: usize, halfspaces: Vec<Vec<R>> },
    /// `{x : aᵀx >= α‖a‖‖x‖}` with `aperture_sq = α²`.
    SecondOrder { axis: Vec<R>, aperture_sq: R },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotzkinDoc {
    pub compact: CompactDoc,
    pub cone: ConeDoc,
}

impl MotzkinDoc {
    pub fn from_motzkin(m: &MotzkinSet) -> Self {
        let compact = match m.compact() {
            CompactPart::Polytope(v) => CompactDoc::Polytope { vertices: mat_doc(v) },
            CompactPart::Ball { center, radius } => CompactDoc::Ball {
                center: vec_doc(center),
                radius: R(radius.clone()),
            },
            CompactPart::FinitePointSet(p) => CompactDoc::Points { points: mat_doc(p) },
        };
        let cone = match m.cone() {
            ConeRep::Polyhedral(d) => ConeDoc::Polyhedral {
                dim: d.dim(),
                generators: mat_doc(d.generators()),
            },
            ConeRep::SecondOrder { axis, aperture_sq } => ConeDoc::SecondOrder {
                axis: vec_doc(axis),
                aperture_sq: R(aperture_sq.clone()),
            },
        };
        MotzkinDoc { compact, cone }
    }

    pub fn build(self) -> Result<MotzkinSet> {
        let compact = match self.compact {
            CompactDoc::Polytope { vertices } => CompactPart::Polytope(mat_of(vertices)),
            CompactDoc::Ball { center, radius } => CompactPart::Ball {
                center: vec_of(center),
                radius: radius.0,
            },
            CompactDoc::Points { points } => CompactPart::FinitePointSet(mat_of(points)),
        };
        let cone = match self.cone {
            ConeDoc::Polyhedral { dim, generators } => {
                ConeRep::Polyhedral(PolyCone::from_generators(dim, mat_of(generators))?)
            }
            ConeDoc::Halfspaces { dim, halfspaces } => {
                ConeRep::Polyhedral(PolyCone::from_halfspaces(dim, mat_of(halfspaces))?)
            }
            ConeDoc::SecondOrder { axis, aperture_sq } => ConeRep::SecondOrder {
                axis: vec_of(axis),
                aperture_sq: aperture_sq.0,
            },
        };
        MotzkinSet::new(compact, cone)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineMapDoc {
    pub matrix: Vec<Vec<R>>,
    pub offset: Vec<R>,
    pub domain_dim: usize,
}

impl AffineMapDoc {
    pub fn from_map(t: &AffineMap) -> Self {
        AffineMapDoc {
            matrix: mat_doc(&t.matrix),
            offset: vec_doc(&t.offset),
            domain_dim: t.domain_dim,
        }
    }

    pub fn build(self) -> Result<AffineMap> {
        AffineMap::new(mat_of(self.matrix), vec_of(self.offset), self.domain_dim)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSublevelDoc {
    pub base: Box<SetDoc>,
    pub constraints: Vec<QuadraticDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpigraphDoc {
    pub function: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineImageDoc {
    pub map: AffineMapDoc,
    pub set: Box<SetDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetDoc {
    Motzkin(MotzkinDoc),
    Hpoly(HPolyDoc),
    QuadSublevel(QuadSublevelDoc),
    Epigraph1d(EpigraphDoc),
    Product(Vec<SetDoc>),
    AffineImage(AffineImageDoc),
    Intersection(Vec<SetDoc>),
    Union(Vec<SetDoc>),
}

impl SetDoc {
    pub fn from_set(f: &SetDescriptor) -> Self {
        match f {
            SetDescriptor::Motzkin(m) => SetDoc::Motzkin(MotzkinDoc::from_motzkin(m)),
            SetDescriptor::HPoly(h) => SetDoc::Hpoly(HPolyDoc::from_hpoly(h)),
            SetDescriptor::QuadSublevel { base, constraints } => SetDoc::QuadSublevel(QuadSublevelDoc {
                base: Box::new(SetDoc::from_set(base)),
                constraints: constraints.iter().map(QuadraticDoc::from_quadratic).collect(),
            }),
            SetDescriptor::Epigraph1D(func) => SetDoc::Epigraph1d(EpigraphDoc {
                function: func.tag().into(),
            }),
            SetDescriptor::Product(p) => SetDoc::Product(p.iter().map(SetDoc::from_set).collect()),
            SetDescriptor::AffineImage { map, inner } => SetDoc::AffineImage(AffineImageDoc {
                map: AffineMapDoc::from_map(map),
                set: Box::new(SetDoc::from_set(inner)),
            }),
            SetDescriptor::Intersection(p) => {
                SetDoc::Intersection(p.iter().map(SetDoc::from_set).collect())
            }
            SetDescriptor::Union(p) => SetDoc::Union(p.iter().map(SetDoc::from_set).collect()),
        }
    }

    pub fn build(self) -> Result<SetDescriptor> {
        let list = |v: Vec<SetDoc>| v.into_iter().map(SetDoc::build).collect::<Result<Vec<_>>>();
        let f = match self {
            SetDoc::Motzkin(m) => SetDescriptor::Motzkin(m.build()?),
            SetDoc::Hpoly(h) => SetDescriptor::HPoly(h.build()?),
            SetDoc::QuadSublevel(q) => SetDescriptor::QuadSublevel {
                base: Box::new(q.base.build()?),
                constraints: q
                    .constraints
                    .into_iter()
                    .map(QuadraticDoc::build)
                    .collect::<Result<_>>()?,
            },
            SetDoc::Epigraph1d(e) => SetDescriptor::Epigraph1D(
                BuiltinFn::from_tag(&e.function)
                    .ok_or_else(|| Error::Parse(format!("unknown built-in function {:?}", e.function)))?,
            ),
            SetDoc::Product(p) => SetDescriptor::Product(list(p)?),
            SetDoc::AffineImage(a) => SetDescriptor::AffineImage {
                map: a.map.build()?,
                inner: Box::new(a.set.build()?),
            },
            SetDoc::Intersection(p) => SetDescriptor::Intersection(list(p)?),
            SetDoc::Union(p) => SetDescriptor::Union(list(p)?),
        };
        f.validate()?;
        Ok(f)
    }
}

/// `point + span(directions)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDoc {
    pub point: Vec<R>,
    pub directions: Vec<Vec<R>>,
}

impl ManifoldDoc {
    pub fn from_manifold(m: &AffineManifold) -> Self {
        ManifoldDoc {
            point: vec_doc(&m.point),
            directions: mat_doc(&m.directions),
        }
    }

    pub fn build(self) -> Result<AffineManifold> {
        AffineManifold::from_point(vec_of(self.point), mat_of(self.directions))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceDoc {
    pub dim: usize,
    pub basis: Vec<Vec<R>>,
}

/// A linear subspace given by a spanning set.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub dim: usize,
    pub basis: RMat,
}

impl SubspaceDoc {
    pub fn build(self) -> Result<Subspace> {
        let basis = mat_of(self.basis);
        for v in &basis {
            crate::error::ensure_dim("subspace basis vector", v.len(), self.dim)?;
        }
        Ok(Subspace { dim: self.dim, basis })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operation {
    Solve,
    Classify,
    Decompose,
    Project,
    Intersect,
    Asymptote,
}

/// A single operation with its inputs, for batch use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDoc {
    pub operation: Operation,
    pub set: SetDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<QuadraticDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<ManifoldDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<SetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceDoc>,
    /// 1-based coordinates kept by a projection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quadratic: Option<QuadraticDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    set: Option<SetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    affine_map: Option<AffineMapDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    manifold: Option<ManifoldDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subspace: Option<SubspaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    job: Option<JobDoc>,
}

/// The single payload of a document.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Quadratic(Quadratic),
    Set(SetDescriptor),
    AffineMap(AffineMap),
    Manifold(AffineManifold),
    Subspace(Subspace),
    Job(JobDoc),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Quadratic(_) => "quadratic",
            Payload::Set(_) => "set",
            Payload::AffineMap(_) => "affine_map",
            Payload::Manifold(_) => "manifold",
            Payload::Subspace(_) => "subspace",
            Payload::Job(_) => "job",
        }
    }
}

/// Turns a construction error into a parse error, keeping size-cap errors distinct.
fn as_parse(e: Error) -> Error {
    match e {
        Error::SizeCap { .. } | Error::Parse(_) => e,
        other => Error::Parse(other.to_string()),
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e))
}

/// Deserializes `T` from JSON text, reporting line and column on failure.
pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(json_error)
}

/// Parses a document, checking the version and that exactly one payload is present.
pub fn parse(text: &str) -> Result<Payload> {
    let raw: RawDocument = from_json(text)?;
    if raw.version != VERSION {
        return Err(Error::Parse(format!(
            "unsupported document version {:?} (expected {VERSION:?})",
            raw.version
        )));
    }
    let mut payloads: Vec<Payload> = Vec::new();
    if let Some(q) = raw.quadratic {
        payloads.push(Payload::Quadratic(q.build().map_err(as_parse)?));
    }
    if let Some(s) = raw.set {
        payloads.push(Payload::Set(s.build().map_err(as_parse)?));
    }
    if let Some(t) = raw.affine_map {
        payloads.push(Payload::AffineMap(t.build().map_err(as_parse)?));
    }
    if let Some(m) = raw.manifold {
        payloads.push(Payload::Manifold(m.build().map_err(as_parse)?));
    }
    if let Some(s) = raw.subspace {
        payloads.push(Payload::Subspace(s.build().map_err(as_parse)?));
    }
    if let Some(j) = raw.job {
        payloads.push(Payload::Job(j));
    }
    match payloads.len() {
        1 => Ok(payloads.pop().expect("one payload")),
        0 => Err(Error::Parse("document has no payload".into())),
        k => Err(Error::Parse(format!("document has {k} payloads; expected exactly one"))),
    }
}

/// Canonical pretty-printed JSON for a payload.
pub fn serialize(p: &Payload) -> String {
    let mut raw = RawDocument {
        version: VERSION.into(),
        quadratic: None,
        set: None,
        affine_map: None,
        manifold: None,
        subspace: None,
        job: None,
    };
    match p {
        Payload::Quadratic(q) => raw.quadratic = Some(QuadraticDoc::from_quadratic(q)),
        Payload::Set(f) => raw.set = Some(SetDoc::from_set(f)),
        Payload::AffineMap(t) => raw.affine_map = Some(AffineMapDoc::from_map(t)),
        Payload::Manifold(m) => raw.manifold = Some(ManifoldDoc::from_manifold(m)),
        Payload::Subspace(s) => {
            raw.subspace = Some(SubspaceDoc {
                dim: s.dim,
                basis: mat_doc(&s.basis),
            })
        }
        Payload::Job(j) => raw.job = Some(j.clone()),
    }
    serde_json::to_string_pretty(&raw).expect("documents serialize")
}

/// Builds the parts of a job.
impl JobDoc {
    pub fn set(&self) -> Result<SetDescriptor> {
        self.set.clone().build().map_err(as_parse)
    }

    pub fn objective(&self) -> Result<Option<Quadratic>> {
        self.objective.clone().map(QuadraticDoc::build).transpose().map_err(as_parse)
    }

    pub fn manifold(&self) -> Result<Option<AffineManifold>> {
        self.manifold.clone().map(ManifoldDoc::build).transpose().map_err(as_parse)
    }

    pub fn other(&self) -> Result<Option<SetDescriptor>> {
        self.other.clone().map(SetDoc::build).transpose().map_err(as_parse)
    }

    pub fn subspace(&self) -> Result<Option<Subspace>> {
        self.subspace.clone().map(SubspaceDoc::build).transpose().map_err(as_parse)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn minimal_quadratic() {
        let p = parse(r#"{"version": "1", "quadratic": {"A": [[1]], "b": [0], "c": "0"}}"#).unwrap();
        match p {
            Payload::Quadratic(q) => {
                assert_eq!(q.dim(), 1);
                assert_eq!(q.value(&[rat(2)]), rat(2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_denominator_is_a_parse_error() {
        let e = parse(r#"{"version": "1", "quadratic": {"A": [["1/0"]], "b": [0], "c": "0"}}"#).unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("{\"version\": \"1\",\n \"quadratic\": {\"A\": [[1]], \"b\": [0], \"c\": 0, \"d\": 1}}")
            .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("unknown field"), "{msg}");
    }

    #[test]
    fn version_and_payload_count() {
        let e = parse(r#"{"version": "2", "quadratic": {"A": [[1]], "b": [0], "c": 0}}"#).unwrap_err();
        assert!(e.to_string().contains("version"));
        assert!(parse(r#"{"version": "1"}"#).is_err());
        assert!(parse(r#"{"version": "1", "quadratic": {"A": [[1.5]], "b": [0], "c": 0}}"#).is_err());
    }

    #[test]
    fn canonical_roundtrip() {
        let text = r#"{"version": "1", "set": {"quad_sublevel": {
            "base": {"motzkin": {"compact": {"polytope": {"vertices": [[0, 0], ["1/2", 1]]}},
                                  "cone": {"polyhedral": {"dim": 2, "generators": [[1, 0]]}}}},
            "constraints": [{"A": [[2, 0], [0, 0]], "b": [0, -1], "c": "-3/4"}]}}}"#;
        let p = parse(text).unwrap();
        let canon = serialize(&p);
        assert_eq!(parse(&canon).unwrap(), p);
        assert_eq!(serialize(&parse(&canon).unwrap()), canon);
        assert!(canon.contains("\"-3/4\""));
        let q = Payload::Quadratic(Quadratic::new(vec![vec![ratio(1, 3)]], vec![rat(-2)], rat(5)).unwrap());
        assert_eq!(parse(&serialize(&q)).unwrap(), q);
    }
}
