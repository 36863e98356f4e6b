//! One function per subcommand. Each returns a JSON report and the exit status it implies.

use anyhow::{bail, Context, Result};
use fwsets::asymptote::{
    classify_fw_set, classify_qfw, is_f_asymptote, projection_closed, set_contains, Projection,
    QfwClass, SetDescriptor,
};
use fwsets::document::{parse, JobDoc, Operation, Payload, Subspace};
use fwsets::gallery;
use fwsets::motzkin::{classify_fw, AttainmentVerdict, CompactPart, FwClass, MotzkinSet};
use fwsets::rat::{add, norm_sq, scale, to_f64};
use fwsets::set_algebra::{
    affine_image, as_motzkin, intersect_fwm, intersect_subspace_motzkin, minimize_on_set,
};
use fwsets::{AffineManifold, AffineMap, Error, Quadratic, RVec, Rat};
use num::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::render;

/// Exit statuses shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Empty = 1,
    Parse = 2,
    Unknown = 3,
    SizeCap = 4,
}

pub struct Outcome {
    pub report: Value,
    pub status: Status,
}

impl Outcome {
    fn new(report: Value, status: Status) -> Self {
        Outcome { report, status }
    }
}

/// Settings from the global flags.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tolerance: f64,
    pub seed: u64,
    pub samples: usize,
}

const ATTAINED_POLYHEDRAL: &str =
    "Frank-Wolfe theorem: a quadratic bounded below on a polyhedron attains its infimum";
const UNBOUNDED: &str = "unboundedness certificate: q(base + t·direction) decreases without bound";

pub fn read_document(path: &str) -> Result<Payload> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading standard input")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    parse(&text).with_context(|| format!("parsing {path}"))
}

pub fn read_set(path: &str) -> Result<SetDescriptor> {
    match read_document(path)? {
        Payload::Set(f) => Ok(f),
        other => Err(Error::Parse(format!("{path}: expected a set document, found {}", other.kind())).into()),
    }
}

fn read_quadratic(path: &str) -> Result<Quadratic> {
    match read_document(path)? {
        Payload::Quadratic(q) => Ok(q),
        other => Err(Error::Parse(format!("{path}: expected a quadratic document, found {}", other.kind())).into()),
    }
}

fn read_manifold(path: &str) -> Result<AffineManifold> {
    match read_document(path)? {
        Payload::Manifold(m) => Ok(m),
        other => Err(Error::Parse(format!("{path}: expected a manifold document, found {}", other.kind())).into()),
    }
}

/// Second operand of `intersect`.
pub enum Operand {
    Set(SetDescriptor),
    Subspace(Subspace),
}

pub fn read_operand(path: &str) -> Result<Operand> {
    match read_document(path)? {
        Payload::Set(f) => Ok(Operand::Set(f)),
        Payload::Subspace(s) => Ok(Operand::Subspace(s)),
        other => Err(Error::Parse(format!(
            "{path}: expected a set or subspace document, found {}",
            other.kind()
        ))
        .into()),
    }
}

/// Reports an empty set with its Farkas certificate instead of failing.
fn empty_outcome(command: &str, context: &str, farkas: Option<&RVec>) -> Outcome {
    Outcome::new(
        json!({
            "command": command,
            "verdict": "empty",
            "reason": context,
            "farkas": farkas.map(|y| render::vector(y)),
            "citation": "Farkas lemma: y >= 0 with yᵀA = 0 and yᵀb < 0 certifies {Ax <= b} = ∅",
        }),
        Status::Empty,
    )
}

fn catch_empty(command: &str, r: Result<Outcome>) -> Result<Outcome> {
    match r {
        Err(e) => match e.downcast_ref::<Error>() {
            Some(Error::Empty { context, farkas }) => Ok(empty_outcome(command, context, farkas.as_ref())),
            _ => Err(e),
        },
        ok => ok,
    }
}

/// A random point of a Motzkin set, for spot checks of reported minima.
fn sample(m: &MotzkinSet, rng: &mut ChaCha8Rng) -> Option<RVec> {
    let d = m.polyhedral_cone()?;
    let base = match m.compact() {
        CompactPart::Polytope(_) => return Some(m.to_vpolyhedron()?.sample(rng, 3)),
        CompactPart::FinitePointSet(pts) => pts[rng.gen_range(0..pts.len())].clone(),
        CompactPart::Ball { center, radius } => loop {
            let u: RVec = (0..m.dim())
                .map(|_| Rat::new(rng.gen_range(-8..=8).into(), 8.into()))
                .collect();
            if norm_sq(&u) <= Rat::one() {
                break add(center, &scale(radius, &u));
            }
        },
    };
    Some(add(&base, &d.sample(rng, 3)))
}

/// Compares the reported value with random feasible points: exactly for exact verdicts, within
/// the tolerance otherwise.
fn sample_check(q: &Quadratic, f: &SetDescriptor, value: &Rat, exact: bool, s: &Settings) -> Result<Value> {
    let Some(m) = as_motzkin(f)? else {
        return Ok(Value::Null);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let (mut tested, mut below) = (0usize, 0usize);
    let mut best: Option<Rat> = None;
    for _ in 0..s.samples {
        let Some(x) = sample(&m, &mut rng) else { break };
        let v = q.value(&x);
        tested += 1;
        let beaten = if exact {
            &v < value
        } else {
            to_f64(&v) < to_f64(value) - s.tolerance
        };
        below += usize::from(beaten);
        if best.as_ref().is_none_or(|b| &v < b) {
            best = Some(v);
        }
    }
    Ok(json!({
        "samples": tested,
        "seed": s.seed,
        "tolerance": if exact { Value::Null } else { json!(s.tolerance) },
        "samples_below_value": below,
        "best_sample_value": best.as_ref().map(to_f64),
    }))
}

pub fn solve(f: &SetDescriptor, q: &Quadratic, s: &Settings) -> Result<Outcome> {
    catch_empty("solve", (|| {
        let verdict = minimize_on_set(q, f)?;
        let (report, status) = match &verdict {
            AttainmentVerdict::Attained { point, value, exact, kkt } => {
                let citation = match as_motzkin(f)? {
                    Some(m) if *exact => format!("{ATTAINED_POLYHEDRAL}; {}", classify_fw(&m).citation),
                    Some(m) => classify_fw(&m).citation,
                    None => ATTAINED_POLYHEDRAL.to_string(),
                };
                (
                    json!({
                        "verdict": "attained",
                        "value": render::rat(value),
                        "value_f64": to_f64(value),
                        "point": render::vector(point),
                        "point_f64": render::approx(point),
                        "exact": exact,
                        "member": set_contains(f, point),
                        "kkt": kkt.as_ref().map(|k| json!({
                            "multipliers": render::vector(&k.multipliers),
                            "stationarity_residual": render::vector(&k.stationarity_residual),
                            "complementarity_residual": render::rat(&k.complementarity_residual),
                            "exact": k.is_exact(),
                        })),
                        "sample_check": sample_check(q, f, value, *exact, s)?,
                        "citation": citation,
                    }),
                    Status::Success,
                )
            }
            AttainmentVerdict::NotAttained { infimum, evidence, lower_bound } => (
                json!({
                    "verdict": "not_attained",
                    "infimum": render::rat(infimum),
                    "lower_bound": lower_bound,
                    "evidence": evidence.iter().map(|(x, v)| json!({ "point": x, "value": v })).collect::<Vec<_>>(),
                    "citation": "strictly decreasing values approaching the infimum from feasible points",
                }),
                Status::Success,
            ),
            AttainmentVerdict::UnboundedBelow(cert) => (
                json!({
                    "verdict": "unbounded_below",
                    "base": render::vector(&cert.base),
                    "direction": render::vector(&cert.direction),
                    "descent": format!("{:?}", cert.kind),
                    "verified": cert.verify(q),
                    "citation": UNBOUNDED,
                }),
                Status::Success,
            ),
            AttainmentVerdict::Unknown(why) => (
                json!({
                    "verdict": "unknown",
                    "reason": why,
                    "citation": "no attainment result applies to this set description",
                }),
                Status::Unknown,
            ),
        };
        let mut report = report;
        report["command"] = json!("solve");
        Ok(Outcome::new(report, status))
    })())
}

fn fw_name(c: FwClass) -> &'static str {
    match c {
        FwClass::FW => "FW",
        FwClass::NotFW => "NotFW",
    }
}

fn qfw_name(c: QfwClass) -> &'static str {
    match c {
        QfwClass::QFW => "QFW",
        QfwClass::NotQFW => "NotQFW",
        QfwClass::Unknown => "Unknown",
    }
}

pub fn classify(f: &SetDescriptor) -> Result<Outcome> {
    let fw = classify_fw_set(f)?;
    let qfw = classify_qfw(f)?;
    let decided = fw.class.is_some() && qfw.class != QfwClass::Unknown;
    let report = json!({
        "command": "classify",
        "kind": f.kind(),
        "dim": f.dim(),
        "fw": {
            "class": fw.class.map_or("Unknown", fw_name),
            "justification": fw.justification,
            "citation": fw.citation,
        },
        "qfw": {
            "class": qfw_name(qfw.class),
            "justification": qfw.justification,
            "citation": qfw.citation,
            "asymptote": qfw.asymptote.as_ref().map(render::manifold),
        },
    });
    Ok(Outcome::new(report, if decided { Status::Success } else { Status::Unknown }))
}

fn decomposition_report(command: &str, m: &MotzkinSet) -> Value {
    let fw = classify_fw(m);
    json!({
        "command": command,
        "verdict": "nonempty",
        "decomposition": render::motzkin(m),
        "fw": { "class": fw_name(fw.class), "justification": fw.justification, "citation": fw.citation },
    })
}

pub fn decompose(f: &SetDescriptor) -> Result<Outcome> {
    catch_empty("decompose", (|| {
        Ok(match as_motzkin(f)? {
            Some(m) => {
                let mut r = decomposition_report("decompose", &m);
                r["citation"] = json!("Motzkin decomposition theorem: a polyhedron is a polytope plus its recession cone");
                Outcome::new(r, Status::Success)
            }
            None => Outcome::new(
                json!({
                    "command": "decompose",
                    "verdict": "unknown",
                    "reason": "the set is not given by linear data, so no exact Motzkin decomposition is computed",
                    "citation": "Motzkin decomposition theorem",
                }),
                Status::Unknown,
            ),
        })
    })())
}

pub fn project(f: &SetDescriptor, coords: &[usize]) -> Result<Outcome> {
    let n = f.dim();
    let zero_based = gallery::one_based(coords)?;
    if let Some(&bad) = zero_based.iter().find(|&&c| c >= n) {
        bail!(Error::Malformed(format!("coordinate {} exceeds the dimension {n}", bad + 1)));
    }
    let closed = projection_closed(f, &Projection::Coords(zero_based.clone()))?;
    let image = match as_motzkin(f)? {
        Some(m) if m.polyhedral_cone().is_some() => {
            let rows = zero_based.iter().map(|&c| fwsets::rat::unit(n, c)).collect();
            let p = AffineMap::linear(rows, n)?;
            Some(render::motzkin(&affine_image(&m, &p)?))
        }
        _ => None,
    };
    let report = json!({
        "command": "project",
        "coords": coords,
        "closed": closed.closed,
        "justification": closed.justification,
        "citation": closed.citation,
        "witness_asymptote": closed.witness.as_ref().map(render::manifold),
        "image": image,
    });
    let status = if closed.closed.is_some() { Status::Success } else { Status::Unknown };
    Ok(Outcome::new(report, status))
}

pub fn intersect(f: &SetDescriptor, other: &Operand) -> Result<Outcome> {
    catch_empty("intersect", (|| {
        let unsupported = |why: &str| {
            Outcome::new(
                json!({
                    "command": "intersect",
                    "verdict": "unknown",
                    "reason": why,
                    "citation": "intersections are computed for Motzkin sets with polyhedral recession cones",
                }),
                Status::Unknown,
            )
        };
        let Some(m) = as_motzkin(f)? else {
            return Ok(unsupported("the first operand is not a Motzkin set with linear data"));
        };
        let result = match other {
            Operand::Subspace(l) => {
                if l.dim != m.dim() {
                    bail!(Error::DimensionMismatch(format!("subspace dimension {} vs set dimension {}", l.dim, m.dim())));
                }
                intersect_subspace_motzkin(&m, &l.basis)
            }
            Operand::Set(g) => match as_motzkin(g)? {
                Some(m2) => intersect_fwm(&m, &m2),
                None => return Ok(unsupported("the second operand is not a Motzkin set with linear data")),
            },
        };
        match result {
            Ok(r) => {
                let mut report = decomposition_report("intersect", &r);
                report["citation"] = json!(match other {
                    Operand::Subspace(_) => "subspace intersection lemma: (K + D) ∩ L = K₀ + (D ∩ L)",
                    Operand::Set(_) => "finite intersections of sets K + D with polyhedral D are again of that form",
                });
                Ok(Outcome::new(report, Status::Success))
            }
            Err(Error::Unsupported(why)) => Ok(unsupported(&why)),
            Err(e) => Err(e.into()),
        }
    })())
}

pub fn asymptote(f: &SetDescriptor, m: &AffineManifold) -> Result<Outcome> {
    let rep = is_f_asymptote(f, m)?;
    let report = json!({
        "command": "asymptote",
        "is_asymptote": rep.is_asymptote,
        "intersection_empty": rep.intersection_empty,
        "distance": render::distance(&rep.distance),
        "justification": rep.justification,
        "citation": rep.citation,
    });
    let status = if rep.is_asymptote.is_some() { Status::Success } else { Status::Unknown };
    Ok(Outcome::new(report, status))
}

pub fn gallery_list() -> Result<Outcome> {
    let cases = gallery::list()
        .into_iter()
        .map(|name| {
            let case = gallery::load(name)?;
            Ok(json!({ "name": name, "reference": case.doc.reference }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::new(json!({ "command": "gallery list", "cases": cases }), Status::Success))
}

/// A failing check means the stated verdict was not reproduced, reported as exit status 3.
pub fn gallery_run(name: &str, s: &Settings) -> Result<Outcome> {
    let reports = if name == "all" {
        gallery::run_all(s.seed)?
    } else {
        vec![gallery::run_case(name, s.seed)?]
    };
    let all_pass = reports.iter().all(|r| r.pass);
    let report = json!({
        "command": "gallery run",
        "seed": s.seed,
        "all_pass": all_pass,
        "cases": serde_json::to_value(&reports)?,
    });
    Ok(Outcome::new(report, if all_pass { Status::Success } else { Status::Unknown }))
}

pub fn run_job(job: &JobDoc, s: &Settings) -> Result<Outcome> {
    let f = job.set()?;
    let missing = |what: &str| Error::Parse(format!("job is missing its {what}"));
    match job.operation {
        Operation::Solve => solve(&f, &job.objective()?.ok_or_else(|| missing("objective"))?, s),
        Operation::Classify => classify(&f),
        Operation::Decompose => decompose(&f),
        Operation::Project => project(&f, job.coords.as_deref().ok_or_else(|| missing("coords"))?),
        Operation::Intersect => {
            let operand = match (job.other()?, job.subspace()?) {
                (Some(g), None) => Operand::Set(g),
                (None, Some(l)) => Operand::Subspace(l),
                _ => bail!(Error::Parse("job needs exactly one of other and subspace".into())),
            };
            intersect(&f, &operand)
        }
        Operation::Asymptote => asymptote(&f, &job.manifold()?.ok_or_else(|| missing("manifold"))?),
    }
}

pub fn run_document(path: &str, s: &Settings) -> Result<Outcome> {
    match read_document(path)? {
        Payload::Job(job) => run_job(&job, s),
        other => Err(Error::Parse(format!("{path}: expected a job document, found {}", other.kind())).into()),
    }
}

pub fn solve_files(set: &str, quad: &str, s: &Settings) -> Result<Outcome> {
    let f = read_set(set)?;
    let q = read_quadratic(quad)?;
    solve(&f, &q, s)
}

pub fn asymptote_files(set: &str, manifold: &str) -> Result<Outcome> {
    let f = read_set(set)?;
    asymptote(&f, &read_manifold(manifold)?)
}

/// Exit status for an error that escaped a subcommand.
pub fn status_of(e: &anyhow::Error) -> Status {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::Empty { .. }) => Status::Empty,
        Some(Error::SizeCap { .. }) => Status::SizeCap,
        Some(Error::Unsupported(_)) | Some(Error::NotInDomain { .. }) => Status::Unknown,
        Some(_) => Status::Parse,
        None if e.chain().any(|c| c.is::<std::io::Error>()) => Status::Parse,
        None => Status::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fwsets::rat::{rat, rmat, rvec};
    use fwsets::HPolyhedron;

    fn settings() -> Settings {
        Settings { tolerance: 1e-9, seed: 0, samples: 200 }
    }

    #[test]
    fn solve_reports_exact_minimum_on_a_box() {
        let f = SetDescriptor::HPoly(HPolyhedron::cube(&rvec(&[1, 1]), &rvec(&[2, 3])));
        let q = Quadratic::new(rmat(&[&[2, 0], &[0, 2]]), rvec(&[0, 0]), rat(0)).unwrap();
        let out = solve(&f, &q, &settings()).unwrap();
        assert_eq!(out.status, Status::Success);
        assert_eq!(out.report["value"], json!("2"));
        assert_eq!(out.report["sample_check"]["samples_below_value"], json!(0));
    }

    #[test]
    fn empty_polyhedra_exit_with_status_one() {
        let f = SetDescriptor::HPoly(HPolyhedron::new(1, rmat(&[&[1], &[-1]]), rvec(&[-1, 0])).unwrap());
        let q = Quadratic::zero(1);
        let out = solve(&f, &q, &settings()).unwrap();
        assert_eq!(out.status, Status::Empty);
        assert!(out.report["farkas"].is_array());
    }

    #[test]
    fn status_mapping() {
        let e: anyhow::Error = Error::SizeCap { what: "dimension", got: 20, cap: 10 }.into();
        assert_eq!(status_of(&e), Status::SizeCap);
        let e: anyhow::Error = Error::Parse("x".into()).into();
        assert_eq!(status_of(&e.context("reading")), Status::Parse);
    }
}
