//! JSON building blocks for reports and the plain-text rendering of a report.

use fwsets::asymptote::DistanceVerdict;
use fwsets::motzkin::{CompactPart, ConeRep, MotzkinSet};
use fwsets::rat::{format_rat, to_f64, vec_to_f64};
use fwsets::{AffineManifold, Rat};
use serde_json::{json, Map, Value};

pub fn rat(x: &Rat) -> Value {
    Value::String(format_rat(x))
}

pub fn vector(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn matrix(m: &[Vec<Rat>]) -> Value {
    Value::Array(m.iter().map(|r| vector(r)).collect())
}

pub fn motzkin(m: &MotzkinSet) -> Value {
    let compact = match m.compact() {
        CompactPart::Polytope(v) => json!({ "polytope": { "vertices": matrix(v) } }),
        CompactPart::FinitePointSet(v) => json!({ "points": { "points": matrix(v) } }),
        CompactPart::Ball { center, radius } => {
            json!({ "ball": { "center": vector(center), "radius": rat(radius) } })
        }
    };
    let cone = match m.cone() {
        ConeRep::Polyhedral(d) => json!({
            "polyhedral": {
                "generators": matrix(d.generators()),
                "halfspaces": matrix(d.halfspaces()),
                "lineality": matrix(&d.lineality()),
            }
        }),
        ConeRep::SecondOrder { axis, aperture_sq } => json!({
            "second_order": { "axis": vector(axis), "aperture_sq": rat(aperture_sq) }
        }),
    };
    json!({ "compact": compact, "cone": cone })
}

pub fn manifold(m: &AffineManifold) -> Value {
    json!({ "point": vector(&m.point), "directions": matrix(&m.directions) })
}

pub fn distance(d: &DistanceVerdict) -> Value {
    let detail = match d {
        DistanceVerdict::Intersects { exact, approx } => json!({
            "exact_point": exact.as_ref().map(|p| vector(p)),
            "approx_point": approx,
        }),
        DistanceVerdict::Positive { dist_sq_bound, exact } => json!({
            "dist_sq_lower_bound": rat(dist_sq_bound),
            "dist_sq_lower_bound_f64": to_f64(dist_sq_bound),
            "exact": exact,
        }),
        DistanceVerdict::ZeroEvidence(pairs) => json!({
            "evidence": pairs
                .iter()
                .map(|p| json!({ "in_set": p.in_set, "in_manifold": p.in_manifold, "distance": p.distance }))
                .collect::<Vec<_>>(),
        }),
        DistanceVerdict::Unknown(why) => json!({ "reason": why }),
    };
    json!({ "kind": d.kind(), "detail": detail })
}

pub fn approx(v: &[Rat]) -> Value {
    json!(vec_to_f64(v))
}

/// Indented `key: value` rendering of a JSON report.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        Value::Array(items) if items.iter().all(|i| i.as_array().is_some_and(|r| r.iter().all(|x| !x.is_object() && !x.is_array()))) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => write_map(out, map, depth),
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, item, depth + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn write_map(out: &mut String, map: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in map {
        match scalar(v) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_value(out, v, depth + 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_nests_objects() {
        let v = json!({ "a": 1, "b": { "c": [1, 2], "d": [[1], [2]] }, "e": [{ "f": true }] });
        assert_eq!(text(&v), "a: 1\nb:\n  c: [1, 2]\n  d: [[1], [2]]\ne:\n  -\n    f: true\n");
    }
}
