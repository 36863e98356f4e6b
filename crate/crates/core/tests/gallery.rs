use fwsets::gallery::{list, load, parse_case, run_all, run_case};
use fwsets::Error;

#[test]
fn every_case_passes() {
    let reports = run_all(0).unwrap();
    assert_eq!(reports.len(), list().len());
    let mut failures = Vec::new();
    for r in &reports {
        for c in r.checks.iter().filter(|c| !c.pass) {
            failures.push(format!(
                "{} / {}: expected {}, computed {}",
                r.name, c.name, c.expected, c.computed
            ));
        }
        assert_eq!(r.pass, r.checks.iter().all(|c| c.pass), "{}", r.name);
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn reports_are_ordered_by_name() {
    let names = list();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 9);
}

#[test]
fn every_verdict_carries_a_citation() {
    for name in ["hyperbola_set", "ice_cream_cut", "polyhedral_orthant"] {
        let r = run_case(name, 0).unwrap();
        assert!(r.checks.iter().all(|c| !c.citation.is_empty()), "{name}");
    }
}

#[test]
fn reports_are_stable_under_rerun() {
    for name in ["luo_zhang_ex1", "luo_zhang_theorem"] {
        let a = serde_json::to_string(&run_case(name, 3).unwrap()).unwrap();
        let b = serde_json::to_string(&run_case(name, 3).unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn luo_zhang_curve_decreases_toward_zero() {
    let r = run_case("luo_zhang_ex1", 0).unwrap();
    assert!(r.curve.len() >= 5);
    assert!(r.curve.windows(2).all(|w| w[1].value < w[0].value));
    assert!(r.curve.iter().all(|p| p.feasible == Some(true) && p.value > 0.0));
    assert!(r.curve.last().unwrap().value < 1e-3);
}

#[test]
fn truncated_minima_are_positive_and_below_the_samples() {
    for name in ["luo_zhang_ex1", "program_P"] {
        let r = run_case(name, 0).unwrap();
        for t in &r.truncated_minima {
            assert!(t.lower_f64 > 0.0, "{name} R={}", t.radius);
            if let Some(u) = t.upper {
                assert!(t.lower_f64 <= u, "{name} R={}", t.radius);
            }
        }
    }
}

#[test]
fn attainment_battery_records_small_kkt_residuals() {
    let r = run_case("luo_zhang_theorem", 0).unwrap();
    assert!(!r.attainment.is_empty());
    for a in &r.attainment {
        assert!(a.kkt_residual < 1e-8);
        assert!(a.multipliers.iter().all(|m| *m >= -1e-10));
    }
}

#[test]
fn unknown_case_is_reported() {
    assert!(matches!(load("no_such_case"), Err(Error::UnknownCase(_))));
}

#[test]
fn case_files_reject_unknown_fields() {
    let text = r#"{"version":"1","case":{"name":"x","colour":"red"}}"#;
    assert!(parse_case(text).is_err());
}

#[test]
fn evidence_decreases_and_stays_above_the_claimed_infimum() {
    for name in ["epigraph_exp", "luo_zhang_ex1", "program_P"] {
        let case = load(name).unwrap();
        let inf = fwsets::rat::to_f64(&case.doc.expected.infimum.clone().unwrap().0);
        let r = run_case(name, 0).unwrap();
        assert!(!r.curve.is_empty(), "{name}");
        assert!(r.curve.windows(2).all(|w| w[1].value < w[0].value), "{name}");
        assert!(r.curve.iter().all(|p| p.value >= inf - 1e-9), "{name}");
        let attained = r.checks.iter().find(|c| c.name == "attained").map(|c| c.pass);
        assert_ne!(attained, Some(false), "{name}");
    }
}
