use aqrm::verify::{flipped_norm_terms, verify, verify_with, VerifyLevel};

#[test]
fn quick_suite_passes() {
    let report = verify(VerifyLevel::Quick);
    for p in &report.properties {
        assert!(p.passed(), "{p:?}");
    }
    assert!(report.total_cases() >= 300);
}

#[test]
fn broken_norm_is_detected() {
    let report = verify_with(VerifyLevel::Quick, flipped_norm_terms);
    assert!(!report.passed());
    assert!(!report.get("formula_equivalence").unwrap().passed());
    assert!(!report.get("oracle_equivalence").unwrap().passed());
}

#[test]
fn full_suite_has_no_upper_bound_violations() {
    let report = verify(VerifyLevel::Full);
    let bound = report.get("upper_bound").unwrap();
    assert_eq!(bound.cases, 500);
    assert_eq!(bound.failures, 0);
    assert!(report.passed(), "{:?}", report.failed().collect::<Vec<_>>());
}

#[test]
fn summary_is_machine_readable() {
    let report = verify_with(VerifyLevel::Quick, flipped_norm_terms);
    let mut buf = Vec::new();
    report.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "property,cases,failures,worst,tolerance,status");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), report.properties.len());
    assert!(rows.iter().all(|r| r.len() == 6));
    assert!(rows.iter().any(|r| r[0] == "formula_equivalence" && r[5] == "fail"));
}
