//! Document format: golden bytes, round-trip stability, and load validation.

use matball::calculus::probe_points;
use matball::colligation::{theta_eval, Colligation};
use matball::sample::rng_from_seed;
use matball::{cx, ComplexMatrix, ToleranceConfig};
use matball_cli::{
    doc_to_matrix, matrix_to_doc, parse_colligation, parse_matrix, parse_report,
    render_colligation, render_matrix, render_report, DocError, MatrixDoc, VerificationReport,
};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

#[test]
fn golden_constant_colligation_document() {
    let g = Colligation::new(1, 2, 0, ComplexMatrix::identity(1), &tol()).unwrap();
    let text = render_colligation(&g);
    assert_eq!(
        text,
        r#"{"alpha":1,"m":2,"j":0,"matrix":{"rows":1,"cols":1,"data":[[1.0,0.0]]}}"#
    );
    let back = parse_colligation(&text, &tol()).unwrap();
    assert_eq!(render_colligation(&back), text);
}

#[test]
fn golden_report_line() {
    let report = VerificationReport {
        theorem_id: "T2".to_string(),
        trials: 5,
        max_error: 1.5e-12,
        skipped: 0,
        pass: true,
        runtime_ms: None,
        seed: 7,
    };
    let text = render_report(&report);
    assert_eq!(
        text,
        r#"{"theorem_id":"T2","trials":5,"max_error":1.5e-12,"skipped":0,"pass":true,"seed":7}"#
    );
    assert_eq!(parse_report(&text).unwrap(), report);
}

#[test]
fn report_includes_runtime_only_when_present() {
    let mut report = VerificationReport {
        theorem_id: "T4".to_string(),
        trials: 1,
        max_error: 0.0,
        skipped: 0,
        pass: true,
        runtime_ms: Some(12),
        seed: 0,
    };
    assert!(render_report(&report).contains("\"runtime_ms\":12"));
    report.runtime_ms = None;
    assert!(!render_report(&report).contains("runtime_ms"));
}

#[test]
fn random_colligation_round_trip_is_byte_stable() {
    let mut rng = rng_from_seed(31);
    let g = Colligation::random(2, 2, 2, &mut rng);
    let text = render_colligation(&g);
    let back = parse_colligation(&text, &tol()).unwrap();
    assert_eq!(render_colligation(&back), text);
    // The reload is entry-exact, so evaluation agrees bit for bit.
    for s in probe_points(2, 5) {
        let a = theta_eval(&g, &s, &tol()).unwrap();
        let b = theta_eval(&back, &s, &tol()).unwrap();
        assert_eq!(a.max_abs_diff(&b), 0.0);
    }
}

#[test]
fn matrix_round_trip_keeps_awkward_values() {
    let m = ComplexMatrix::from_fn(2, 3, |r, c| {
        cx(
            (r as f64 + 1.0) / 3.0 * (c as f64 + 0.1),
            -(c as f64 + 1.0) / 7.0,
        )
    });
    let text = render_matrix(&m);
    let back = parse_matrix(&text).unwrap();
    assert_eq!(render_matrix(&back), text);
    assert_eq!(m.max_abs_diff(&back), 0.0);
}

#[test]
fn non_unitary_colligation_is_rejected_on_load() {
    let doc = r#"{"alpha":1,"m":1,"j":1,"matrix":{"rows":2,"cols":2,"data":[[2.0,0.0],[0.0,0.0],[0.0,0.0],[2.0,0.0]]}}"#;
    match parse_colligation(doc, &tol()) {
        Err(DocError::InvariantViolation { defect }) => assert!(defect > 1.0),
        other => panic!("expected invariant violation, got {other:?}"),
    }
}

#[test]
fn malformed_document_reports_position() {
    let doc = "{\"alpha\": 1,\n  \"m\": oops}";
    match parse_matrix(doc) {
        Err(DocError::Parse { line, column, .. }) => {
            assert_eq!(line, 2);
            assert!(column > 0);
        }
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn inconsistent_shape_is_rejected() {
    let doc = MatrixDoc { rows: 2, cols: 2, data: vec![[1.0, 0.0]; 3] };
    assert!(matches!(doc_to_matrix(&doc), Err(DocError::Invalid(_))));
    let bad = MatrixDoc { rows: 1, cols: 1, data: vec![[f64::NAN, 0.0]] };
    assert!(matches!(doc_to_matrix(&bad), Err(DocError::Invalid(_))));
}

#[test]
fn wrong_block_shape_is_invalid_not_a_violation() {
    // A 3x3 matrix cannot be a (1, 1, 1) colligation: that is a shape problem,
    // not a unitarity defect.
    let eye = matrix_to_doc(&ComplexMatrix::identity(3));
    let doc = format!(
        r#"{{"alpha":1,"m":1,"j":1,"matrix":{}}}"#,
        serde_json::to_string(&eye).unwrap()
    );
    assert!(matches!(parse_colligation(&doc, &tol()), Err(DocError::Invalid(_))));
}
