use experiments::*;

const SUITE: &str = r#"
[[experiment]]
kind = "noroots"
name = "noroots p=7"
p = 7

[[experiment]]
kind = "posi"
name = "posi small"
max_n = 5

[[experiment]]
kind = "z0_constant"
"#;

#[test]
fn config_runs_in_order_with_names() {
    let suite = SuiteConfig::from_toml(SUITE).unwrap();
    let out = run_all(&suite.experiment);
    let names: Vec<String> = out.iter().map(|r| r.as_ref().unwrap().name.clone()).collect();
    assert_eq!(names, ["noroots p=7", "posi small", "z0_constant"]);
    assert!(out.iter().all(|r| r.as_ref().unwrap().pass));
}

#[test]
fn csv_has_one_row_per_matched_pair() {
    let rep = ExperimentConfig::new(ExperimentKind::Noroots(NorootsParams::default())).run().unwrap();
    let csv = reports_csv(std::slice::from_ref(&rep));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), rep.pairing.len());
    assert!(!rows.is_empty());
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), CSV_HEADER.split(',').count());
        let mismatch: f64 = cols.last().unwrap().parse().unwrap();
        assert!(mismatch < 1e-8);
    }
}

#[test]
fn report_json_round_trip() {
    let rep = run_posi(&PosiParams { max_n: 4, ..Default::default() }).unwrap();
    let text = serde_json::to_string(&rep).unwrap();
    let back: ExperimentReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.checks, rep.checks);
    assert_eq!(back.pass, rep.pass);
    let v = rep.to_json();
    // complex numbers as [re, im]
    assert_eq!(v["eigenvalues"][0].as_array().unwrap().len(), 2);
}

#[test]
fn perturbation_flips_single_runs() {
    for kind in [
        ExperimentKind::Noroots(NorootsParams::default()),
        ExperimentKind::Posi(PosiParams { max_n: 5, ..Default::default() }),
        ExperimentKind::Z0Constant(Z0ConstantParams::default()),
    ] {
        assert!(kind.run().unwrap().pass, "{}", kind.tag());
        assert!(!kind.perturbed(NEGATIVE_FACTOR).run().unwrap().pass, "{}", kind.tag());
    }
}

#[test]
fn suite_shape() {
    let suite = acceptance_suite();
    let ids: Vec<&str> = suite.iter().map(|c| c.id).collect();
    assert_eq!(ids, ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"]);
    let neg = negative_controls(&suite);
    assert_eq!(neg.runs.len(), suite.iter().map(|c| c.runs.len()).sum::<usize>());
    let a9 = run_criterion(suite.iter().find(|c| c.id == "A9").unwrap());
    assert!(a9.pass && a9.status_line().starts_with("PASS A9"));
}

#[test]
fn domain_errors_are_classified() {
    let e = run_noroots(&NorootsParams { s: -3.0, ..Default::default() }).unwrap_err();
    assert!(e.is_domain(), "{e}");
    assert!(SuiteConfig::from_toml("[[experiment]]\nkind = \"noroots\"\np = \"x\"\n").is_err());
}
