use nilcomm_core::harness::{run_all, HarnessConfig, Status, REGISTRY};

#[test]
fn full_run_witnesses_replay() {
    let config = HarnessConfig::default();
    let run = run_all(&config).unwrap();
    assert_eq!(run.reports.len(), REGISTRY.len());
    assert_eq!(run.count(Status::Error), 0, "{:#?}", run.reports.iter().filter(|r| r.status == Status::Error).collect::<Vec<_>>());
    for report in &run.reports {
        assert!(report.reverify(&config.limits).unwrap(), "{} witnesses do not replay", report.check_id);
        if report.status == Status::Refuted {
            assert!(!report.witnesses.is_empty(), "{} refuted without witnesses", report.check_id);
        }
    }
    let refuted: Vec<&str> = run.reports.iter().filter(|r| r.status == Status::Refuted).map(|r| r.check_id.as_str()).collect();
    assert_eq!(refuted, vec!["remark_nil_modules", "localization_transfer"]);
    assert_eq!(run.exit_code(), 2);
}

#[test]
fn reports_are_deterministic() {
    let config = HarnessConfig {
        only: Some(vec!["lemma_matrix_nil".into(), "example_matrix".into(), "hierarchy_inclusions".into()]),
        ..HarnessConfig::default()
    };
    let a = serde_json::to_string(&run_all(&config).unwrap()).unwrap();
    let b = serde_json::to_string(&run_all(&config).unwrap()).unwrap();
    assert_eq!(a, b);
}
