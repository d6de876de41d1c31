use clap::Parser;
use serde_json::Value;

use nilcomm_cli::{parse_range, run, Cli, Family, Pattern};
use nilcomm_core::Property;

fn invoke(args: &[&str]) -> anyhow::Result<(Value, i32)> {
    let mut argv = vec!["nilcomm", "--format", "json"];
    argv.extend_from_slice(args);
    let out = run(&Cli::try_parse_from(argv)?)?;
    Ok((serde_json::from_str(&out.output)?, out.exit_code))
}

fn text(args: &[&str]) -> String {
    let mut argv = vec!["nilcomm"];
    argv.extend_from_slice(args);
    run(&Cli::try_parse_from(argv).unwrap()).unwrap().output
}

#[test]
fn classify_z4_document() {
    let (doc, code) = invoke(&["classify", "regular(Z(4))"]).unwrap();
    assert_eq!(code, 0);
    assert_eq!(doc["descriptor"], "regular(Z(4))");
    assert!(doc["tool_version"].as_str().unwrap().starts_with("nilcomm"));
    assert!(doc.get("runtime_ms").is_none());
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    let find = |p: &str| results.iter().find(|r| r["property"] == p).unwrap();
    assert_eq!(find("semicommutative")["holds"], true);
    assert_eq!(find("weakly-semicommutative")["holds"], true);
    let ns = find("nil-semicommutative");
    assert_eq!(ns["holds"], false);
    assert_eq!((ns["witness"]["a"].as_u64(), ns["witness"]["m"].as_u64(), ns["witness"]["r"].as_u64()), (Some(1), Some(1), Some(2)));
    assert_eq!(doc["summary"]["nil_set_size"], 3);
}

#[test]
fn timings_are_opt_in() {
    let (doc, _) = invoke(&["--timings", "classify", "regular(Z(2))"]).unwrap();
    assert!(doc["runtime_ms"].is_u64());
}

#[test]
fn classify_selected_properties() {
    let (doc, _) = invoke(&["classify", "matmod(2, regular(Z(2)))", "--properties", "semicommutative,nil-semicommutative"]).unwrap();
    let r = doc["results"].as_array().unwrap();
    assert_eq!(r.len(), 2);
    assert_eq!(r[0]["holds"], false);
    assert_eq!(r[1]["holds"], true);
    assert!(invoke(&["classify", "regular(Z(4))", "--properties", "commutative"]).is_err());
}

#[test]
fn nilset_of_z12() {
    let (doc, _) = invoke(&["nilset", "regular(Z(12))"]).unwrap();
    let members: Vec<u64> = doc["results"].as_array().unwrap().iter().map(|r| r["element"].as_u64().unwrap()).collect();
    assert_eq!(members, vec![0, 1, 3, 5, 7, 9, 11]);
    assert!(doc["results"][0]["witness"].is_null());
    assert_eq!(doc["results"][2]["witness"]["t"], 2);
}

#[test]
fn search_prime_powers() {
    let (doc, _) = invoke(&["search", "zn", "2..16", "--pattern", "semicommutative & !nil-semicommutative"]).unwrap();
    let found: Vec<u64> = doc["results"].as_array().unwrap().iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(found, vec![4, 8, 9, 12, 16]);
    assert_eq!(doc["summary"]["scanned"], 15);
}

#[test]
fn search_skips_instances_above_cap() {
    let (doc, _) = invoke(&["search", "matn", "2..3", "--pattern", "nil-semicommutative & !semicommutative"]).unwrap();
    assert_eq!(doc["results"].as_array().unwrap().len(), 1);
    assert_eq!(doc["results"][0]["descriptor"], "matmod(2, regular(Z(2)))");
    let skipped = doc["summary"]["skipped"].as_array().unwrap();
    assert_eq!(skipped.len(), 1);
    assert_eq!(skipped[0]["instance"], "matmod(3, regular(Z(2)))");
}

#[test]
fn search_families() {
    let (doc, _) = invoke(&["search", "tn", "2..2", "--base", "2", "--pattern", "!nil-semicommutative"]).unwrap();
    assert_eq!(doc["results"][0]["descriptor"], "regular(T(2, Z(2)))");
    let (doc, _) = invoke(&["search", "vn", "2..3", "--base", "2", "--pattern", "!nil-semicommutative"]).unwrap();
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);
}

#[test]
fn cap_and_force() {
    assert!(invoke(&["--cap", "10", "classify", "regular(Z(4))"]).is_err());
    let (doc, _) = invoke(&["--cap", "10", "--force", "classify", "regular(Z(4))"]).unwrap();
    assert_eq!(doc["results"].as_array().unwrap().len(), 5);
}

#[test]
fn suite_subset_and_exit_codes() {
    let (doc, code) = invoke(&["verify-paper", "--only", "lemma_squarefree,tor_t_sets", "--nmax", "100"]).unwrap();
    assert_eq!(code, 0);
    let ids: Vec<&str> = doc["results"].as_array().unwrap().iter().map(|r| r["check_id"].as_str().unwrap()).collect();
    assert_eq!(ids, vec!["lemma_squarefree", "tor_t_sets"]);
    let (doc, code) = invoke(&["verify-paper", "--only", "remark_nil_modules"]).unwrap();
    assert_eq!(code, 2);
    assert_eq!(doc["results"][0]["status"], "refuted");
    assert!(invoke(&["verify-paper", "--only", "no_such_check"]).is_err());
}

#[test]
fn text_rendering() {
    let out = text(&["classify", "regular(Z(4))"]);
    assert!(out.starts_with("nilcomm"));
    assert!(out.contains("nil-semicommutative"));
    assert!(out.contains("witness a=1 r=2 m=1"));
    let out = text(&["nilset", "regular(Z(4))"]);
    assert!(out.contains("(t = 2, k = 2)"));
}

#[test]
fn parse_errors_surface() {
    let e = invoke(&["classify", "regular(Z(4)"]).unwrap_err();
    assert!(format!("{e:#}").contains("regular(Z(4)"));
    assert!(invoke(&["--threads", "0", "classify", "regular(Z(2))"]).is_err());
}

#[test]
fn ranges_and_patterns() {
    assert_eq!(parse_range("2..5").unwrap(), 2..=5);
    assert_eq!(parse_range("3..=3").unwrap(), 3..=3);
    assert!(parse_range("5..2").is_err());
    assert!(parse_range("7").is_err());
    let p = Pattern::parse("semicommutative & !nil-semicommutative").unwrap();
    assert_eq!(p.0, vec![(Property::Semicommutative, true), (Property::NilSemicommutative, false)]);
    assert!(Pattern::parse("semicommutative & !bogus").is_err());
    assert_eq!(Family::Matn.instance(3, 2), "matmod(3, regular(Z(2)))");
}

#[test]
fn classify_is_identical_across_worker_counts() {
    let expr = "regular(T(2, Z(4)))";
    let outputs: Vec<String> = ["1", "2", "5"]
        .iter()
        .map(|t| {
            let cli = Cli::try_parse_from(["nilcomm", "--format", "json", "--threads", t, "classify", expr]).unwrap();
            run(&cli).unwrap().output
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    assert!(outputs[0].contains(expr));
}
