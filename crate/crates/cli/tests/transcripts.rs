//! Golden transcripts and exit codes. Set `UPDATE_GOLDEN=1` to rewrite the
//! expected reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reductlab"))
        .args(args)
        .current_dir(data_dir())
        .env_remove("REDUCTLAB_OUT")
        .env_remove("REDUCTLAB_THREADS")
        .output()
        .expect("binary runs")
}

/// The report with timings removed.
fn normalized(out: &Output) -> Value {
    let mut report: Value = serde_json::from_slice(&out.stdout).expect("stdout is a JSON report");
    report.as_object_mut().unwrap().remove("timing");
    if let Some(suites) = report.pointer_mut("/output/suites").and_then(Value::as_array_mut) {
        for s in suites {
            s.as_object_mut().unwrap().remove("millis");
        }
    }
    report
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    let actual = normalized(&out);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&actual).unwrap() + "\n").unwrap();
        return;
    }
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let expected: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(actual, expected, "{name}");
}

fn verdict(out: &Output) -> String {
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    report["verdict"].as_str().unwrap().to_string()
}

#[test]
fn filter_transcripts() {
    golden("filter_decompose", &["filter", "decompose", "filter_base02.json"], 0);
    golden("filter_check_fail", &["filter", "check", "not_filter.json"], 1);
    golden("filter_decompose_not_filter", &["filter", "decompose", "not_filter.json"], 2);
    golden("filter_bdd_fail", &["filter", "bdd", "filter_base02.json", "--n", "1"], 1);
    golden("filter_bdd_pass", &["filter", "bdd", "filter_base02.json", "--n", "2"], 0);
}

#[test]
fn decompose_prints_points() {
    let out = run(&["filter", "decompose", "filter_base02.json"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["output"]["points"], serde_json::json!([0, 2]));
}

#[test]
fn algebra_transcripts() {
    golden("algebra_check_s3", &["algebra", "check", "S3"], 0);
    golden("algebra_check_bad_row", &["algebra", "check", "z2_bad_row.json"], 2);
    golden("algebra_check_faulty", &["algebra", "check", "z2_faulty.json"], 1);
    golden("algebra_identity_fail", &["algebra", "identity", "S3", "--equation", "mul(x,y) = mul(y,x)"], 1);
    golden("algebra_identity_parse", &["algebra", "identity", "S3", "--equation", "mul(x) = x"], 2);
}

#[test]
fn bad_row_error_names_position() {
    let out = run(&["algebra", "check", "z2_bad_row.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 3"));
}

#[test]
fn redprod_transcripts() {
    golden("redprod_factor_projection", &["redprod", "factor", "proj_z2z3.json"], 0);
    golden("redprod_factor_not_hom", &["redprod", "factor", "not_hom.json"], 1);
    golden("redprod_detect", &["redprod", "detect", "proj_z2z3.json"], 0);
    golden("redprod_build", &["redprod", "build", "--factors", "Z2,Z3,Z2", "--filter", "filter_base02.json"], 0);
    golden("redprod_surj", &["redprod", "surj", "--factors", "Z2,Z3,Z2", "--points", "0,2"], 0);
    golden("redprod_surj_bad_point", &["redprod", "surj", "--factors", "Z2,Z3", "--points", "5"], 2);
}

#[test]
fn projection_factors_through_one_ultrafilter() {
    let out = run(&["redprod", "factor", "proj_z2z3.json"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["output"]["ultrafilter_points"], serde_json::json!([1]));
}

#[test]
fn rel_transcripts() {
    golden("rel_dr_catalog", &["rel", "dr", "F3"], 0);
    golden("rel_dr_document", &["rel", "dr", "F2", "--relation", "ring_rel.json"], 0);
    golden("rel_perp_s3", &["rel", "perp", "S3"], 0);
    golden("rel_perp_closed", &["rel", "perp", "Z4", "--blocks", "[[0,2],[1,3]]", "--closed"], 0);
    golden("rel_perp_search", &["rel", "perp", "N5", "--search"], 0);
    golden("rel_almost", &["rel", "almost", "Z/4"], 0);
    golden("rel_ccfactor", &["rel", "ccfactor", "s3z4_proj.json"], 0);
    golden("rel_chain", &["rel", "chain", "s3z4_proj.json", "--parts", "[[1],[0]]"], 0);
    golden("rel_chain_bad_parts", &["rel", "chain", "s3z4_proj.json", "--parts", "[[1]]"], 2);
}

#[test]
fn ek_transcripts() {
    golden("ek_build_rational", &["ek", "build", "--size", "3", "--field", "rational"], 0);
    golden("ek_build_nonnegative", &["ek", "build", "--size", "3", "--field", "rational", "--seed-order", "nonnegative"], 0);
    golden("ek_build_small_prime", &["ek", "build", "--size", "3", "--field", "5"], 2);
    golden("ek_build_search_f7", &["ek", "build", "--size", "4", "--field", "7", "--search"], 0);
    golden("ek_build_search_f5", &["ek", "build", "--size", "4", "--field", "5", "--search"], 1);
    golden("ek_verify_pass", &["ek", "verify", "--matrix", "f7_4x4.json"], 0);
    golden("ek_verify_singular", &["ek", "verify", "--matrix", "singular.json"], 1);
    golden("ek_zerobound_all", &["ek", "zerobound", "--matrix", "f7_4x4.json"], 0);
    golden("ek_zerobound_fail", &["ek", "zerobound", "--matrix", "singular.json", "--coeffs", "2,-1"], 1);
    golden("ek_redpow", &["ek", "redpow", "--filter", "filter_base02.json", "--x-size", "5", "--q", "3"], 0);
}

#[test]
fn verify_all_default_caps_pass() {
    let out = run(&["verify-all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["output"]["suites"].as_array().unwrap().len() >= 29);
}

#[test]
fn verify_all_caps_beyond_limits() {
    golden("verify_all_cap_too_large", &["verify-all", "--max-index", "5"], 2);
    assert_eq!(run(&["verify-all", "--max-size", "0"]).status.code(), Some(2));
}

#[test]
fn verify_all_injected_fault() {
    let out = run(&["verify-all", "--inject-fault", "Z2:mul:1:0"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let witnesses = report["witnesses"].as_array().unwrap();
    let hom_law = witnesses.iter().find(|w| w["suite"] == "ualg.reference_copies").expect("hom-law witness");
    assert!(hom_law["witness"].as_str().unwrap().contains("h(mul"));
    assert_eq!(run(&["verify-all", "--inject-fault", "Z2:mul:1:1"]).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "--inject-fault", "nonsense"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["filter"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["filter", "decompose", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["algebra", "check", "NotAnAlgebra"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    for args in [&["rel", "almost", "S3"][..], &["ek", "build", "--size", "4", "--field", "rational"]] {
        assert_eq!(normalized(&run(args)), normalized(&run(args)));
    }
}

#[test]
fn report_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_reductlab"))
        .args(["filter", "decompose", "filter_base02.json"])
        .current_dir(data_dir())
        .env("REDUCTLAB_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("filter-decompose.json")).unwrap()).unwrap();
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(written, printed);
}

#[test]
fn thread_setting() {
    let with = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_reductlab"))
            .args(["ek", "verify", "--matrix", "f7_4x4.json"])
            .current_dir(data_dir())
            .env("REDUCTLAB_THREADS", v)
            .output()
            .unwrap()
    };
    let one = with("1");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(verdict(&one), "pass");
    assert_eq!(with("0").status.code(), Some(2));
    assert_eq!(with("many").status.code(), Some(2));
}
