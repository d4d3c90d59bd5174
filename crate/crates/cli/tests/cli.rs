use std::collections::BTreeSet;
use std::process::Command;

use gl2_langlands_cli::{command_paths, run, DISPATCH};
use serde_json::Value;

fn gl2ll(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gl2ll")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn json_of(args: &[&str]) -> Value {
    let (code, out, err) = gl2ll(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_slice(&out).unwrap()
}

const PS_FAMILY: &str = r#"{"variant":"ps","l":2,"sum":"T+1","product":"T"}"#;
const SPECIAL_FAMILY: &str = r#"{"variant":"special","l":3,"chi_frob":"T","n_poly":"T-2"}"#;
const SPECIAL_WD: &str =
    r#"{"variant":"split","l":2,"chi1":{"unit":"trivial","frob":10},"chi2":{"unit":"trivial","frob":5},"n_scale":7}"#;
const INDUCED_MODEL: &str =
    r#"{"kind":"induced","l":2,"level":1,"eta1":{"unit":"trivial","frob":1},"eta2":{"unit":"trivial","frob":3}}"#;
const T_L1: &str = r#"{"l":2,"level":1,"terms":[{"cartan":[1,0]}]}"#;
const Z_L1: &str = r#"{"l":2,"level":1,"terms":[{"cartan":[1,1],"coeff":[2,1]}]}"#;

/// One representative invocation per subcommand path, with its exit code.
fn invocations() -> Vec<(&'static str, Vec<String>, i32)> {
    let cont = continuous_rep();
    let e4 = serde_json::to_string(&json_of(&["qexp", "eisenstein", "--k", "4", "--prec", "8"])).unwrap();
    let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        ("gl2 decompose", v(&["gl2", "decompose", "--l", "2", "--g", "1,1/6;0,1"]), 0),
        ("gl2 iwasawa", v(&["gl2", "iwasawa", "--l", "3", "--g", "1,2;3,4"]), 0),
        ("gl2 cartan", v(&["gl2", "cartan", "--l", "3", "--g", "9,1;0,1"]), 0),
        ("gl2 cosets", v(&["gl2", "cosets", "--l", "2", "--n", "1", "--g", "2,0;0,1"]), 0),
        ("qexp eisenstein", v(&["qexp", "eisenstein", "--k", "4", "--p", "5", "--prec", "6"]), 0),
        ("qexp act", vec!["qexp".into(), "act".into(), "--f".into(), e4, "--l".into(), "2".into(), "--g".into(), "2,1;0,1".into(), "--k".into(), "4".into()], 0),
        ("qexp twist", v(&["qexp", "twist", "--l", "2", "--g", "2,0;0,1", "--k", "4", "--p", "5", "--prec", "6"]), 0),
        ("qexp check-cocycle", v(&["qexp", "check-cocycle", "--l", "2", "--g", "2,0;0,1", "--h", "1,1/2;0,1", "--k", "4", "--p", "5", "--prec", "6"]), 0),
        ("qexp check-up", v(&["qexp", "check-up", "--l", "2", "--g", "1,1/2;0,1", "--k", "4", "--p", "5", "--prec", "6"]), 0),
        ("wd classify", v(&["wd", "classify", "--wd", SPECIAL_WD, "--twist", r#"{"unit":"trivial","frob":3}"#]), 0),
        ("wd from-eigenform", v(&["wd", "from-eigenform", "--l", "2", "--a_l", "-24", "--chi_l", "1", "--k", "12"]), 0),
        ("monodromy extract", vec!["monodromy".into(), "extract".into(), "--rep".into(), cont], 0),
        ("monodromy roundtrip", v(&["monodromy", "roundtrip", "--count", "5", "--seed", "11"]), 0),
        ("hecke convolve", v(&["hecke", "convolve", "--a", T_L1, "--b", Z_L1]), 0),
        ("hecke act", v(&["hecke", "act", "--h", T_L1, "--model", INDUCED_MODEL]), 0),
        ("hecke trace", v(&["hecke", "trace", "--op", "T", "--model", INDUCED_MODEL]), 0),
        ("ll map", v(&["ll", "map", "--wd", SPECIAL_WD, "--norm", "modified", "--level", "1"]), 0),
        ("compat", v(&["compat", "--l", "2", "--a_l", "-24", "--chi_l", "1", "--k", "12", "--ops", "T,Z"]), 0),
        ("family trace", v(&["family", "trace", "--family", PS_FAMILY, "--op", "T", "--level", "1", "--at", "3"]), 0),
        ("family bad-points", v(&["family", "bad-points", "--family", SPECIAL_FAMILY]), 0),
        ("family check", v(&["family", "check", "--family", PS_FAMILY, "--op", "T", "--level", "1", "--samples", "20", "--seed", "5"]), 0),
    ]
}

fn continuous_rep() -> String {
    let rt = json_of(&["monodromy", "roundtrip", "--wd", SPECIAL_WD, "--p", "3", "--prec", "10", "--c", "2"]);
    serde_json::to_string(&rt["continuous"]).unwrap()
}

#[test]
fn dispatch_table_matches_parser() {
    let parsed: BTreeSet<String> = command_paths().into_iter().collect();
    let table: BTreeSet<String> = DISPATCH.iter().map(|(p, _)| p.to_string()).collect();
    assert_eq!(parsed, table);
    let tested: BTreeSet<String> = invocations().into_iter().map(|(p, _, _)| p.to_string()).collect();
    assert_eq!(tested, table);
}

#[test]
fn every_library_operation_is_reachable() {
    let reachable: BTreeSet<&str> = DISPATCH.iter().flat_map(|(_, ops)| ops.iter().copied()).collect();
    let required = [
        "bernoulli", "padic_log_matrix", "padic_exp_matrix",
        "reduce_to_standard_upper", "iwasawa_decompose", "cartan_decompose", "flag_coset_reps",
        "left_cosets_of_double_coset",
        "slash_upper", "adelic_action_qexp", "eisenstein_pdeprived", "twist_ratio_qexp", "up_factor",
        "classify", "twist", "det_wd", "frob_ss", "monodromy_extract", "wd_to_continuous", "wd_from_eigenform",
        "hecke_basis_element", "hecke_identity", "hecke_convolve", "act", "trace",
        "ll_map", "satake", "compat_check",
        "specialize", "tr_lan_family", "bad_points", "check_specialization",
    ];
    for op in required {
        assert!(reachable.contains(op), "{op} is not exposed by any subcommand");
    }
}

#[test]
fn every_command_is_deterministic() {
    for (path, args, code) in invocations() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c1, o1, e1) = gl2ll(&args);
        let (c2, o2, _) = gl2ll(&args);
        assert_eq!(c1, code, "{path}: {e1}");
        assert_eq!(c1, c2, "{path}");
        assert_eq!(o1, o2, "{path}: output differs between runs");
        assert!(!o1.is_empty(), "{path}: empty report");
    }
}

#[test]
fn seeds_change_random_reports() {
    let a = gl2ll(&["monodromy", "roundtrip", "--count", "3", "--seed", "1"]).1;
    let b = gl2ll(&["monodromy", "roundtrip", "--count", "3", "--seed", "2"]).1;
    assert_ne!(a, b);
}

#[test]
fn decompose_example() {
    let v = json_of(&["gl2", "decompose", "--l", "2", "--g", "1,1/6;0,1"]);
    assert_eq!(v, serde_json::json!({"m": 0, "n": 0, "a": 1, "r": 1, "u": "1,-1/3;0,1"}));
}

#[test]
fn compat_example_passes() {
    let v = json_of(&["compat", "--l", "2", "--a_l", "-24", "--chi_l", "1", "--k", "12", "--ops", "T,Z"]);
    let asserts = v["assertions"].as_array().unwrap();
    assert_eq!(asserts.len(), 2);
    assert!(asserts.iter().all(|a| a["pass"] == Value::Bool(true)));
    assert_eq!(v["traces"]["Z"]["coeffs"], serde_json::json!([[1024, 1]]));
}

#[test]
fn sign_flag_flips_the_frobenius_sum() {
    let plain = json_of(&["wd", "from-eigenform", "--l", "2", "--a_l", "-24", "--chi_l", "1", "--k", "12"]);
    let flipped =
        json_of(&["--paper-sign", "wd", "from-eigenform", "--l", "2", "--a_l", "-24", "--chi_l", "1", "--k", "12"]);
    assert_eq!(plain["wd"]["frob_sum"]["coeffs"], serde_json::json!([[-24, 1]]));
    assert_eq!(flipped["wd"]["frob_sum"]["coeffs"], serde_json::json!([[24, 1]]));
}

#[test]
fn malformed_input_exits_1_naming_the_field() {
    let (code, out, err) = gl2ll(&["wd", "classify", "--wd", r#"{"variant":"split","l":2,"chi1":3}"#]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("chi1"), "{err}");
    let (code, _, err) = gl2ll(&["wd", "classify", "--wd", "{not json"]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = gl2ll(&["gl2", "nonsense"]);
    assert_eq!(code, 1);
    let (code, _, err) = gl2ll(&["gl2", "decompose", "--l", "2", "--g", "1,2;3"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn precondition_violations_exit_2() {
    // (p − 1) ∤ k: no p-deprived Eisenstein series
    let (code, _, err) = gl2ll(&["qexp", "eisenstein", "--k", "6", "--p", "5"]);
    assert_eq!(code, 2, "{err}");
    // specialization at a pole of the family
    let fam = r#"{"variant":"ps","l":2,"sum":"1/(T-1)","product":"T"}"#;
    let (code, _, err) = gl2ll(&["family", "trace", "--family", fam, "--op", "T", "--level", "0", "--at", "1"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("pole"), "{err}");
    // the Steinberg representation has no spherical vectors: rank 0, not an error
    let v = json_of(&["ll", "map", "--wd", SPECIAL_WD, "--norm", "tate", "--level", "0"]);
    assert_eq!(v["model"]["rank"], 0);
}

#[test]
fn failed_checks_exit_3() {
    let ext = r#"[{"t": 3, "trace": 5}]"#;
    let (code, out, _) = gl2ll(&[
        "family", "check", "--family", PS_FAMILY, "--op", "T", "--level", "0", "--samples", "2", "--external", ext,
    ]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["pass"], Value::Bool(false));
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("gl2ll-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = gl2ll(&["--out", p, "gl2", "cartan", "--l", "2", "--g", "4,0;0,1"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!((v["a"].as_i64(), v["b"].as_i64()), (Some(2), Some(0)));
}

#[test]
fn family_commands_report_the_expected_objects() {
    let t = json_of(&["family", "trace", "--family", PS_FAMILY, "--op", "T", "--level", "0"]);
    assert_eq!(t["trace"], "T + 1");
    let bad = json_of(&["family", "bad-points", "--family", SPECIAL_FAMILY]);
    assert_eq!(bad["points"].as_array().unwrap().len(), 1);
    assert_eq!(bad["points"][0]["display"], "2");
    let chk = json_of(&[
        "family", "check", "--family", SPECIAL_FAMILY, "--op", "T", "--level", "1", "--samples", "4", "--points", "2",
    ]);
    let statuses: Vec<&str> = chk["points"].as_array().unwrap().iter().map(|p| p["status"].as_str().unwrap()).collect();
    assert!(statuses.contains(&"bad"));
    assert_eq!(chk["pass"], Value::Bool(true));
}

#[test]
fn help_exits_0() {
    let out = run(["gl2ll", "--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("family"));
}

#[test]
fn schema_lists_every_command() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let cmds = schema["commands"].as_object().unwrap();
    for (path, _) in DISPATCH {
        assert!(cmds.contains_key(*path), "schema is missing {path}");
    }
}
