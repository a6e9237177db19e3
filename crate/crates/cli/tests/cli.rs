use std::process::Command as Process;

use clap::Parser;
use krulldim_cli::{run, ParsedCommand, EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK};
use serde_json::Value;

const KPM: &str = "pullback(T=val(2,1),m=1,D=field(0),outside=0)";

fn invoke(args: &[&str]) -> (i32, String, String) {
    let cmd = ParsedCommand::try_parse_from(std::iter::once("krulldim").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cmd, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn top_level_keys(out: &str) -> Vec<String> {
    out.lines()
        .filter_map(|l| {
            l.strip_prefix("  \"")
                .and_then(|r| r.split_once('"'))
                .map(|(k, _)| k.to_string())
        })
        .collect()
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn dim_text_output() {
    assert_eq!(invoke(&["dim", "field(2)", "field(3)"]).1, "2 (Sharp)\n");
    assert_eq!(invoke(&["dim", KPM, "af(1,1)"]).1, "3 (Thm 2.8)\n");
    assert_eq!(invoke(&["dim", "af(2,2)", "af(1,1)"]).1, "3 (Wadsworth 3.8)\n");
    assert_eq!(invoke(&["dim", KPM, KPM]).1, "3 (Thm 2.8)\n");
}

#[test]
fn dim_json_schema_and_field_order() {
    let (_, out, _) = invoke(&["--json", "dim", KPM, KPM]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        top_level_keys(&out),
        ["value", "theorem", "witnesses", "terms", "gates"]
    );
    assert_eq!(v["value"], 3);
    assert_eq!(v["theorem"], "Thm2.8");
    let pair = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["label"] == "pullback pair formula");
    assert_eq!(pair.unwrap()["value"], 3);
}

#[test]
fn json_flag_is_global() {
    let v = json(&["dim", "field(1)", "field(4)", "--json"]);
    assert_eq!(v["value"], 1);
    assert_eq!(v["theorem"], "Sharp");
}

#[test]
fn ht_uses_pullback_and_special_chain_formulas() {
    assert_eq!(
        invoke(&["ht", KPM, "af(1,1)", "--p", "M", "--q", "M"]).1,
        "3 (Thm 2.8)\n"
    );
    assert_eq!(
        invoke(&["ht", KPM, "af(1,1)", "--p", "in:0", "--q", "0"]).1,
        "2 (Thm 2.8)\n"
    );
    assert_eq!(
        invoke(&["ht", KPM, "af(1,1)", "--p", "out:0", "--q", "M", "--delta", "0"]).1,
        "1 (Thm 2.8)\n"
    );
    assert_eq!(
        invoke(&["ht", "af(1,1)", "af(1,1)", "--p", "M", "--q", "M"]).1,
        "2 (special chain)\n"
    );
    assert_eq!(
        invoke(&["ht", "af(2,2)", "field(1)", "--p", "ht:1", "--delta", "1"]).1,
        "2 (special chain)\n"
    );
    let v = json(&["ht", KPM, "af(1,1)", "--p", "M", "--q", "M", "--json"]);
    assert_eq!((v["value"].as_u64(), v["p"].as_str()), (Some(3), Some("in:0")));
}

#[test]
fn ht_rejects_out_of_range_delta_and_bad_selectors() {
    let (code, _, err) = invoke(&["ht", KPM, "af(1,1)", "--p", "M", "--q", "M", "--delta", "1"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("delta"), "{err}");
    let (code, _, err) = invoke(&["ht", KPM, "af(1,1)", "--p", "top"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("top"), "{err}");
}

#[test]
fn spectrum_text_and_json() {
    let (code, out, _) = invoke(&["spectrum", KPM]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("td 2, dim 1, AF false"), "{out}");
    assert!(out.contains("ht(p[n]) = 1 + min(n, 1)"), "{out}");
    let (_, raw, _) = invoke(&["spectrum", KPM, "--json"]);
    assert_eq!(top_level_keys(&raw), ["expr", "strata", "pairs", "flags"]);
    let v: Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(v["strata"].as_array().unwrap().len(), 2);
    assert_eq!(v["strata"][1]["poly_height"]["cap"], 1);
    assert_eq!(v["flags"]["is_af"], false);
    assert_eq!(v["flags"]["af_poly_threshold"], 1);
    assert_eq!(v["flags"]["applicability"]["label"], "Thm2.8-catenarian");
    assert_eq!(v["pairs"][1]["quotient"]["status"], "exact");
}

#[test]
fn explain_lists_gates_terms_and_witnesses() {
    let (code, out, _) = invoke(&["explain", KPM, "af(1,1)"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("dim = 3 via Thm 2.8"), "{out}");
    assert!(
        out.contains("Thm2.8-catenarian, Cor2.9-htM≤2, Prop2.10-tdKD≤2"),
        "{out}"
    );
    assert!(out.contains("B = af(1,1): AF"), "{out}");
    let v = json(&["explain", KPM, "af(1,1)", "--json"]);
    assert_eq!(v["dispatch"], "Thm 2.8");
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn parse_and_constraint_errors_exit_2_with_position() {
    let (code, out, err) = invoke(&["dim", "af(2,,1)", "field(0)"]);
    assert_eq!((code, out.as_str()), (EXIT_ERROR, ""));
    assert!(err.contains("syntax error at 5"), "{err}");
    let (code, _, err) = invoke(&["dim", "pullback(T=field(1), m=1, D=field(0), outside=0)", "field(0)"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("m <= dim(T)"), "{err}");
    let (code, _, err) = invoke(&["spectrum", "af(1,2)"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("af: dim <= td"), "{err}");
}

#[test]
fn check_runs_suites() {
    let (code, out, _) = invoke(&["check", "sharp-grid"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "PASS sharp-grid (49 cases, 0 failures)\n");
    let v = json(&["check", "prop24", "--json"]);
    assert_eq!(v[0]["suite"], "prop24");
    assert_eq!(v[0]["failures"].as_array().unwrap().len(), 0);
    assert_eq!(invoke(&["check", "no-such-suite"]).0, EXIT_ERROR);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_krulldim");
    let status = |args: &[&str]| Process::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["dim", "field(2)", "field(3)"]), Some(EXIT_OK));
    assert_eq!(status(&["check", "sharp-grid"]), Some(EXIT_OK));
    assert_eq!(status(&["dim", "field(", "field(3)"]), Some(EXIT_ERROR));
    let out = Process::new(bin).args(["dim", KPM, "af(1,1)"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "3 (Thm 2.8)\n");
    assert_ne!(EXIT_CHECK_FAILED, EXIT_OK);
}

#[test]
fn grid_env_var_scales_suites() {
    let bin = env!("CARGO_BIN_EXE_krulldim");
    let out = Process::new(bin)
        .args(["check", "sharp-grid"])
        .env("KRULLDIM_GRID_MAX", "2")
        .output()
        .unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "PASS sharp-grid (9 cases, 0 failures)\n"
    );
}
