use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const ENV: [&str; 6] = [
    "FINCODENSITY_MAX_SIZE",
    "FINCODENSITY_MAX_ARITY",
    "FINCODENSITY_CAP",
    "FINCODENSITY_UNIVERSE",
    "FINCODENSITY_JSON",
    "FINCODENSITY_SEED",
];

fn cmd() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fincodensity"));
    for var in ENV {
        c.env_remove(var);
    }
    c
}

fn run(args: &[&str]) -> Output {
    cmd().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--print-json");
    let o = run(&all);
    let v = serde_json::from_slice(&o.stdout).expect("json report");
    (o.status.code().unwrap(), v)
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("fincodensity-{}-{name}.json", std::process::id()))
}

#[test]
fn ultraset_enumeration_lists_eight_families() {
    let o = run(&["ultra", "enumerate", "--kind", "us", "--size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("8 ultrasets"), "{text}");
    assert!(
        text.contains("{{0,1}, {0,2}, {1,2}, {0,1,2}}"),
        "majority family listed"
    );

    let (code, v) = json_of(&["ultra", "enumerate", "--kind", "uf", "--size", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["count"], 3);
    assert_eq!(v["data"]["families"].as_array().unwrap().len(), 3);
}

#[test]
fn maybe_terminal_table() {
    let o = run(&["monad", "terminal", "--spec", "maybe"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for row in ["   0        1          0  yes", "   3        4          3  yes"] {
        assert!(text.contains(row), "{text}");
    }
    assert!(text.contains("T_{Maybe} ≅ Id"));
}

#[test]
fn verify_all_passes_up_to_two() {
    let o = run(&["verify", "all", "--max-size", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_all_at_three_fails_only_on_the_dd2_identification() {
    let (code, v) = json_of(&["verify", "all", "--max-size", "3"]);
    assert_eq!(code, 2);
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] != "PASS")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["[monad] T_DD2 equalizer theorem"]);
}

#[test]
fn invalid_input_exits_three() {
    for args in [
        &["monad", "laws", "--spec", "nosuch"][..],
        &["monad", "laws", "--spec", "maybe", "--universe", "1,x"],
        &["monad", "laws", "--spec", "{\"builtin\":"],
        &["operadic", "group-dd", "--group", "[[0,1],[0,0]]"],
        &["ultra", "enumerate", "--kind", "xx", "--size", "3"],
        &["scorecard", "--criteria", "11"],
        &["ultra", "enumerate", "--kind", "us", "--size", "3", "--cap", "0"],
    ] {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(3),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn cap_hit_exits_four() {
    let o = run(&["ultra", "enumerate", "--kind", "us", "--size", "4", "--cap", "1000"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("enumeration too large"));
}

#[test]
fn flags_override_env_override_defaults() {
    let args = ["ultra", "enumerate", "--kind", "us", "--size", "4"];
    assert_eq!(run(&args).status.code(), Some(0));
    let env_only = cmd().args(args).env("FINCODENSITY_CAP", "1000").output().unwrap();
    assert_eq!(env_only.status.code(), Some(4));
    let both = cmd()
        .args(args)
        .args(["--cap", "100000"])
        .env("FINCODENSITY_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(both.status.code(), Some(0));

    let seeded = cmd()
        .args(["monad", "laws", "--spec", "dd2", "--print-json"])
        .env("FINCODENSITY_SEED", "7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&seeded.stdout).unwrap();
    assert_eq!(v["command"]["config"]["seed"], 7);
}

#[test]
fn lowered_cap_reports_too_large_not_failure() {
    let (code, v) = json_of(&["scorecard", "--criteria", "1,2,4,7", "--cap", "200"]);
    assert_eq!(code, 4);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["verdict"] != "FAIL"));
    let too_large: Vec<&str> = checks
        .iter()
        .filter(|c| c["verdict"] == "TOO_LARGE")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(too_large.contains(&"[C1] |US(4)| = 128"), "{too_large:?}");
    assert!(too_large.iter().all(|n| !n.starts_with("[C7]")));
    assert!(checks
        .iter()
        .any(|c| c["name"] == "[C1] |US(2)| = 2" && c["verdict"] == "PASS"));
}

#[test]
fn corrupted_builtin_fails_with_witness() {
    let o = run(&["scorecard", "--criteria", "5", "--corrupt"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("[CorruptedMaybe]"), "{text}");
    assert!(text.contains("witness:"));
}

#[test]
fn reports_round_trip_through_recheck() {
    let path = temp("laws");
    let o = run(&[
        "monad",
        "laws",
        "--spec",
        "dd2",
        "--universe",
        "0,1,2",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["recheck", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["checks"][0]["verdict"] = "FAIL".into();
    std::fs::write(&path, v.to_string()).unwrap();
    let o = run(&["recheck", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn failing_report_witnesses_reproduce() {
    let path = temp("audit");
    let o = run(&["scorecard", "--criteria", "10", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["recheck", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let args = ["monad", "terminal", "--spec", "dd2", "--universe", "0,1,2,3"];
    let (_, a) = json_of(&args);
    let (_, b) = json_of(&args);
    assert_eq!(a["checks"], b["checks"]);
    assert_eq!(a["data"], b["data"]);
}

#[test]
fn operadic_reports_both_sides() {
    let (code, v) = json_of(&["operadic", "powers", "--d", "2", "--n", "2", "--c", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["codensity"], 3);
    assert_eq!(v["data"]["hom_n"], 3);
    assert_eq!(v["data"]["bijection"].as_array().unwrap().len(), 3);

    let (code, v) = json_of(&["operadic", "vect-dd", "--q", "2", "--dim", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["single_object"]["dimension"], 3);
    assert_eq!(v["data"]["operadic"]["dimension"], 2);
    assert_eq!(v["data"]["discrepancy"], true);

    let (code, v) = json_of(&["operadic", "group-dd", "--group", "[[0,1,2],[1,2,0],[2,0,1]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["unit_subgroup_order"], 3);
}

#[test]
fn codensity_object_families() {
    let (code, v) = json_of(&["codensity", "object", "--targets", "2", "--size", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["count"], 8);
    let f = &v["data"]["families"][0];
    assert_eq!(f["D"], serde_json::json!([{"size": 2}]));
    assert_eq!(f["values"].as_array().unwrap().len(), 8);
}
