use serde_json::Value;
use std::process::{Command, Output};

fn qmckay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmckay")).args(args).env_remove("QMCKAY_CACHE_DIR").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn chars_lists_classes() {
    let o = qmckay(&["chars", "--group", "bdn", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["classes"].as_array().unwrap().len(), 5);
    let table = v["result"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 5);
    assert!(table[0][0]["coeffs"].is_array());
}

#[test]
fn chars_dn5_has_b_centralizer_two() {
    let v = json(&qmckay(&["chars", "--group", "dn", "--n", "5"]));
    let b = v["result"]["classes"].as_array().unwrap().iter().find(|c| c["name"] == "b").unwrap().clone();
    assert_eq!(b["centralizer"], 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qmckay(&["chars", "--group", "bdn", "--n", "3"]).status.code(), Some(2));
    assert_eq!(qmckay(&["chars", "--n", "17"]).status.code(), Some(2));
    assert_eq!(qmckay(&["correlators", "--n", "4", "--max-len", "9"]).status.code(), Some(2));
    assert_eq!(qmckay(&["hodge", "--n", "5", "--m", "2"]).status.code(), Some(2));
    assert_eq!(qmckay(&["nonsense"]).status.code(), Some(2));
    assert_eq!(qmckay(&["bernoulli-graph", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn force_lifts_the_guard() {
    assert_eq!(qmckay(&["chars", "--group", "cyclic", "--n", "17", "--force"]).status.code(), Some(0));
}

#[test]
fn hodge_reports_closed_form() {
    let o = qmckay(&["hodge", "--n", "4", "--m", "3", "--mode", "both", "--check-closed-form"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["result"];
    assert_eq!(r["value"], "-9/32");
    assert_eq!(r["closed_form"], "-9/32");
    assert_eq!(r["match"], true);
}

#[test]
fn correlators_are_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let a = qmckay(&["correlators", "--n", "5", "--max-len", "4", "--cache-dir", d]);
    let b = qmckay(&["correlators", "--n", "5", "--max-len", "4", "--cache-dir", d]);
    let c = qmckay(&["correlators", "--n", "5", "--max-len", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&a.stderr).contains("cache miss"));
    assert!(String::from_utf8_lossy(&b.stderr).contains("cache hit"));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(dir.path().join("bdn-5-conjectural-len4.json").exists());
}

#[test]
fn corrupt_cache_fails() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(qmckay(&["correlators", "--n", "4", "--max-len", "3", "--cache-dir", d]).status.code(), Some(0));
    let f = dir.path().join("bdn-4-conjectural-len3.json");
    let s = std::fs::read_to_string(&f).unwrap().replacen("1/2", "1/3", 1);
    std::fs::write(&f, s).unwrap();
    let o = qmckay(&["correlators", "--n", "4", "--max-len", "3", "--cache-dir", d]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt cache"));
}

#[test]
fn wdvv_commands_pass() {
    let o = qmckay(&["wdvv-check", "--n", "4", "--max-len", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = qmckay(&["wdvv-solve", "--n", "5", "--max-len", "5", "--mode", "both", "--table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS paper mode vs generic mode"));
}

#[test]
fn bernoulli_graph_preset_and_cycle() {
    let o = qmckay(&["bernoulli-graph", "--preset", "gamma1", "--n", "2-6", "--fit", "2-6", "--holdout", "7,8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["fit"]["laurent"][0]["exp"], -1);
    assert_eq!(v["result"]["fit"]["laurent"][0]["coeff"], "1/6");
    let cyc = r#"{"vertices":[0,1,2],"edges":[{"u":0,"v":1,"decoration":[1]},{"u":1,"v":2,"decoration":[1]},{"u":2,"v":0,"decoration":[1]}]}"#;
    assert_eq!(qmckay(&["bernoulli-graph", "--tree", cyc]).status.code(), Some(2));
}

#[test]
fn verify_all_passes_and_sabotage_fails() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let a = qmckay(&["verify-all", "--cache-dir", d]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(json(&a)["passed"], true);
    let b = qmckay(&["verify-all", "--cache-dir", d]);
    assert_eq!(a.stdout, b.stdout);
    let s = qmckay(&["verify-all", "--n-range", "4", "--max-length", "4", "--sabotage"]);
    assert_eq!(s.status.code(), Some(1));
    let v = json(&s);
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| !c["counterexamples"].as_array().unwrap().is_empty()));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let o = qmckay(&["chars", "--n", "5", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["subcommand"], "chars");
}
