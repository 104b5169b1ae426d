use std::process::{Command, Output};

use ppalg_core::catalog::Catalog;
use ppalg_core::module_rep::from_json;
use ppalg_core::quiver::DynkinType;
use serde_json::Value;

fn ppalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppalg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_table_and_json() {
    let o = ppalg(&["catalog", "--type", "A2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    let o = ppalg(&["catalog", "--type", "A3", "--emit", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 12);
    // representations round-trip into the same catalog entries
    let cat = Catalog::enumerate(DynkinType::a(3)).unwrap();
    for e in v["entries"].as_array().unwrap() {
        let m = from_json(&e["rep"]).unwrap();
        assert_eq!(cat.identify(&m).unwrap(), e["id"].as_u64().unwrap() as usize);
    }
}

#[test]
fn mutate_prints_exchange_sequences() {
    let o = ppalg(&["mutate", "--type", "A3", "--sequence", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("mutate at T2: (1 / 2) ↦ (2 / 1 3)"), "{s}");
    assert!(s.contains("0 → (1 / 2) → (1) ⊕ (2 / 1 3 / 2) → (2 / 1 3) → 0"), "{s}");
    assert!(s.contains("(x1*x5 + x3*x4)/x2"));
    let o = ppalg(&["mutate", "--type", "A2", "--sequence", "1,1", "--emit", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], serde_json::json!(["1", "1 / 2", "2 / 1"]));
    assert_eq!(v["steps"][0]["left"]["text"], "0 → (1) → (2 / 1) → (2) → 0");
    let o = ppalg(&["mutate", "--type", "A2", "--sequence", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_all_on_a3() {
    let o = ppalg(&["verify", "--type", "A3", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for tag in ["thm-quivershape", "thm-mutation", "prop-mutation3", "thm-multform", "catalog-count"] {
        assert!(s.lines().any(|l| l.starts_with(&format!("PASS {tag} "))), "{tag}: {s}");
    }
    assert!(!s.contains("FAIL"));
}

#[test]
fn phi_and_size_limit() {
    let o = ppalg(&["phi", "--type", "A2", "--module", "S1", "--word", "1,2,1"]);
    assert_eq!(stdout(&o).trim(), "t1 + t3");
    let o = ppalg(&["phi", "--type", "A2", "--module", "P1", "--emit", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["polynomial"], "t1*t2");
    let o = ppalg(&["phi", "--type", "A3", "--module", "P2,P2,P2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("too large"));
}

#[test]
fn rigid_check_modes() {
    let o = ppalg(&["rigid-check", "--type", "A2", "--module", "T1,T2,T3", "--emit", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["complete"], true);
    let o = ppalg(&["rigid-check", "--type", "A2", "--module", "1,2", "--field", "fp", "--prime", "5", "--emit", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ext1"], serde_json::json!([[0, 1], [1, 0]]));
    let o = ppalg(&["rigid-check", "--type", "A2", "--module", "S1", "--field", "fp", "--prime", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exchange_graph_outputs_are_deterministic() {
    let a = ppalg(&["exchange-graph", "--type", "A3", "--emit", "json"]);
    let b = ppalg(&["exchange-graph", "--type", "A3", "--emit", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["vertex_count"], 14);
    assert_eq!(v["edge_count"], 21);
    let dot = ppalg(&["exchange-graph", "--type", "A2", "--emit", "dot"]);
    assert!(stdout(&dot).starts_with("graph exchange {"));
    assert_eq!(ppalg(&["exchange-graph", "--type", "A4"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ppalg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ppalg(&["catalog", "--emit", "yaml"]).status.code(), Some(2));
    assert_eq!(ppalg(&["verify", "--cap", "2"]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("ppalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("build.json");
    let o = ppalg(&["build", "--type", "A2", "--emit", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["catalog_count"], 4);
    assert_eq!(v["exchange_data"]["b_circ"], serde_json::json!([[0], [-1], [1]]));
    std::fs::remove_dir_all(&dir).unwrap();
}
