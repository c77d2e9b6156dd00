use std::path::Path;
use std::process::{Command, Output};

use k3bhcr::catalog::{from_csv, golden_rows};

fn k3bhcr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3bhcr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_prints_the_triple() {
    let o = k3bhcr(&["analyze", "x^2 + y^3 + z^10 + w^15"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("weights     [15, 10, 3, 2]  degree 30"), "{out}");
    assert!(out.contains("(r,a,delta) = (10,4,0)"), "{out}");
}

#[test]
fn analyze_rejects_a_non_invertible_potential() {
    let o = k3bhcr(&["analyze", "x^2 + y^3 + y^3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quotients_of_the_sextic() {
    let o = k3bhcr(&["quotients", "--row", "T1:1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 10);
    let full = out.lines().find(|l| l.contains("Z/2 x Z/6")).unwrap();
    assert!(full.contains("(19,1,1)") && full.contains("3A1+3A5"), "{full}");
}

#[test]
fn mirror_check_row() {
    let o = k3bhcr(&["mirror-check", "--row", "T5:3a"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn csv_round_trip_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(k3bhcr(&["emit-tables", "--format", "csv", "--out", out]).status.success());
    assert!(k3bhcr(&["emit-tables", "--format", "json", "--out", out]).status.success());
    assert!(k3bhcr(&["emit-tables", "--format", "text", "--out", out]).status.success());

    let csv = std::fs::read_to_string(dir.path().join("catalog.csv")).unwrap();
    let cat = from_csv(&csv).unwrap();
    assert!(cat.entries.len() >= golden_rows().len());
    for r in golden_rows() {
        let e = cat.get(&r.id()).unwrap_or_else(|| panic!("{} missing", r.id()));
        let t = r.corrected_triple();
        assert_eq!(e.triple, Some([t.r, t.a, i64::from(t.delta)]), "{}", r.id());
        assert_eq!(e.weights, r.weights);
    }

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("catalog.json")).unwrap()).unwrap();
    let entries = json["entries"].as_array().unwrap();
    assert_eq!(entries.len(), cat.entries.len());
    for key in ["id", "weights", "f", "triple", "sl_order", "j_order", "transpose", "mirror"] {
        assert!(entries.iter().all(|e| e.get(key).is_some()), "{key}");
    }

    let text = std::fs::read_to_string(dir.path().join("catalog.txt")).unwrap();
    assert!(text.contains("(15,10,3,2)  y^3+z^10+w^15  (10,4,0)  30  30  1"));
}

#[test]
fn verify_passes_on_shipped_tables() {
    let o = k3bhcr(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

fn corrupted_golden(dir: &Path) -> String {
    let text = include_str!("../../../data/tables_1_5.json");
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    let row = v["rows"].as_array_mut().unwrap().iter_mut().find(|r| r["f"] == "y^3+z^10+w^15").unwrap();
    row["triple"] = serde_json::json!([10, 4, 1]);
    let path = dir.join("golden.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_fails_on_a_corrupted_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = corrupted_golden(dir.path());
    let o = k3bhcr(&["verify", "--golden", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL T1:18 triple")), "{}", stdout(&o));
}

#[test]
fn analyze_rejects_a_non_calabi_yau_potential() {
    let o = k3bhcr(&["analyze", "x^2+y^2z+z^5w+w^4y"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not Calabi-Yau"));
}
