use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mobility::io::format_value;
use mobility::tables;
use serde_json::Value;
use tempfile::TempDir;

fn mobility(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mobility"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("invalid JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn scenario_csv(dir: &Path, name: &str, v: [f64; 3]) -> String {
    let text = format!("id,u,v\nA,10,{}\nB,20,{}\nC,40,{}\n", v[0], v[1], v[2]);
    write(dir, name, &text).to_str().unwrap().to_string()
}

struct Fixture {
    _dir: TempDir,
    a: String,
    c: String,
    root: PathBuf,
}

fn fixture() -> Fixture {
    let dir = TempDir::new().unwrap();
    let root = dir.path().to_path_buf();
    Fixture {
        a: scenario_csv(&root, "1a.csv", [20.0, 40.0, 80.0]),
        c: scenario_csv(&root, "1c.csv", [20.0, 40.0, 10.0]),
        root,
        _dir: dir,
    }
}

#[test]
fn compute_examples() {
    let f = fixture();
    let out = mobility(&["compute", "--input", &f.a, "--measure", "S1", "--alpha", "0"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["measure"], "S1");
    assert_eq!(v["value"].as_f64(), Some(0.0));
    assert_eq!(v["params"]["alpha"].as_f64(), Some(0.0));

    let v = json(&mobility(&[
        "compute",
        "--input",
        &f.a,
        "--measure",
        "A2",
        "--gamma",
        "1",
    ]));
    assert_eq!(v["value"].as_f64(), Some(15.0));

    let out = mobility(&["compute", "--input", &f.a, "--measure", "A1", "--alpha", "1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["value"], "inf");
}

#[test]
fn compute_json_keys_are_in_schema_order() {
    let f = fixture();
    let v = json(&mobility(&[
        "compute",
        "--input",
        &f.c,
        "--measure",
        "T1",
        "--var",
        "n-1",
    ]));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["measure", "label", "params", "value"]);
    assert_eq!(v["params"]["var"], "n-1");
    assert_eq!(v["value"].as_f64(), Some(350.0));
}

#[test]
fn compute_tsv_and_decimals() {
    let f = fixture();
    let out = mobility(&[
        "compute",
        "--input",
        &f.c,
        "--measure",
        "S1",
        "--format",
        "tsv",
        "--decimals",
        "5",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "measure\tvalue\nS1(alpha=0)\t0.39608\n");
}

#[test]
fn shorrocks_inequality_switch() {
    let f = fixture();
    let v = json(&mobility(&[
        "compute",
        "--input",
        &f.c,
        "--measure",
        "shorrocks",
        "--inequality",
        "gini",
    ]));
    assert_eq!(v["measure"], "S_Gini");
    assert_eq!(v["value"].as_f64(), Some(0.5));
}

#[test]
fn parse_errors_exit_one_with_error_object() {
    let f = fixture();
    let bad = write(&f.root, "bad.csv", "id,u,v\nA,10,abc\n");
    let out = mobility(&["compute", "--input", bad.to_str().unwrap(), "--measure", "FO1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "BadNumber");

    let empty = write(&f.root, "empty.csv", "id,u,v\n");
    let out = mobility(&["compute", "--input", empty.to_str().unwrap(), "--measure", "FO1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "TooSmall");

    let out = mobility(&[
        "compute",
        "--input",
        &f.a,
        "--measure",
        "S1",
        "--status",
        "log",
        "--alpha",
        "0",
    ]);
    assert!(out.status.success());
}

#[test]
fn bad_arguments_exit_two() {
    let f = fixture();
    assert_eq!(
        mobility(&["check", "--measure", "S2", "--gamma", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mobility(&["compute", "--input", &f.a, "--measure", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(mobility(&["paper-tables", "3"]).status.code(), Some(2));
    assert_eq!(
        mobility(&["compute", "--input", &f.a, "--measure", "A2", "--pmode", "x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn builtin_tables_match_published_values() {
    for which in [1u8, 2, 4] {
        let out = mobility(&["paper-tables", &which.to_string(), "--format", "tsv"]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let published = tables::published(which).unwrap();
        let lines: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(lines.len(), published.len());
        for (line, row) in lines.iter().zip(&published) {
            let cells: Vec<f64> = line.split('\t').skip(1).map(|c| c.parse().unwrap()).collect();
            assert_eq!(cells.len(), row.len());
            for (got, want) in cells.iter().zip(row) {
                assert!((got - want).abs() <= 1.0001e-3, "table {which}: {line}");
            }
        }
    }
}

#[test]
fn table_two_prints_every_published_cell_exactly() {
    let out = mobility(&["paper-tables", "2", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let published = tables::published(2).unwrap();
    let mut mismatched = Vec::new();
    for (line, row) in text.lines().skip(1).zip(&published) {
        for (got, want) in line.split('\t').skip(1).zip(row) {
            if got != format_value(*want, 3) {
                mismatched.push(format!("{got} vs {want}"));
            }
        }
    }
    // last-digit rounding differences only; the numeric check above bounds them
    assert!(mismatched.len() <= 4, "{mismatched:?}");
}

#[test]
fn builtin_tables_are_byte_stable() {
    let a = mobility(&["paper-tables", "4"]).stdout;
    let b = mobility(&["paper-tables", "4"]).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["rows"][0]["measure"], "A1");
    assert_eq!(v["rows"][4]["1d"].as_f64(), Some(816.667));
}

#[test]
fn decompose_seg_and_updown() {
    let f = fixture();
    let v = json(&mobility(&[
        "decompose",
        "--input",
        &f.c,
        "--measure",
        "A2",
        "--gamma",
        "1",
        "--method",
        "seg",
    ]));
    let comps = v["components"].as_array().unwrap();
    let value = |label: &str| {
        comps.iter().find(|c| c["label"] == label).unwrap()["value"]
            .as_f64()
            .unwrap()
    };
    assert_eq!(value("structural"), 0.0);
    assert_eq!(value("exchange"), 5.556);
    assert_eq!(value("growth"), 0.0);

    let v = json(&mobility(&[
        "decompose",
        "--input",
        &f.c,
        "--measure",
        "S1",
        "--alpha",
        "0",
        "--method",
        "updown",
        "--decimals",
        "12",
    ]));
    assert!(v["residual"].as_f64().unwrap().abs() < 1e-10);
    let explained: f64 = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["weight"].as_f64().unwrap() * c["value"].as_f64().unwrap())
        .sum::<f64>()
        + v["between"].as_f64().unwrap();
    assert!((explained - 0.39608).abs() < 1e-5);
}

#[test]
fn decompose_subgroup_and_errors() {
    let f = fixture();
    let groups = write(&f.root, "g.csv", "id,group\nA,x\nB,y\nC,x\n");
    let out = mobility(&[
        "decompose",
        "--input",
        &f.c,
        "--measure",
        "T1",
        "--method",
        "subgroup",
        "--groups",
        groups.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
    assert_eq!(v["residual"].as_f64(), Some(0.0));

    let partial = write(&f.root, "p.csv", "id,group\nA,x\nB,y\n");
    let out = mobility(&[
        "decompose",
        "--input",
        &f.c,
        "--measure",
        "S1",
        "--method",
        "subgroup",
        "--groups",
        partial.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "UnknownGroupId");

    let out = mobility(&["decompose", "--input", &f.a, "--measure", "A2", "--method", "updown"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "DegeneratePartition");

    let out = mobility(&[
        "decompose",
        "--input",
        &f.c,
        "--measure",
        "A2",
        "--gamma",
        "3",
        "--method",
        "updown",
    ]);
    assert_eq!(json(&out)["error"], "UnsupportedGamma");
}

#[test]
fn check_single_measure() {
    let out = mobility(&["check", "--measure", "elasticity", "--seed", "7", "--trials", "50"]);
    assert!(out.status.success());
    let v = json(&out);
    let mono = &v["reports"][0]["monotonicity"];
    assert_eq!(mono["verdict"], "fail");
    let w = &mono["witness"];
    assert_eq!(w["first"]["u"], serde_json::json!([1.0, 2.0, 3.0]));
    assert_eq!(w["first"]["v"], serde_json::json!([2.0, 0.0, 4.0]));
    assert_eq!(w["second"]["v"], serde_json::json!([2.0, 1.0, 4.0]));
    assert_eq!(
        mobility(&["check", "--measure", "elasticity", "--seed", "7", "--trials", "50"]).stdout,
        out.stdout
    );
}

#[test]
fn check_all_reports_reference_differences() {
    let out = mobility(&["check", "--all", "--seed", "1", "--trials", "200"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 16);
    let diffs: Vec<String> = v["reference_differences"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|d| {
            let m = d["measure"].as_str().unwrap().to_string();
            d["columns"]
                .as_array()
                .unwrap()
                .iter()
                .map(move |c| format!("{m} {}", c.as_str().unwrap()))
                .collect::<Vec<_>>()
        })
        .collect();
    assert_eq!(
        diffs,
        [
            "A1 scale",
            "1-beta translation",
            "S_Theil axiom 2",
            "S_Gini axiom 2",
            "S_Gini translation",
            "RG1 axiom 2"
        ]
    );
    let tsv = mobility(&["check", "--all", "--trials", "50", "--format", "tsv"]);
    assert_eq!(String::from_utf8(tsv.stdout).unwrap().lines().count(), 17);
}

#[test]
fn scenarios_from_file_and_builtin() {
    let f = fixture();
    let file = write(
        &f.root,
        "s.json",
        r#"{"base": [1, 2, 3], "scenarios": {"same": [1, 2, 3], "swap": [3, 2, 1]}}"#,
    );
    let out = mobility(&[
        "scenarios",
        "--input",
        file.to_str().unwrap(),
        "--measure",
        "FO1",
        "--measure",
        "S2",
        "--format",
        "tsv",
    ]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "measure\tsame\tswap\nFO1\t0.000\t1.333\nS2(gamma=1)\t0.000\t0.222\n"
    );

    let v = json(&mobility(&["scenarios", "--measure", "RG1"]));
    assert_eq!(v["columns"].as_array().unwrap().len(), 7);
    assert_eq!(v["rows"][0]["1c"].as_f64(), Some(0.0));

    let bad = write(&f.root, "b.json", r#"{"base": [1, 2, 3], "scenarios": {"x": [1, 2]}}"#);
    let out = mobility(&["scenarios", "--input", bad.to_str().unwrap(), "--measure", "FO1"]);
    assert_eq!(json(&out)["error"], "ScenarioLength");
}
