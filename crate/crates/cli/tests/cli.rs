use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn write(dir: &Path, name: &str, v: &Value) {
    std::fs::write(dir.join(name), serde_json::to_string_pretty(v).unwrap()).unwrap();
}

fn robustsub(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robustsub"))
        .arg("--workdir")
        .arg(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Two modular objectives on 4 elements, at most 2 picks.
/// Pair values (f1, f2): {0,1}=(4,2) {0,2}=(3,3) {0,3}=(5,1) {1,2}=(1,5) {1,3}=(3,3) {2,3}=(2,4),
/// so the max-min is 3, first reached at {0,2}.
fn four_element_fixture() -> Value {
    json!({
        "objectives": [
            {"type": "modular", "weights": [3.0, 1.0, 0.0, 2.0]},
            {"type": "modular", "weights": [0.0, 2.0, 3.0, 1.0]}
        ],
        "constraint": {"type": "uniform", "budget": 2},
        "epsilon": 0.2
    })
}

fn coverage_fixture() -> Value {
    json!({
        "labels": ["a", "b", "c", "d", "e", "f"],
        "objectives": [
            {"type": "coverage", "covers": [[0, 1], [1, 2], [3], [0, 3, 4], [5], [2, 5]], "weights": [0.16, 0.16, 0.16, 0.16, 0.16, 0.16]},
            {"type": "coverage", "covers": [[4], [0, 5], [1, 2], [3], [0, 1, 2], [5]], "weights": [0.16, 0.16, 0.16, 0.16, 0.16, 0.16]}
        ],
        "constraint": {"type": "partition", "parts": [[0, 1, 2], [3, 4, 5]], "budgets": [1, 1]},
        "epsilon": 0.1
    })
}

#[test]
fn oracle_matches_hand_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "four.json", &four_element_fixture());
    let v = stdout_json(&robustsub(dir.path(), &["oracle", "four.json"]));
    assert_eq!(v["value"], json!(3.0));
    assert_eq!(v["set"], json!([0, 2]));
}

#[test]
fn solve_reaches_one_minus_epsilon_of_oracle() {
    let dir = tempfile::tempdir().unwrap();
    for (name, fixture) in [
        ("four.json", four_element_fixture()),
        ("cov.json", coverage_fixture()),
    ] {
        write(dir.path(), name, &fixture);
        let eps = fixture["epsilon"].as_f64().unwrap();
        let opt = stdout_json(&robustsub(dir.path(), &["oracle", name]))["value"]
            .as_f64()
            .unwrap();
        let sol = stdout_json(&robustsub(dir.path(), &["solve", name]));
        let got = sol["min_value"].as_f64().unwrap();
        assert!(
            got >= (1.0 - eps) * opt - 1e-9,
            "{name}: {got} vs opt {opt}"
        );
        assert_eq!(
            sol["layers"].as_array().unwrap().len(),
            sol["ell"].as_u64().unwrap() as usize
        );
    }
}

#[test]
fn validate_rejects_non_matroid_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    // {2} cannot be extended from {0, 1}: exchange fails.
    let fixture = json!({
        "objectives": [{"type": "modular", "weights": [1.0, 1.0, 1.0]}],
        "constraint": {"type": "explicit", "sets": [[], [0], [1], [2], [0, 1]]}
    });
    write(dir.path(), "bad.json", &fixture);
    let out = robustsub(dir.path(), &["validate", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not a matroid"), "{err}");
    assert!(err.contains("extends"), "{err}");
}

#[test]
fn validate_flags_non_submodular_objective() {
    let dir = tempfile::tempdir().unwrap();
    // f({0,1}) = 3 > f({0}) + f({1}): increasing returns.
    let fixture = json!({
        "objectives": [{"type": "table", "values": [0.0, 1.0, 1.0, 3.0]}],
        "constraint": {"type": "uniform", "budget": 1}
    });
    write(dir.path(), "sup.json", &fixture);
    let out = robustsub(dir.path(), &["validate", "sup.json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], json!(false));
    assert_eq!(v["objectives"][0]["submodular"], json!(false));

    write(dir.path(), "ok.json", &coverage_fixture());
    assert_eq!(
        stdout_json(&robustsub(dir.path(), &["validate", "ok.json"]))["valid"],
        json!(true)
    );
}

#[test]
fn size_limit_and_parameter_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = json!({
        "objectives": [{"type": "modular", "weights": vec![1.0; 24]}],
        "constraint": {"type": "uniform", "budget": 3}
    });
    write(dir.path(), "big.json", &fixture);
    assert_eq!(
        robustsub(dir.path(), &["oracle", "big.json"]).status.code(),
        Some(3)
    );
    write(dir.path(), "four.json", &four_element_fixture());
    assert_eq!(
        robustsub(dir.path(), &["--epsilon", "1.5", "solve", "four.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        robustsub(dir.path(), &["solve-knapsack", "four.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn literal_params_refused_above_limit() {
    let dir = tempfile::tempdir().unwrap();
    let mut fixture = four_element_fixture();
    for (obj, w) in [[0.3, 0.1, 0.0, 0.2], [0.0, 0.2, 0.3, 0.1]]
        .iter()
        .enumerate()
    {
        fixture["objectives"][obj]["weights"] = json!(w);
    }
    fixture["adversary"] = json!({"type": "stationary", "horizon": 2});
    write(dir.path(), "online.json", &fixture);
    let out = robustsub(dir.path(), &["--paper-params", "online", "online.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fixed_seed_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut fixture = coverage_fixture();
    fixture["adversary"] = json!({"type": "drifting", "horizon": 6, "period": 3, "seed": 5});
    write(dir.path(), "cov.json", &fixture);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    for args in [
        &[
            "--seed",
            "7",
            "solve-continuous",
            "cov.json",
            "--delta",
            "0.05",
        ][..],
        &[
            "--seed",
            "7",
            "--samples",
            "64",
            "solve-continuous",
            "cov.json",
            "--delta",
            "0.05",
        ][..],
    ] {
        let a = strip(stdout_json(&robustsub(dir.path(), args)));
        let b = strip(stdout_json(&robustsub(dir.path(), args)));
        assert_eq!(a, b);
    }
    let args = [
        "--seed",
        "3",
        "online",
        "cov.json",
        "--transcript",
        "t.jsonl",
        "--regret-csv",
        "r.csv",
    ];
    let a = robustsub(dir.path(), &args);
    let ta = std::fs::read(dir.path().join("t.jsonl")).unwrap();
    let b = robustsub(dir.path(), &args);
    let tb = std::fs::read(dir.path().join("t.jsonl")).unwrap();
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(ta, tb);
    assert_eq!(String::from_utf8(ta).unwrap().lines().count(), 6);
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,payoff,hindsight,regret"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn experiment_without_timing_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"n": 40, "num_users": 30, "k": 3, "q": 4, "b": 2, "lambda_size": 5,
                     "sparsity": 0.2, "epsilon": 0.1, "trials": 3, "seed": 11});
    write(dir.path(), "exp.json", &cfg);
    let a = robustsub(dir.path(), &["experiment", "exp.json", "--no-timing"]);
    let b = robustsub(dir.path(), &["experiment", "exp.json", "--no-timing"]);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
    let bound = v["summary"]["per_part_bound"].as_u64().unwrap();
    assert!(v["summary"]["max_per_part"].as_u64().unwrap() <= bound);

    let csv = robustsub(dir.path(), &["--output", "csv", "experiment", "exp.json"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 4);
}

#[test]
fn knapsack_intersection_and_dro_commands() {
    let dir = tempfile::tempdir().unwrap();
    let mut base = coverage_fixture();
    base["constraint"] = json!({"type": "knapsack", "costs": [0.5, 0.3, 0.4, 0.6, 0.2, 0.5]});
    write(dir.path(), "k.json", &base);
    let v = stdout_json(&robustsub(dir.path(), &["solve-knapsack", "k.json"]));
    let ell = v["ell"].as_f64().unwrap();
    assert!(v["union_cost"].as_f64().unwrap() <= ell + 1e-9);

    base["constraint"] = json!({"type": "intersection", "matroids": [
        {"type": "partition", "parts": [[0, 1, 2], [3, 4, 5]], "budgets": [1, 1]},
        {"type": "uniform", "budget": 1}
    ]});
    write(dir.path(), "i.json", &base);
    let v = stdout_json(&robustsub(dir.path(), &["solve-intersection", "i.json"]));
    assert!(v["layers"]
        .as_array()
        .unwrap()
        .iter()
        .all(|l| l.as_array().unwrap().len() <= 1));

    base["constraint"] = json!({"type": "polytope",
        "matroid": {"type": "uniform", "budget": 2},
        "vertices": [[1.0, 0.0], [0.5, 0.5]]});
    write(dir.path(), "d.json", &base);
    let opt = stdout_json(&robustsub(dir.path(), &["oracle", "d.json"]))["value"]
        .as_f64()
        .unwrap();
    let v = stdout_json(&robustsub(dir.path(), &["solve-dro", "d.json"]));
    assert!(v["min_value"].as_f64().unwrap() >= 0.9 * opt - 1e-9);
}
