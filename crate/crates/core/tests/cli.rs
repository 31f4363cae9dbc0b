mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mmot::costs::CostSpec;
use mmot::experiments::{diagonal_plan, indicator_cost, rotation_plan, Alpha};
use mmot::monotonicity::Certificate;
use mmot::{DiscreteCoupling, MotInstance, Objective, Rational};
use serde_json::{json, Value};
use tempfile::TempDir;

use common::*;

fn mmot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmot")).args(args).output().unwrap()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn shift_instance() -> Value {
    let mu = uniform_measure(vec![mmot::Point::scalar(0.0), mmot::Point::scalar(0.5)]);
    let nu = uniform_measure(vec![mmot::Point::scalar(0.5), mmot::Point::scalar(1.0)]);
    MotInstance::new(vec![mu, nu], CostSpec::power_distance(2.0).unwrap(), Objective::Sum)
        .unwrap()
        .to_json()
}

#[test]
fn solve_writes_the_solution() {
    let dir = TempDir::new().unwrap();
    let inst = write_json(dir.path(), "inst.json", &shift_instance());
    let out = dir.path().join("sol.json");
    let r = mmot(&["solve", "--instance", s(&inst), "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let sol = read_json(&out);
    assert_eq!(sol["value"], "1/4");
    assert_eq!(sol["status"], "optimal");
    assert_eq!(sol["atoms"].as_array().unwrap().len(), 2);

    let r = mmot(&["solve", "--instance", s(&inst), "--mode", "float", "--objective", "max"]);
    assert_eq!(r.status.code(), Some(0));
    let sol: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(sol["mode"], "float");
    assert_eq!(sol["value"], 0.25);
}

#[test]
fn guard_refusal_exits_three() {
    let dir = TempDir::new().unwrap();
    let inst = write_json(dir.path(), "inst.json", &shift_instance());
    let r = mmot(&["solve", "--instance", s(&inst), "--guard-cells", "3"]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("guard"));

    let r = mmot(&[
        "counterexample",
        "--alpha",
        "1/3",
        "--m",
        "30",
        "--kmax",
        "3",
        "--guard-evals",
        "10",
    ]);
    assert_eq!(r.status.code(), Some(3));
}

#[test]
fn parse_errors_name_file_and_offset() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("broken.json");
    fs::write(&p, "{\"marginals\": [1, }").unwrap();
    let r = mmot(&["solve", "--instance", s(&p)]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("broken.json"), "{err}");
    assert!(err.contains("byte 18"), "{err}");

    let r = mmot(&["solve", "--instance", s(&dir.path().join("missing.json"))]);
    assert_eq!(r.status.code(), Some(2));
    assert_eq!(mmot(&["solve"]).status.code(), Some(2));
    assert_eq!(mmot(&["counterexample", "--alpha", "pi"]).status.code(), Some(2));
}

#[test]
fn irrational_counterexample_passes() {
    let r = mmot(&["counterexample", "--alpha", "sqrt2m1", "--m", "30", "--kmax", "4"]);
    assert_eq!(r.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["certificate"], Value::Null);
    assert_eq!(v["rotation_sup"], "2/1");
    assert_eq!(v["identity_sup"], "1/1");
    assert_eq!(v["expectation_met"], true);
}

#[test]
fn icm_certificate_on_third_rotation_revalidates() {
    let dir = TempDir::new().unwrap();
    let plan = rotation_plan::<Rational>(Alpha::rational(1, 3).unwrap(), 30).unwrap();
    let plan_path = write_json(dir.path(), "rotation.json", &plan.to_json());
    let cost_path = write_json(dir.path(), "cost.json", &indicator_cost().to_json());
    let out = dir.path().join("cert.json");
    let r = mmot(&[
        "check-icm",
        "--plan",
        s(&plan_path),
        "--cost",
        s(&cost_path),
        "--kmax",
        "3",
        "--out",
        s(&out),
    ]);
    assert_eq!(r.status.code(), Some(1));
    let v = read_json(&out);
    assert_eq!(v["certificate"]["k"], 3);
    assert_eq!(v["certificate"]["before"], "2/1");
    assert_eq!(v["certificate"]["after"], "1/1");
    let cert = Certificate::<Rational>::from_json(&v["certificate"]).unwrap();
    assert!(cert.verify(&indicator_cost()).unwrap());

    // a two-cycle already beats the wrap-around under the distance cost
    let r = mmot(&[
        "check-cm",
        "--plan",
        s(&plan_path),
        "--cost",
        r#"{"kind": "power_distance", "p": 1}"#,
        "--kmax",
        "2",
    ]);
    assert_eq!(r.status.code(), Some(1));
    let r = mmot(&[
        "check-icm",
        "--plan",
        s(&plan_path),
        "--cost",
        s(&cost_path),
        "--kmax",
        "2",
    ]);
    assert_eq!(r.status.code(), Some(0));
}

#[test]
fn audit_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let plan = write_json(
        dir.path(),
        "diag.json",
        &diagonal_plan::<Rational>(8).unwrap().to_json(),
    );
    let cost = r#"{"kind": "power_distance", "p": 2}"#;
    let run = |seed: &str| {
        let r = mmot(&[
            "audit-finite",
            "--plan",
            s(&plan),
            "--cost",
            cost,
            "--trials",
            "10",
            "--lmax",
            "3",
            "--seed",
            seed,
        ]);
        assert_eq!(r.status.code(), Some(0));
        r.stdout
    };
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));

    // the anti-diagonal loses to the identity on two-atom submeasures
    let tuples = (0..4)
        .map(|i| {
            vec![
                mmot::Point::scalar(i as f64 / 4.0),
                mmot::Point::scalar(0.75 - i as f64 / 4.0),
            ]
        })
        .collect();
    let anti = DiscreteCoupling::<Rational>::uniform(vec![unit(), unit()], tuples).unwrap();
    let anti = write_json(dir.path(), "anti.json", &anti.to_json());
    let r = mmot(&[
        "audit-finite",
        "--plan",
        s(&anti),
        "--cost",
        cost,
        "--trials",
        "5",
        "--lmax",
        "2",
    ]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn rationalize_two_float_plans() {
    let dir = TempDir::new().unwrap();
    let t = |x: f64, y: f64| vec![vec![x], vec![y]];
    let spaces = json!([{"dim": 1, "bounds": [[0, 1]]}, {"dim": 1, "bounds": [[0, 1]]}]);
    let w = 1.0 / std::f64::consts::PI;
    let a = json!({"spaces": spaces, "mode": "float", "atoms": [
        {"tuple": t(0.0, 0.0), "weight": w}, {"tuple": t(1.0, 1.0), "weight": 1.0 - w}]});
    let b = json!({"spaces": spaces, "mode": "float", "atoms": [
        {"tuple": t(0.0, 0.0), "weight": w / 2.0}, {"tuple": t(0.0, 1.0), "weight": w / 2.0},
        {"tuple": t(1.0, 0.0), "weight": w / 2.0}, {"tuple": t(1.0, 1.0), "weight": 1.0 - 1.5 * w}]});
    let pa = write_json(dir.path(), "a.json", &a);
    let pb = write_json(dir.path(), "b.json", &b);
    let r = mmot(&["rationalize", "--plan", s(&pa), "--plan", s(&pb), "--eps", "1/1000"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    let first = DiscreteCoupling::<Rational>::from_json(&v["first"]).unwrap();
    let second = DiscreteCoupling::<Rational>::from_json(&v["second"]).unwrap();
    assert_eq!(first.marginals().unwrap(), second.marginals().unwrap());

    let r = mmot(&["rationalize", "--plan", s(&pa)]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn discretize_writes_partitions_and_report() {
    let dir = TempDir::new().unwrap();
    let plan = write_json(
        dir.path(),
        "diag.json",
        &diagonal_plan::<Rational>(8).unwrap().to_json(),
    );
    let report = dir.path().join("report.csv");
    let r = mmot(&[
        "discretize",
        "--plan",
        s(&plan),
        "--levels",
        "1,2",
        "--cost",
        r#"{"kind": "power_distance", "p": 2}"#,
        "--report",
        s(&report),
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
    let csv = fs::read_to_string(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,delta_n,discrepancy,objective,epsilon_envelope"));
    assert_eq!(lines.count(), 2);

    let r = mmot(&["discretize", "--plan", s(&plan), "--report", s(&report)]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn gamma_config_verdicts_and_determinism() {
    let dir = TempDir::new().unwrap();
    let diag = write_json(
        dir.path(),
        "diag.json",
        &diagonal_plan::<Rational>(8).unwrap().to_json(),
    );
    let config = write_json(
        dir.path(),
        "experiment.json",
        &json!({
            "plan": "diag.json",
            "cost": {"kind": "power_distance", "p": 2},
            "objective": "sum",
            "levels": [1, 2, 3],
            "k_max": 3,
            "analytic": 0.0,
            "trials": 10,
        }),
    );
    let csv = dir.path().join("gamma.csv");
    let run = || mmot(&["gamma", "--config", s(&config), "--report", s(&csv)]);
    let first = run();
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 4);
    assert_eq!(run().stdout, first.stdout);

    // the irrational rotation is ICM but misses the analytic optimum 1
    let rot = write_json(
        dir.path(),
        "rot.json",
        &rotation_plan::<Rational>(Alpha::sqrt2m1(), 12).unwrap().to_json(),
    );
    let cost = serde_json::to_string(&indicator_cost().to_json()).unwrap();
    let r = mmot(&[
        "gamma",
        "--plan",
        s(&rot),
        "--cost",
        &cost,
        "--objective",
        "max",
        "--levels",
        "1,2",
        "--kmax",
        "3",
        "--analytic",
        "1",
        "--trials",
        "5",
    ]);
    assert_eq!(r.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["verdict"], "FAIL");
    assert_eq!(v["failed_stage"]["stage"], 3);

    // without --kmax only the experiment runs; a tight guard truncates it
    let r = mmot(&[
        "gamma",
        "--plan",
        s(&diag),
        "--cost",
        r#"{"kind": "power_distance", "p": 2}"#,
        "--guard-cells",
        "100",
    ]);
    assert_eq!(r.status.code(), Some(0));
    let big = write_json(
        dir.path(),
        "big.json",
        &diagonal_plan::<Rational>(16).unwrap().to_json(),
    );
    let r = mmot(&[
        "gamma",
        "--plan",
        s(&big),
        "--cost",
        r#"{"kind": "power_distance", "p": 2}"#,
        "--guard-cells",
        "100",
    ]);
    assert_eq!(r.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["status"]["kind"], "partial");
}
