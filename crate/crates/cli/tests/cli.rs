use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensbordant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (value, out.status.code().unwrap())
}

#[test]
fn changemaker_check_exit_codes() {
    let (v, code) = json(&["changemaker", "check", "[3,1]"]);
    assert_eq!(v, serde_json::json!({ "changemaker": false }));
    assert_eq!(code, 1);
    let (v, code) = json(&["changemaker", "check", "[2,1,1]"]);
    assert_eq!(v["changemaker"], true);
    assert_eq!(v["p"], 6);
    assert_eq!(code, 0);
}

#[test]
fn count_plans_and_hj() {
    assert_eq!(json(&["coin", "count-plans", "100"]).0["count"], 157452);
    assert_eq!(
        json(&["lattice", "hj", "7", "2"]).0["expansion"],
        serde_json::json!([4, 2])
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["coin", "count-plans"]).status.code(), Some(2));
    assert_eq!(
        run(&["coin", "t-sigma", "[3,1]", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["scan", "--torus", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["lattice", "realize", "missing-file.json"])
            .status
            .code(),
        Some(2)
    );
    let out = run(&[
        "surgery",
        "reconstruct",
        "--v",
        "[1,0]",
        "--r",
        "1",
        "--parity",
        "odd",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn emitted_json_is_accepted_back() {
    let (torus, _) = json(&["knot", "torus", "2", "3"]);
    let dir = std::env::temp_dir().join(format!("lensbordant-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let v_path = dir.join("v.json");
    std::fs::write(&v_path, torus.to_string()).unwrap();
    let v_arg = v_path.to_str().unwrap();

    let (rec, code) = json(&[
        "surgery",
        "reconstruct",
        "--v",
        v_arg,
        "--r",
        "2",
        "--parity",
        "even",
    ]);
    assert_eq!(code, 0);
    assert_eq!(rec["candidates"][0]["sigma"], serde_json::json!([1, 1]));

    let (real, code) = json(&["lattice", "realize", "[2,1]"]);
    assert_eq!(code, 0);
    let sigma_path = dir.join("sigma.json");
    std::fs::write(&sigma_path, real["sigma"].to_string()).unwrap();
    let (again, _) = json(&[
        "coin",
        "v-sigma",
        sigma_path.to_str().unwrap(),
        "--upto",
        "3",
    ]);
    assert_eq!(again["sigma"], serde_json::json!([2, 1]));

    let (e8, code) = json(&[
        "e8",
        "check",
        "--s",
        "[\"1/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\"]",
        "--sigma",
        "[1,1]",
    ]);
    assert_eq!(code, 0);
    let tau_path = dir.join("tau.json");
    std::fs::write(&tau_path, e8["tau"].to_string()).unwrap();
    let tau_arg = tau_path.to_str().unwrap();
    let (e8_again, _) = json(&["e8", "check", "--s", tau_arg, "--sigma", tau_arg]);
    assert_eq!(e8_again, e8);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn json_is_stable_across_thread_counts() {
    let args = ["scan", "--torus", "2,5", "--r-max", "3", "--p-max", "13"];
    let one = run(&[&["--json", "--threads", "1"][..], &args].concat());
    let many = run(&[&["--json", "--threads", "4"][..], &args].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn e8_and_family_commands() {
    let (v, code) = json(&["e8", "check", "--sigma", "[3,1]"]);
    assert_eq!((v["e8_changemaker"].clone(), code), (Value::Bool(false), 1));
    let (v, _) = json(&["e8", "classify", "--genus", "3", "--r", "1", "--p", "5"]);
    assert_eq!(v["class"], "s3_realized");
    let (v, code) = json(&["surgery", "family", "verify", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["t_295"], 625);
}

#[test]
fn text_output_is_the_default() {
    let out = run(&["lattice", "realize", "[1,1,1]"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("L(3, 2)"), "{text}");
}
