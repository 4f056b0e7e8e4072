use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lipschitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lipschitz"))
        .args(args)
        .env_remove("APPELL_VERIFY_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lipschitz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classical_suite_passes() {
    let o = lipschitz(&["verify", "--suite", "classical-lipschitz", "--k", "2..6", "--z", "i", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = lines(&o);
    assert_eq!(rows.len(), 6);
    assert!(rows[..5].iter().all(|r| r["pass"] == true && r["identity"] == "classical-lipschitz"));
    assert_eq!(rows[5]["summary"], "classical-lipschitz");
}

#[test]
fn congruence_suite_passes() {
    let o = lipschitz(&["verify", "--suite", "congruences", "--max-n", "14"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = lines(&o);
    let ids: Vec<&str> = rows.iter().filter_map(|r| r["id"].as_str()).collect();
    assert_eq!(ids.iter().filter(|&&id| id == "US1").count(), 7);
    assert_eq!(ids.iter().filter(|&&id| id == "US2").count(), 6);
    assert!(ids.contains(&"UK") && ids.contains(&"CvS"));
    assert_eq!(rows.last().unwrap()["pass"], true);
}

#[test]
fn empty_grid_is_a_configuration_error() {
    let o = lipschitz(&["verify", "--suite", "inversion", "--grid", "empty"]);
    assert_eq!(o.status.code(), Some(2));
    let summary = &lines(&o)[0];
    assert_eq!(summary["pass"], false);
    assert!(summary["error"].as_str().unwrap().contains("empty"));
}

#[test]
fn impossible_tolerance_fails_with_report() {
    let out = temp("impossible.json");
    let o = lipschitz(&["verify", "--suite", "boundary", "--tol", "1e-300", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = std::fs::read_to_string(&out).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["pass"], false);
    assert_eq!(last["records"], 12);
}

#[test]
fn tolerance_from_environment_is_overridden_by_flag() {
    let run = |flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_lipschitz"));
        cmd.args(["verify", "--suite", "boundary", "--n", "-1"]).env("APPELL_VERIFY_TOL", "1e-300");
        if let Some(t) = flag {
            cmd.args(["--tol", t]);
        }
        cmd.output().unwrap().status.code()
    };
    assert_eq!(run(None), Some(1));
    assert_eq!(run(Some("1e-6")), Some(0));
}

#[test]
fn invalid_configurations_exit_two() {
    for args in [
        &["verify", "--suite", "inversion", "--tol", "-1"][..],
        &["verify", "--suite", "lipschitz", "--desc", "nope"],
        &["verify", "--suite", "inversion", "--n", "3..1"],
        &["verify", "--suite", "classical-lipschitz", "--z", "-i"],
        &["verify", "--suite", "boundary", "--n", "1"],
        &["appell", "--desc", "nope"],
        &["eval", "--fn", "delta", "--n", "1"],
        &["formal-group", "--order", "99"],
        &["verify", "--suite", "unknown"],
    ] {
        assert_eq!(lipschitz(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn r_table_for_bernoulli() {
    let o = lipschitz(&["appell", "--desc", "bernoulli", "--max", "6", "--emit", "r-poly"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rs = v["r_polynomials"].as_array().unwrap();
    assert_eq!(rs.len(), 6);
    assert_eq!(rs[3]["coefficients"], serde_json::json!(["1/12", "1/3", "-3/2", "1"]));
    assert_eq!(rs[5]["coefficients"], serde_json::json!(["-7/120", "-13/60", "1/2", "4/3", "-5/2", "1"]));
    assert!(v.get("polynomials").is_none());
}

#[test]
fn a_sequence_polynomials() {
    let o = lipschitz(&["appell", "--desc", "a-seq", "--max", "4", "--emit", "polys", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("kind,n,index,value\n"));
    assert!(text.contains("A,4,0,23/30\n"));
    assert!(text.contains("A,3,0,-1/2\n"));
}

#[test]
fn degree_zero_is_the_constant_one() {
    let o = lipschitz(&["appell", "--desc", "bernoulli", "--max", "0"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["polynomials"], serde_json::json!([{ "n": 0, "coefficients": ["1"], "text": "1" }]));
    assert_eq!(v["r_polynomials"], serde_json::json!([]));
}

#[test]
fn eval_delta_rows() {
    let log2 = &lines(&lipschitz(&["eval", "--fn", "delta", "--n", "-1", "--q", "0.5"]))[0];
    assert!((log2["value_re"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
    let one = &lines(&lipschitz(&["eval", "--fn", "delta", "--n", "0", "--q", "0.5"]))[0];
    assert_eq!(one["value_re"].as_f64(), Some(1.0));
    let o = lipschitz(&["eval", "--fn", "delta", "--n", "1", "--q", "1,0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = lines(&o);
    assert_eq!(rows[0]["error"], "pole at q=1");
    assert_eq!(rows[1]["value_re"].as_f64(), Some(2.0));
}

#[test]
fn eval_over_a_grid_with_descriptor() {
    let o = lipschitz(&["eval", "--fn", "extended-delta", "--desc", "b-seq", "--n", "-2..-1", "--grid", "-0.5:0.5:3,0.25:0.25:1"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = lines(&o);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["label"] == "b-seq" && r.get("error").is_none()));
}

#[test]
fn output_is_independent_of_jobs() {
    let run = |jobs: &str, format: &str| {
        let args = ["verify", "--suite", "all", "--n", "-1..-1", "-K", "2000", "--jobs", jobs, "--format", format];
        let o = lipschitz(&args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        o.stdout
    };
    for format in ["json", "csv"] {
        let one = run("1", format);
        assert_eq!(one, run("2", format));
        assert_eq!(one, run("4", format));
    }
}

#[test]
fn formal_group_output() {
    let o = lipschitz(&["formal-group", "--order", "3", "--bernoulli", "4", "--polys", "--law"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["G"][3]["text"], "-1/3*c2 + 1/2*c1^2");
    assert_eq!(v["bernoulli"][2]["text"], "2/3*c2 - 1/2*c1^2");
    assert_eq!(v["law"].as_array().unwrap().len(), 5);
    assert!(v["bernoulli_poly"].as_array().unwrap().len() >= 15);
}
