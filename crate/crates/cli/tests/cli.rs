use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn coordlab(args: &[&str]) -> Output {
    coordlab_env(args, &[])
}

fn coordlab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coordlab"));
    cmd.args(args).env_remove("COORDLAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn eval_single_job_costs_its_time() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "one.json",
        r#"{"m": 2, "n": 1, "proc": [["5/2", "3"]]}"#,
    );
    let out = coordlab(&[
        "eval",
        "--instance",
        &inst,
        "--policy",
        "spt",
        "--profile",
        "0",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["pow_costs"], serde_json::json!(["5/2"]));
    assert_eq!(v["costs_approx"][0], 2.5);
}

#[test]
fn eval_equi_bundle_group_costs() {
    let out = coordlab(&["eval", "--gen", "lb-equi:3", "--policy", "equi"]);
    assert!(out.status.success());
    let costs: Vec<String> = json(&out)["pow_costs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().to_string())
        .collect();
    // groups of 4, 4 and 1 jobs
    assert_eq!(costs, ["1", "1", "1", "1", "3/2", "3/2", "3/2", "3/2", "2"]);
}

#[test]
fn eval_balance_two_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "two.json",
        r#"{"m": 2, "n": 2, "proc": [[1, 2], [2, 3]]}"#,
    );
    let out = coordlab(&[
        "eval",
        "--instance",
        &inst,
        "--policy",
        "balance",
        "--k",
        "1",
        "--profile",
        "0,0",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["pow_costs"], serde_json::json!(["1", "4"]));
}

#[test]
fn eval_csv_columns() {
    let out = coordlab(&[
        "eval",
        "--gen",
        "lb-equi:2",
        "--policy",
        "spt",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("job,machine,pow_cost,cost_approx"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn poa_identical_machines_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "id.json",
        r#"{"m": 2, "n": 2, "proc": [[1, 1], [1, 1]]}"#,
    );
    let out = coordlab(&[
        "poa",
        "--instance",
        &inst,
        "--policy",
        "spt",
        "--objective",
        "lk",
        "--k",
        "2",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["poa"]["ratio_pow"], "1");
    assert_eq!(v["poa"]["ratio_approx"], 1.0);
}

#[test]
fn verify_suite_passes() {
    let out = coordlab(&["verify", "bernoulli", "--k", "5", "--samples", "3000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["lemma"], "bernoulli");
    assert_eq!(v[0]["violations"], 0);
}

#[test]
fn verify_nash_reports_violation() {
    let ok = coordlab(&["verify", "nash", "--gen", "lb-equi:4", "--policy", "equi"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["is_nash"], true);
    let bad = coordlab(&["verify", "nash", "--gen", "lb-spt:3", "--policy", "spt"]);
    assert_eq!(bad.status.code(), Some(4));
    assert_eq!(json(&bad)["witness"]["new_pow"], "3/4");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(
        dir.path(),
        "bad.json",
        r#"{"m": 1, "n": 1, "proc": [["1/0"]]}"#,
    );
    let cases: [(&[&str], i32); 7] = [
        (
            &[
                "eval",
                "--instance",
                &broken,
                "--policy",
                "spt",
                "--profile",
                "0",
            ],
            2,
        ),
        (&["eval", "--gen", "lb-equi:3", "--policy", "fifo"], 2),
        (
            &[
                "eval",
                "--gen",
                "lb-equi:3",
                "--policy",
                "spt",
                "--profile",
                "0,0",
            ],
            2,
        ),
        (&["gen", "--gen", "rand:2,2"], 2),
        (&["verify", "lemma9"], 2),
        (&["poa", "--gen", "rand:30,2,9", "--policy", "spt"], 3),
        (
            &[
                "poa",
                "--gen",
                "rand:4,2,9",
                "--policy",
                "spt",
                "--budget",
                "10",
            ],
            3,
        ),
    ];
    for (args, code) in cases {
        let out = coordlab(args);
        assert_eq!(
            out.status.code(),
            Some(code),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(
        coordlab_env(
            &["gen", "--gen", "rand:2,2,3"],
            &[("COORDLAB_THREADS", "zero")]
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn gen_round_trips_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let out = coordlab(&["gen", "--gen", "rand:5,3,9", "--seed", "4", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let out = coordlab(&[
        "eval",
        "--instance",
        p,
        "--policy",
        "ccoord",
        "--k",
        "2",
        "--profile",
        "0,1,2,0,1",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["pow_costs"].as_array().unwrap().len(), 5);
}

#[test]
fn dynamics_converges_and_writes_csv() {
    let out = coordlab(&[
        "dynamics",
        "--gen",
        "rand:6,3,9",
        "--policy",
        "balance",
        "--k",
        "2",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["status"], "converged");
    let out = coordlab(&[
        "dynamics",
        "--gen",
        "rand:6,3,9",
        "--policy",
        "spt",
        "--format",
        "csv",
        "--rule",
        "random",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("step,mover,from,to,pow_cost_before,pow_cost_after,potential_key_hash\n")
    );
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &[
            "poa",
            "--gen",
            "rand:8,3,9",
            "--policy",
            "equi",
            "--seed",
            "2",
        ],
        &[
            "dynamics",
            "--gen",
            "rand:8,3,9",
            "--policy",
            "spt",
            "--rule",
            "random",
            "--seed",
            "5",
        ],
        &[
            "verify",
            "smooth-spt",
            "--k",
            "3",
            "--samples",
            "5000",
            "--seed",
            "9",
        ],
        &[
            "verify",
            "all",
            "--k",
            "2",
            "--samples",
            "1500",
            "--seed",
            "1",
            "--format",
            "csv",
        ],
    ];
    for (idx, args) in runs.iter().enumerate() {
        let mut files = Vec::new();
        for threads in ["1", "3"] {
            let path = dir.path().join(format!("{idx}-{threads}.out"));
            let mut full: Vec<&str> = args.to_vec();
            let p = path.to_str().unwrap().to_string();
            full.extend(["--out", &p]);
            let out = coordlab_env(&full, &[("COORDLAB_THREADS", threads)]);
            assert!(out.status.success(), "{args:?}");
            files.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(files[0], files[1], "{args:?}");
    }
}
