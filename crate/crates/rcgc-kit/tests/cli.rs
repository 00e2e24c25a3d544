//! The `rcgc-kit` binary: output shape, exit codes, batch mode and the thread cap.

use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rcgc-kit"));
    c.env_remove("RCGC_KIT_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_batch(input: &str, threads: Option<&str>) -> Output {
    let mut c = bin();
    c.arg("--batch")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    if let Some(t) = threads {
        c.env("RCGC_KIT_THREADS", t);
    }
    let mut child = c.spawn().expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn value(v: &Value) -> (f64, f64) {
    (
        v["value"]["re"].as_f64().unwrap(),
        v["value"]["im"].as_f64().unwrap(),
    )
}

const WORKED: [&str; 13] = [
    "wigner-d", "--k", "5/2", "--q", "-1/2", "--qp", "3/2", "--phi", "3pi/2", "--theta", "pi/6",
    "--psi", "5pi/4",
];

#[test]
fn wigner_d_worked_example_as_json() {
    let out = run(&WORKED);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "wigner-d");
    assert_eq!(v["inputs"]["k"], "5/2");
    assert_eq!(v["inputs"]["phi"], "3pi/2");
    let (re, im) = value(&v);
    let r = (13.0 - 3.0 * 3f64.sqrt()) / 32.0;
    assert!((re - r * (PI / 8.0).cos()).abs() < 1e-12);
    assert!((im - r * (PI / 8.0).sin()).abs() < 1e-12);
}

#[test]
fn both_methods_agree_and_oracle_is_reported() {
    let mut args = WORKED.to_vec();
    args.extend(["--method", "hyp", "--oracle"]);
    let v = json(&run(&args));
    let (re, im) = value(&v);
    let (ore, oim) = value(&json(&run(&WORKED)));
    assert!((re - ore).abs() < 1e-12 && (im - oim).abs() < 1e-12);
    assert!(v["oracle"]["abs_err"].as_f64().unwrap() < 1e-12);
}

#[test]
fn sphfun_reports_branch_info() {
    let out = run(&[
        "sphfun",
        "--family",
        "zeta_p",
        "--k",
        "5/2",
        "--q",
        "-1/2",
        "--qp",
        "3/2",
        "--x1",
        "pi/6,pi/4",
        "--x2",
        "pi/3,pi",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let (re, im) = value(&v);
    assert!((re - 0.25 * (5.0 * PI / 8.0).cos()).abs() < 1e-12);
    assert!((im - 0.25 * (5.0 * PI / 8.0).sin()).abs() < 1e-12);
    assert_eq!(v["branch-info"]["branch"]["label"], "O2p");
}

#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["euler", "--x1", "pi/6,pi/4", "--x2", "pi/3,pi"],
        &[
            "cgc", "--j1", "1", "--m1", "1", "--j2", "1", "--m2", "-1", "--j", "0", "--m", "0",
            "--oracle",
        ],
        &[
            "rcgc1", "--l1", "1", "--l2", "1", "--l", "2", "--m1", "0", "--m2", "1", "--m", "1",
            "--x1", "0.3,1", "--x2", "2,4", "--oracle",
        ],
        &[
            "rcgc2", "--l1", "1", "--l2", "1", "--lp", "2", "--l", "1", "--mp", "0", "--m", "1",
            "--x1", "0.3,1", "--x2", "2,4", "--oracle",
        ],
        &[
            "s-integral",
            "--k",
            "1",
            "--q",
            "0",
            "--qp",
            "0",
            "--x1",
            "pi/3,1",
            "--oracle",
        ],
        &["redmat", "--l", "2", "--k", "2", "--lbar", "2", "--oracle"],
        &[
            "coulomb2e",
            "--l",
            "1",
            "--m",
            "0",
            "--lp",
            "1",
            "--mp",
            "0",
        ],
        &["verify", "--suite", "cgc"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json(&out);
        assert_eq!(v["command"], args[0]);
        assert!(
            v["value"]["re"].is_number() && v["value"]["im"].is_number(),
            "{args:?}"
        );
        if let Some(err) = v.get("oracle").and_then(|o| o["abs_err"].as_f64()) {
            assert!(err < 1e-7, "{args:?}: oracle error {err}");
        }
    }
}

#[test]
fn exit_code_one_for_unreadable_input() {
    let mut args = WORKED.to_vec();
    args[8] = "3pie/2";
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--phi"));
    assert_eq!(run(&["wigner-d", "--k", "1"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn exit_code_two_for_domain_errors() {
    let mut args = WORKED.to_vec();
    args[4] = "7/2";
    assert_eq!(run(&args).status.code(), Some(2));
    assert_eq!(
        run(&["euler", "--x1", "0,0", "--x2", "0,0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["euler", "--x1", "4,0", "--x2", "1,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "coulomb2e",
            "--l",
            "1",
            "--m",
            "0",
            "--lp",
            "1",
            "--mp",
            "0",
            "--k-max",
            "-1"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn exit_code_three_for_numeric_errors() {
    let out = run(&[
        "wigner-d", "--k", "400", "--q", "0", "--qp", "0", "--phi", "0", "--theta", "pi/2",
        "--psi", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numeric error"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["wigner-d", "--help"]).status.code(), Some(0));
}

#[test]
fn plain_output_is_two_numbers() {
    let mut args = vec!["--output", "plain"];
    args.extend(WORKED);
    let out = run(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let nums: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(nums.len(), 2);
}

fn request(theta_index: usize) -> String {
    format!(
        r#"{{"command":"wigner-d","params":{{"k":"3","q":"1","qp":"-2","phi":"0.1","theta":"{}","psi":"0.2"}}}}"#,
        0.01 * theta_index as f64
    )
}

#[test]
fn batch_preserves_order_under_parallelism() {
    let lines: Vec<String> = (0..300).map(request).collect();
    let out = run_batch(&lines.join("\n"), Some("4"));
    assert_eq!(out.status.code(), Some(0));
    let results: Vec<Value> = out
        .stdout
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(results.len(), 300);
    for (i, v) in results.iter().enumerate() {
        let theta: f64 = v["inputs"]["theta"].as_str().unwrap().parse().unwrap();
        assert!(
            (theta - 0.01 * i as f64).abs() < 1e-12,
            "line {i} out of order"
        );
    }
}

#[test]
fn batch_matches_single_runs_and_round_trips_inputs() {
    let single = json(&run(&WORKED));
    let line =
        serde_json::json!({ "command": single["command"], "params": single["inputs"] }).to_string();
    let out = run_batch(&line, None);
    assert_eq!(out.status.code(), Some(0));
    let again: Value = serde_json::from_slice(out.stdout.trim_ascii()).unwrap();
    assert_eq!(again, single);
}

#[test]
fn batch_reports_errors_in_place_and_returns_the_worst_code() {
    let input = [
        request(1),
        "not json".to_string(),
        r#"{"command":"wigner-d","params":{"k":"1","q":"2","qp":"0","phi":"0","theta":"0","psi":"0"}}"#.to_string(),
        String::new(),
        request(2),
    ]
    .join("\n");
    let out = run_batch(&input, Some("2"));
    assert_eq!(out.status.code(), Some(2));
    let lines: Vec<Value> = out
        .stdout
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0]["value"].is_object());
    assert_eq!(lines[1]["error"]["code"], 1);
    assert_eq!(lines[2]["error"]["code"], 2);
    assert_eq!(lines[2]["command"], "wigner-d");
    assert!(lines[3]["value"].is_object());
}

#[test]
fn thread_cap_is_validated() {
    assert_eq!(run_batch(&request(1), Some("1")).status.code(), Some(0));
    assert_eq!(run_batch(&request(1), Some("0")).status.code(), Some(1));
    assert_eq!(run_batch(&request(1), Some("many")).status.code(), Some(1));
}
