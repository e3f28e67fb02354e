use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_regen-bounds"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn bounds_json_contains_eq3() {
    let out = run(&["bounds", "-k", "3", "-d", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["k"].as_u64(), v["d"].as_u64()), (Some(3), Some(3)));
    assert_eq!(v["truncated"], false);
    let found = v["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .any(|b| b["c"] == 3 && b["a"] == 4 && b["b"] == 6);
    assert!(found);
}

#[test]
fn bounds_for_one_one_are_cutset_only() {
    let v: serde_json::Value =
        serde_json::from_slice(&run(&["bounds", "-k", "1", "-d", "1", "--format", "json"]).stdout)
            .unwrap();
    let ids: Vec<_> = v["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(ids, ["c1a0b1", "c1a1b0"]);
}

#[test]
fn bounds_for_the_chain_example() {
    let out = stdout(&run(&["bounds", "-k", "6", "-d", "7"]));
    assert!(out.lines().any(|l| l.starts_with("c4a10b43,")));
}

#[test]
fn bounds_evaluation() {
    let out = stdout(&run(&[
        "bounds", "-k", "6", "-d", "7", "--alpha", "5", "--beta", "1", "--format", "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let value = v["evaluation"]["value"].as_str().unwrap();
    let (p, q) = value.split_once('/').unwrap();
    let (p, q): (i64, i64) = (p.parse().unwrap(), q.parse().unwrap());
    assert!(p * 4 <= 93 * q);
}

#[test]
fn infeasible_parameters_exit_two() {
    let out = run(&["bounds", "-k", "4", "-d", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k <= d"));
    assert_eq!(run(&["bounds", "-k", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["bounds", "-k", "3", "-d", "3", "--caps", "0,1,1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn envelope_examples() {
    let out = stdout(&run(&["envelope", "-k", "2", "-d", "3"]));
    assert_eq!(
        out,
        "alpha_over_beta,B_over_beta,active_bound_id\n0,0,c1a2b0\n2,4,c1a1b2\n3,5,c1a0b5\n"
    );
    // the 14B combination is active across 37/13 once every bound is used
    let out = stdout(&run(&["envelope", "-k", "4", "-d", "4"]));
    assert!(out.lines().skip(1).any(|l| l == "19/7,57/7,c14a21b57"));
    assert!(!out
        .lines()
        .skip(1)
        .any(|l| l.split(',').next() == Some("37/13")));
    let out = stdout(&run(&[
        "envelope",
        "-k",
        "4",
        "-d",
        "4",
        "--family",
        "singleton-mixed-ell",
    ]));
    let xs: Vec<_> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(xs, ["0", "1", "3/2", "2", "5/2", "37/13", "4"]);
}

#[test]
fn tradeoff_has_four_ordered_curves() {
    let out = stdout(&run(&["tradeoff", "-k", "6", "-d", "7"]));
    let mut curves: Vec<String> = Vec::new();
    for line in out.lines().skip(1) {
        let name = line.split(',').next().unwrap().to_string();
        if curves.last() != Some(&name) {
            curves.push(name);
        }
    }
    assert_eq!(
        curves,
        [
            "cutset",
            "singleton-fixed-ell",
            "singleton-mixed-ell",
            "all"
        ]
    );
    assert!(!out.contains('.'), "rationals must be exact");
}

#[test]
fn certify_by_id_and_from_file() {
    let out = run(&["certify", "-k", "3", "-d", "3", "--id", "c3a4b6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS c3a4b6"));
    assert_eq!(
        run(&["certify", "-k", "3", "-d", "3", "--id", "c3a4b5"])
            .status
            .code(),
        Some(2)
    );

    let json = run(&["bounds", "-k", "4", "-d", "4", "--format", "json"]).stdout;
    let out = run_with_stdin(&["certify", "--input", "-"], &json);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));

    // claim a stronger bound than the certificate supports
    let mut v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    let entry = v["bounds"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|b| b["id"] == "c14a21b57")
        .unwrap();
    entry["b"] = serde_json::json!(56);
    let out = run_with_stdin(
        &["certify", "--input", "-", "--id", "c14a21b56"],
        &serde_json::to_vec(&v).unwrap(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("FAIL"));
}

#[test]
fn construct_then_verify() {
    for args in [
        &["construct", "--family", "congruence", "-d", "3"][..],
        &["construct", "--builtin", "433"],
        &["construct", "--builtin", "423"],
    ] {
        let spec = run(args);
        assert_eq!(spec.status.code(), Some(0));
        let out = run_with_stdin(&["verify"], &spec.stdout);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).ends_with("PASS\n"));
    }
}

#[test]
fn corrupted_spec_fails_with_named_check() {
    let spec = run(&["construct", "--family", "congruence", "-d", "3"]).stdout;
    let mut v: serde_json::Value = serde_json::from_slice(&spec).unwrap();
    let row = v["generator"][0].as_str().unwrap().to_string();
    let flipped: String = row
        .chars()
        .enumerate()
        .map(|(i, c)| {
            if i == 0 {
                if c == '0' {
                    '1'
                } else {
                    '0'
                }
            } else {
                c
            }
        })
        .collect();
    v["generator"][0] = serde_json::Value::String(flipped);
    let out = run_with_stdin(&["verify", "-"], &serde_json::to_vec(&v).unwrap());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).lines().any(|l| l.contains(": FAIL")));
}

#[test]
fn unparsable_spec_exits_two() {
    assert_eq!(
        run_with_stdin(&["verify"], b"{not json").status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "/nonexistent/spec.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_file_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.csv");
    let out = run(&[
        "envelope",
        "-k",
        "2",
        "-d",
        "3",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("alpha_over_beta,"));
    let bad = dir.path().join("bad.csv");
    assert_eq!(
        run(&[
            "envelope",
            "-k",
            "3",
            "-d",
            "2",
            "-o",
            bad.to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
    assert!(!bad.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["bounds", "-k", "5", "-d", "6", "--format", "json"];
    let one = bin()
        .args(args)
        .env("REGEN_BOUNDS_THREADS", "1")
        .output()
        .unwrap();
    let four = bin()
        .args(args)
        .env("REGEN_BOUNDS_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let bad = bin()
        .args(args)
        .env("REGEN_BOUNDS_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
