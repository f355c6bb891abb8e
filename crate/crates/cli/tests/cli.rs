use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_confstab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn ok_json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let o = run(&full, None);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stdout));
    json_of(&o)
}

#[test]
fn documented_examples() {
    let v = ok_json(&["oracle", "--dim", "2", "--chi", "2", "--char", "3", "--k", "4", "--j", "7"]);
    assert_eq!(v["iso_guaranteed"], true);

    let o = run(&["dims", "--n", "2", "--p", "3", "--k", "4", "--imax", "2"], None);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "k=4: 1 1 0");
    let v = ok_json(&["dims", "--n", "2", "--p", "3", "--k", "4", "--imax", "2"]);
    assert_eq!(v["rows"][0]["dims"], serde_json::json!([1, 1, 0]));

    let o = run(&["s2-h1", "--k", "3"], None);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "4");
}

#[test]
fn other_commands() {
    assert_eq!(ok_json(&["s2-modp", "--k", "4", "--p", "3"]), 1);
    assert_eq!(ok_json(&["period", "--chi", "9", "--p", "3"])["period"], "27");
    assert_eq!(ok_json(&["nsh", "--chi", "7", "--p", "3"])["bound"], 1);
    assert_eq!(ok_json(&["obstruction", "--chi", "2", "--r", "3", "--p", "2"])["commutes"], true);
    assert_eq!(ok_json(&["dichotomy", "--n", "4", "--p", "3", "--k", "3", "--j", "4"])["equal"], false);
    assert_eq!(ok_json(&["pants", "--k", "6", "--j", "2", "--samples", "64"])["holds"], true);
    assert_eq!(ok_json(&["lambda", "--mu", "k/2", "--n", "2", "--r", "2", "--k", "10"])["lambda"], 5);
    assert_eq!(ok_json(&["mu", "--coeff", "Q", "--n", "2"])["display"], "k-1");
    let inc = ok_json(&["inceptive", "--n", "3", "--p", "3", "--k", "6"]);
    assert_eq!(inc["degree"], 7);
    let audit = ok_json(&["table-audit", "--p", "3", "--n", "2", "--k", "2"]);
    assert_eq!(audit["status"], "MATCH");
    let w = ok_json(&["zigzag", "--k", "3", "--j", "7", "--chi", "-2", "--primes", "3"]);
    assert_eq!(w["k"], 3);
    let chain = ok_json(&["witness", "--dim", "2", "--chi", "2", "--p", "3", "--k", "4", "--j", "7"]);
    assert!(chain.is_array());
    let none = ok_json(&["witness", "--dim", "2", "--chi", "2", "--p", "3", "--k", "4", "--j", "5"]);
    assert!(none.is_null());
}

#[test]
fn loop_build_round_trips() {
    let cases: &[(&[&str], (Option<i64>, i64))] = &[
        (&["--kind", "delta", "--k", "5", "--j", "2"], (Some(1), 4)),
        (&["--kind", "pi", "--k", "4"], (Some(0), 1)),
        (&["--kind", "tau", "--k", "5", "--j", "3"], (Some(0), 6)),
        (&["--kind", "sigma", "--k", "3", "--d", "-2"], (Some(3), -12)),
        (&["--kind", "delta-hat", "--k", "4"], (Some(4), 12)),
        (&["--kind", "tau-hat", "--k", "4"], (Some(0), 12)),
        (&["--kind", "full-twist", "--k", "3"], (None, 6)),
        (&["--kind", "connecting", "--k", "5"], (None, 8)),
    ];
    for (args, (a, b)) in cases {
        let mut full = vec!["loop-build", "--json", "--samples", "64"];
        full.extend_from_slice(args);
        let built = run(&full, None);
        assert!(built.status.success(), "{args:?}");
        let text = String::from_utf8(built.stdout).unwrap();
        let class = run(&["loop-class", "--json"], Some(&text));
        assert!(class.status.success(), "{args:?}: {}", String::from_utf8_lossy(&class.stdout));
        let v = json_of(&class);
        assert_eq!(v["b"], *b, "{args:?}");
        assert_eq!(v.get("a").and_then(Value::as_i64), *a, "{args:?}");
    }
}

#[test]
fn loop_class_from_file() {
    let built = run(&["loop-build", "--kind", "pi", "--k", "3", "--samples", "16"], None);
    let path = std::env::temp_dir().join(format!("confstab-loop-{}.json", std::process::id()));
    std::fs::write(&path, &built.stdout).unwrap();
    let o = run(&["loop-class", "--file", path.to_str().unwrap()], None);
    std::fs::remove_file(&path).ok();
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "0·Δ0 + 1·π");
}

#[test]
fn output_is_deterministic() {
    let args = ["witness", "--dim", "4", "--chi", "6", "--p", "5", "--k", "12", "--j", "37", "--json"];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.stdout, b.stdout);
    let args = ["loop-build", "--kind", "sigma", "--k", "4", "--d", "3", "--json"];
    assert_eq!(run(&args, None).stdout, run(&args, None).stdout);
}

const COLLIDING: &str = r#"{"k":2,"punctured":false,"trajectories":[[[[0,1],[0,1]],[[2,1],[0,1]],[[0,1],[0,1]]],[[[1,1],[0,1]]]]}"#;
const OPEN: &str = r#"{"k":1,"punctured":false,"trajectories":[[[[0,1],[0,1]],[[2,1],[0,1]]]]}"#;
const WRONG_K: &str = r#"{"k":2,"punctured":false,"trajectories":[[[[0,1],[0,1]]]]}"#;
const ZERO_DEN: &str = r#"{"k":1,"punctured":false,"trajectories":[[[[0,0],[0,1]]]]}"#;
const EMPTY_STRAND: &str = r#"{"k":1,"punctured":true,"trajectories":[[]]}"#;

#[test]
fn malformed_inputs_follow_the_exit_contract() {
    let parse_errors: &[(&[&str], Option<&str>)] = &[
        (&[], None),
        (&["frobnicate"], None),
        (&["dims", "--n", "2", "--p", "3", "--imax", "2"], None),
        (&["dims", "--n", "two", "--p", "3", "--k", "4", "--imax", "2"], None),
        (&["dims", "--n", "2", "--p", "-3", "--k", "4", "--imax", "2"], None),
        (&["oracle", "--dim", "2", "--chi", "2", "--k", "4", "--j", "7"], None),
        (&["oracle", "--dim", "2", "--chi", "2", "--char", "3", "--coeff", "Q", "--k", "4", "--j", "7"], None),
        (&["oracle", "--dim", "2", "--chi", "abc", "--char", "3", "--k", "4", "--j", "7"], None),
        (&["oracle", "--dim", "2", "--chi", "2", "--coeff", "R", "--k", "4", "--j", "7"], None),
        (&["oracle", "--dim", "2", "--chi", "2", "--char", "3", "--k", "4", "--j", "7", "--mu", "k"], None),
        (&["lambda", "--mu", "banana", "--n", "2", "--r", "2", "--k", "5"], None),
        (&["zigzag", "--k", "3", "--j", "7", "--chi", "2", "--primes", "4,x"], None),
        (&["loop-build", "--kind", "hexagon", "--k", "3"], None),
        (&["loop-build", "--kind", "delta", "--k", "3"], None),
        (&["s2-h1", "--k", "-1"], None),
        (&["loop-class"], Some("{bad")),
        (&["loop-class"], Some(WRONG_K)),
        (&["loop-class"], Some(ZERO_DEN)),
        (&["loop-class"], Some(EMPTY_STRAND)),
        (&["loop-class", "--file", "/nonexistent/loop.json"], None),
    ];
    let domain_errors: &[(&[&str], Option<&str>)] = &[
        (&["dims", "--n", "2", "--p", "4", "--k", "4", "--imax", "2"], None),
        (&["s2-h1", "--k", "0"], None),
        (&["s2-modp", "--k", "1", "--p", "3"], None),
        (&["oracle", "--dim", "3", "--chi", "2", "--char", "3", "--k", "1", "--j", "2"], None),
        (&["oracle", "--dim", "2", "--chi", "2", "--char", "4", "--k", "1", "--j", "2"], None),
        (&["oracle", "--dim", "2", "--chi", "2", "--char", "3", "--k", "-1", "--j", "2"], None),
        (&["oracle", "--dim", "2", "--chi", "3", "--coeff", "Z_(2)", "--k", "1", "--j", "2"], None),
        (&["oracle", "--dim", "2", "--chi", "2", "--open", "--char", "3", "--k", "1", "--j", "2"], None),
        (&["loop-build", "--kind", "delta", "--k", "3", "--j", "3"], None),
        (&["pants", "--k", "3", "--j", "2"], None),
        (&["loop-class"], Some(COLLIDING)),
        (&["loop-class"], Some(OPEN)),
        (&["obstruction", "--chi", "2", "--r", "1"], None),
        (&["dichotomy", "--n", "3", "--p", "3", "--k", "4", "--j", "7"], None),
        (&["dichotomy", "--n", "4", "--p", "3", "--k", "4", "--j", "7", "--range", "k/2"], None),
        (&["witness", "--dim", "3", "--chi", "0", "--p", "3", "--k", "1", "--j", "2"], None),
        (&["nsh", "--chi", "2", "--p", "6"], None),
        (&["table-audit", "--p", "3", "--n", "3", "--k", "0"], None),
    ];
    assert!(parse_errors.len() + domain_errors.len() >= 30);
    for (expected, corpus) in [(2, parse_errors), (1, domain_errors)] {
        for (args, stdin) in corpus {
            let o = run(args, *stdin);
            assert_eq!(o.status.code(), Some(expected), "{args:?} {stdin:?}");
            let v = json_of(&o);
            assert!(v["error"].is_string() && v["detail"].is_string(), "{args:?}: {v}");
        }
    }
    let v = json_of(&run(&["loop-class"], Some(COLLIDING)));
    assert_eq!(v["error"], "collision");
}
