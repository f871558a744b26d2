use std::io::Write;
use std::process::{Command, Output, Stdio};

fn multistate(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_multistate"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn reproduce_all_exits_zero() {
    let o = multistate(&["reproduce", "--all"], "");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in multistate::criteria::FIXTURE_NAMES {
        assert!(text.contains(&format!("{name} [PASS]")), "{text}");
    }
}

#[test]
fn reproduce_json_lists_provenance() {
    let o = multistate(&["reproduce", "--fixture", "dim4-counterexample", "--json"], "");
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v[0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["passed"] == true && !c["provenance"].as_str().unwrap().is_empty()));
}

#[test]
fn random_pipes_into_every_reader() {
    let doc = stdout(&multistate(&["random", "--dim", "2", "--count", "4", "--seed", "5"], ""));
    for args in [
        vec!["analyze", "--quantify"],
        vec!["invariant", "--seq", "1,2,3,4"],
        vec!["quantify", "--json"],
        vec!["witness", "--seq", "4,1,2"],
    ] {
        let o = multistate(&args, &doc);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let again = stdout(&multistate(&["random", "--dim", "2", "--count", "4", "--seed", "5"], ""));
    assert_eq!(doc, again);
}

#[test]
fn analyze_is_deterministic() {
    let doc = stdout(&multistate(&["random", "--count", "5", "--seed", "1"], ""));
    let a = multistate(&["analyze", "--quantify", "--json"], &doc);
    let b = multistate(&["analyze", "--quantify", "--json"], &doc);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors() {
    assert_eq!(multistate(&["analyze"], "{\"dim\": 2}").status.code(), Some(2));
    assert_eq!(multistate(&["analyze", "--input", "/nonexistent.json"], "").status.code(), Some(2));
    assert_eq!(multistate(&["reproduce", "--fixture", "missing"], "").status.code(), Some(2));
    let o = multistate(&["analyze"], r#"{"dim":2,"states":[[[[0.5,0],[0,0]],[[0,0],[0.5,0.1]]]]}"#);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("states[0]"));
}
