//! Drives the command-line layer in-process: writes a document, analyzes it and reads the
//! JSON report back. Pass a path to analyze your own document instead.

use std::io::Cursor;

use multistate::cli::{self, MultiStateDocument};

fn main() {
    let doc = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable input"),
        None => serde_json::to_string(&cli::cmd_random(2, 4, false, 99).unwrap()).unwrap(),
    };
    let parsed = MultiStateDocument::parse(&doc).expect("valid document");
    println!("{} states of dimension {}", parsed.states.len(), parsed.dim);

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(["multistate", "analyze", "--quantify", "--json"], &mut Cursor::new(doc), &mut out, &mut err);
    if code != cli::EXIT_OK {
        eprintln!("{}", String::from_utf8_lossy(&err));
        std::process::exit(code);
    }
    let report: serde_json::Value = serde_json::from_slice(&out).unwrap();
    for v in report["verdicts"].as_array().unwrap() {
        println!("{} -> {} ({})", v["property"], v["decision"], v["source"]);
    }
    for q in report["quantifiers"].as_array().unwrap() {
        println!("{} = {}", q["name"], q["value"]);
    }
}
