#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> PathBuf {
    manifest_dir().join("fixtures").join(name)
}

/// Runs the binary from the crate directory so fixture paths stay relative.
pub fn depsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depsub"))
        .current_dir(manifest_dir())
        .args(args)
        .output()
        .expect("spawn depsub")
}

pub fn stdout_of(args: &[&str]) -> String {
    let out = depsub(args);
    assert!(
        out.status.success(),
        "depsub {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

const RISING: [&str; 4] = [
    "--input",
    "fixtures/rising-rates-instrument.json",
    "--scenario",
    "fixtures/rising-rates-scenario.json",
];

/// Every golden: a file under tests/golden and the arguments producing it,
/// without `--format`.
pub fn goldens() -> Vec<(&'static str, Vec<&'static str>)> {
    let with = |cmd: &'static str, rest: &[&'static str]| {
        let mut v = vec![cmd];
        v.extend_from_slice(rest);
        v
    };
    vec![
        ("path", with("path", &RISING)),
        ("fitness", with("fitness", &RISING)),
        ("price-12", with("price", &["--input", "fixtures/rising-rates-instrument.json", "--rate", "12%"])),
        ("price-8", with("price", &["--input", "fixtures/rising-rates-instrument.json", "--rate", "8%"])),
        (
            "yield",
            with("yield", &["--input", "fixtures/rising-rates-instrument.json", "--price", "11566298682.89"]),
        ),
        ("peace", vec!["peace"]),
        ("classify-peace", with("classify", &["--input", "fixtures/peace-ledger.json"])),
        ("classify-twenty", with("classify", &["--input", "fixtures/twenty-lender-ledger.json"])),
        (
            "tax-peace",
            with(
                "tax",
                &["--input", "fixtures/peace-ledger.json", "--tax-rules", "fixtures/tax-rules.json", "--regular-rate", "30%"],
            ),
        ),
        ("curve-history", vec!["curve"]),
        ("curve-sample", with("curve", &["--input", "fixtures/sample-curve.csv", "--at", "3", "--at", "7.5"])),
    ]
}

pub const FORMATS: [(&str, &str); 3] = [("table", "txt"), ("csv", "csv"), ("json", "json")];

pub fn golden_args<'a>(args: &[&'a str], format: &'a str) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.extend(["--format", format]);
    v
}
