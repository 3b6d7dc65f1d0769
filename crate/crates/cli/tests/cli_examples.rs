//! Runs the documented command lines and compares their JSON output with the
//! files in `tests/expected/`. `timing_ms` is removed before comparison.
//! Set `POLYMAP_BLESS=1` to rewrite the expected files.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

struct Example {
    name: &'static str,
    args: &'static [&'static str],
    exit: i32,
}

const EXAMPLES: &[Example] = &[
    Example { name: "classify_2x", args: &["classify", "--map", "vars x; f1 = 2*x", "--prime-bound", "20"], exit: 0 },
    Example {
        name: "classify_triangular",
        args: &["classify", "--map", "vars x, y; f1 = x + y^2; f2 = y", "--prime-bound", "7"],
        exit: 0,
    },
    Example {
        name: "invert_triangular",
        args: &["invert", "--map", "vars x, y; f1 = x + (y + x^2)^2; f2 = y + x^2"],
        exit: 0,
    },
    Example { name: "invert_2x", args: &["invert", "--map", "vars x; f1 = 2*x"], exit: 0 },
    Example {
        name: "surjective_zp",
        args: &["surjective-zp", "--map", "vars x; f1 = 2*x^2 + x", "--prime", "2"],
        exit: 0,
    },
    Example {
        name: "hensel",
        args: &["hensel", "--map", "vars x; f1 = x^2 + 1", "--prime", "5", "--power", "3", "--seed", "2"],
        exit: 0,
    },
    Example {
        name: "solve_mod",
        args: &["solve-mod", "--map", "vars x; f1 = x^2 + 1", "--prime", "5", "--power", "2", "--target", "0"],
        exit: 0,
    },
    Example {
        name: "solve_mod_profile",
        args: &[
            "solve-mod",
            "--map",
            "vars x; f1 = (6*x + 3)*(3*x + 1)",
            "--prime-bound",
            "20",
            "--power",
            "2",
            "--target",
            "0",
        ],
        exit: 0,
    },
    Example {
        name: "inject_probe_zp",
        args: &["inject-probe", "--map", "vars x; f1 = x^3 + x", "--prime", "3", "--power", "1"],
        exit: 0,
    },
    Example {
        name: "inject_probe_inconclusive",
        args: &["inject-probe", "--map", "vars x; f1 = x^3", "--prime", "3", "--power", "2"],
        exit: 2,
    },
    Example { name: "inject_z", args: &["inject-z", "--map", "vars x; f1 = 6*x^3 - 5*x^2 + x"], exit: 0 },
    Example {
        name: "witness_zloc",
        args: &["witness-zloc", "--map", "vars x; f1 = 6*x^3 - 5*x^2 + x", "--prime", "7"],
        exit: 0,
    },
    Example { name: "resultant", args: &["resultant", "--f", "x^2 - 1", "--g", "2*x"], exit: 0 },
    Example { name: "jacobian", args: &["jacobian", "--map", "vars x, y; f1 = x + y^2; f2 = x*y"], exit: 0 },
    Example {
        name: "series_lift",
        args: &["series-lift", "--map", "vars x; f1 = x^3 - 3*x", "--target", "t", "--base", "0", "--order", "6"],
        exit: 0,
    },
    Example { name: "gallery_prop52_powers", args: &["gallery", "--case", "prop52_powers"], exit: 0 },
];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polymap")).args(args).output().expect("binary runs")
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timing_ms");
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn expected_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/expected").join(format!("{name}.json"))
}

#[test]
fn documented_examples_match_expected_output() {
    let bless = std::env::var_os("POLYMAP_BLESS").is_some();
    for ex in EXAMPLES {
        let out = run(ex.args);
        assert_eq!(out.status.code(), Some(ex.exit), "{}: stderr {}", ex.name, String::from_utf8_lossy(&out.stderr));
        let mut actual: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{}: {e}", ex.name));
        strip_timing(&mut actual);
        let path = expected_path(ex.name);
        if bless {
            std::fs::write(&path, serde_json::to_string_pretty(&actual).unwrap() + "\n").unwrap();
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, serde_json::to_string_pretty(&actual).unwrap() + "\n", "{} differs", ex.name);
    }
}

#[test]
fn text_format_mirrors_json() {
    let out = run(&[
        "hensel",
        "--map",
        "vars x; f1 = x^2 + 1",
        "--prime",
        "5",
        "--power",
        "3",
        "--seed",
        "2",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kind: Lifted"), "{text}");
    assert!(text.contains("57"), "{text}");
}

#[test]
fn modulus_header_supplies_prime_and_power() {
    let out = run(&["hensel", "--map", "vars x; mod 5^3; f1 = x^2 + 1", "--seed", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let with_flags = run(&["hensel", "--map", "vars x; f1 = x^2 + 1", "--prime", "5", "--power", "3", "--seed", "2"]);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        strip_timing(&mut v);
        v["certificate"].clone()
    };
    assert_eq!(strip(&out), strip(&with_flags));
}

#[test]
fn errors_exit_with_status_one() {
    let cases: &[&[&str]] = &[
        &["classify", "--map", "vars x; f1 = 2*"],
        &["gallery", "--case", "no_such_case"],
        &["surjective-zp", "--map", "vars x, y; f1 = x; f2 = y", "--prime", "7", "--budget", "10"],
        &["invert", "--map", "vars x, y; f1 = x"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn standard_input_is_read_without_map_or_file() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_polymap"))
        .args(["jacobian"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"vars x, y; f1 = x*y; f2 = y").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"]["determinant"], "y");
}
