//! End-to-end runs of the `flowbrace` binary on the bundled corpus.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(relative: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(relative)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowbrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

const NAMES: [&str; 7] = ["zero_d1", "zero_d2", "zero_d3", "n2", "h3", "f4", "graft5"];

#[test]
fn validate_passes_on_corpus() {
    for name in NAMES {
        for dir in ["prelie", "brace", "p7", "p11"] {
            let o = run(&["validate", &corpus(&format!("{dir}/{name}.json"))]);
            assert_eq!(code(&o), 0, "{dir}/{name}: {}", stdout(&o));
            assert!(stdout(&o).starts_with("PASS"));
        }
    }
}

#[test]
fn validate_reports_violations_and_parse_errors() {
    let o = run(&["validate", &corpus("fixtures/f4_corrupted.json")]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("(e1, e2, e1)"), "{}", stdout(&o));

    let o = run(&["validate", &corpus("fixtures/f4_tampered_brace.json")]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("left-brace law"), "{}", stdout(&o));

    assert_eq!(
        code(&run(&["validate", &corpus("fixtures/malformed.json")])),
        1
    );
    assert_eq!(code(&run(&["validate", "/nonexistent/file.json"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
}

#[test]
fn to_brace_output_matches_bundled_braces() {
    for name in NAMES {
        let o = run(&["to-brace", &corpus(&format!("prelie/{name}.json"))]);
        assert_eq!(code(&o), 0);
        let expected = std::fs::read_to_string(corpus(&format!("brace/{name}.json"))).unwrap();
        assert_eq!(stdout(&o), expected, "{name}");
    }
    let f4 = stdout(&run(&["to-brace", &corpus("prelie/f4.json")]));
    assert!(f4.contains("[2, [0, 0], 0, 3, \"1/2\"]"));
    assert!(f4.contains("[2, [0, 0], 0, 2, \"-1/2\"]"));
    let zero = stdout(&run(&["to-brace", &corpus("prelie/zero_d2.json")]));
    assert!(zero.contains("\"entries\": []"));
}

#[test]
fn file_level_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in NAMES {
        let brace = dir.path().join(format!("{name}.brace.json"));
        let back = dir.path().join(format!("{name}.json"));
        let input = corpus(&format!("prelie/{name}.json"));
        assert_eq!(
            code(&run(&[
                "to-brace",
                &input,
                "--out",
                brace.to_str().unwrap()
            ])),
            0
        );
        assert_eq!(
            code(&run(&[
                "to-prelie",
                brace.to_str().unwrap(),
                "--out",
                back.to_str().unwrap()
            ])),
            0
        );
        assert_eq!(
            std::fs::read_to_string(&back).unwrap(),
            std::fs::read_to_string(&input).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn roundtrip_command() {
    for name in NAMES {
        for dir in ["prelie", "brace"] {
            let o = run(&["roundtrip", &corpus(&format!("{dir}/{name}.json"))]);
            assert_eq!(code(&o), 0, "{dir}/{name}: {}", stdout(&o));
        }
    }
    assert_eq!(
        code(&run(&[
            "roundtrip",
            &corpus("fixtures/f4_tampered_brace.json")
        ])),
        2
    );
}

#[test]
fn chains_command() {
    let o = run(&["chains", &corpus("brace/n2.json")]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "A: 2,1,0; A^(): 2,1,0; A^[]: 2,1,0; strongly nilpotent, index 3"
    );
    let o = run(&["chains", &corpus("brace/zero_d2.json")]);
    assert!(stdout(&o).starts_with("A: 2,0; A^(): 2,0; A^[]: 2,0;"));
    let o = run(&["chains", &corpus("prelie/f4.json")]);
    assert!(stdout(&o).contains("strongly nilpotent, index 4"));
}

#[test]
fn bch_command() {
    for path in [
        "prelie/h3.json",
        "prelie/zero_d2.json",
        "prelie/graft5.json",
        "brace/f4.json",
    ] {
        let o = run(&["bch", &corpus(path), "--trials", "5"]);
        assert_eq!(code(&o), 0, "{path}: {}", stdout(&o));
    }
}

#[test]
fn field_override_reduces_mod_p() {
    let o = run(&["validate", &corpus("prelie/f4.json"), "--field", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("F_7"));
    // the grafting algebra has class 5, too large for F_5
    assert_eq!(
        code(&run(&[
            "validate",
            &corpus("prelie/graft5.json"),
            "--field",
            "5"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "validate",
            &corpus("prelie/f4.json"),
            "--field",
            "8"
        ])),
        1
    );
}

#[test]
fn doubling_matrix_command() {
    let o = run(&["doubling-matrix", "--degree", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("[2/1]"));
    let o = run(&["doubling-matrix", "--degree", "3"]);
    let text = stdout(&o);
    assert!(text.contains("upper triangular: yes"));
    assert!(text.contains("diagonal: 2/1, 4/1, 4/1"));
    assert!(text.contains("(x*(x*y))") && text.contains("((x*x)*y)"));
    assert!(stdout(&run(&["doubling-matrix", "--degree", "4"])).contains("upper triangular: yes"));
    assert_eq!(code(&run(&["doubling-matrix", "--degree", "1"])), 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["to-brace", "--field", "11"];
    let path = corpus("prelie/graft5.json");
    let first = run(&[args[0], &path, args[1], args[2]]);
    let second = run(&[args[0], &path, args[1], args[2]]);
    assert_eq!(first.stdout, second.stdout);
}
