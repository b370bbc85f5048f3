use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slentail")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("slentail-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_prints_verdict_and_sizes() {
    let o = run(&["check", &corpus("row01.sid")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "verdict=Valid lhs=2/4 rhs=2/4 rot=5/8\n");
    assert!(o.stderr.is_empty());
}

#[test]
fn invalid_with_oracle_prints_counter_model() {
    let o = run(&["check", "--oracle", &corpus("row08.sid")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.starts_with("verdict=Invalid lhs=2/4 rhs=3/4 rot=8/10 oracle=CounterModel countermodel=\"store {"),
        "{out}"
    );
}

#[test]
fn unknown_exits_two() {
    let o = run(&["check", &corpus("row14.sid")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("verdict=Unknown"));
}

#[test]
fn output_is_byte_stable() {
    let dir = corpus("");
    let first = run(&["check", "--all", &dir]);
    for _ in 0..3 {
        assert_eq!(run(&["check", "--all", &dir]).stdout, first.stdout);
    }
    let lines: Vec<String> = stdout(&first).lines().map(|l| l.split(' ').next().unwrap().to_string()).collect();
    let expected: Vec<String> = (1..=14).map(|i| format!("file=row{i:02}.sid")).collect();
    assert_eq!(lines, expected);
    assert_eq!(first.status.code(), Some(2));
}

#[test]
fn json_format_is_parseable() {
    let o = run(&["check", "--format", "json", "--timings", &corpus("row06.sid")]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "Invalid");
    assert_eq!(v["rot"]["transitions"], 13);
    assert!(v["timings_us"]["inclusion"].is_u64());
}

#[test]
fn side_overrides() {
    let lib = corpus("lib.sid");
    let o = run(&["check", &lib, "--lhs", "DLL_rev(a, nil, c, nil)", "--rhs", "DLL(a, nil, c, nil)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["check", &lib, "--lhs", "DLL(a, nil, c, nil)"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no --rhs"));
}

#[test]
fn compile_emits_the_automaton() {
    let o = run(&["compile", &corpus("lib.sid"), "--pred", "DLL", "--args", "a,b,c,d"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("states 2 / finals q1\n"));
    assert!(out.ends_with("size=2/4 local=true\n"));
}

#[test]
fn rotate_defaults_to_the_right_side() {
    let o = run(&["rotate", &corpus("row01.sid")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("size=5/8 local=true\n"));
}

#[test]
fn dump_stages() {
    let o = run(&["check", &corpus("row01.sid"), "--dump-stage", "elim", "--dump-stage", "sig", "--emit-ta"]);
    let out = stdout(&o);
    for header in ["# lhs elim", "# lhs sig", "# rhs elim", "# rhs sig", "# lhs automaton", "# rot automaton"] {
        assert!(out.contains(header), "{header}");
    }
    assert!(out.ends_with("verdict=Valid lhs=2/4 rhs=2/4 rot=5/8\n"));
}

#[test]
fn validate_reports_disconnected_rules_with_position() {
    let f = scratch("disc.sid", "# two cells\nP(x) ::= \\E y . x -> (nil) * y -> (nil);\n");
    let o = run(&["validate", &f]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("disc.sid:2:1: DisconnectedRule"), "{err}");
    assert!(o.stdout.is_empty());
    let ok = run(&["validate", &corpus("lib.sid")]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn syntax_errors_exit_three() {
    let f = scratch("bad.sid", "P(x) ::= x -> (nil)\n");
    let o = run(&["check", &f]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("bad.sid:1:20: syntax error"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(run(&["check", "--format", "xml", &corpus("row01.sid")]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
}
