use std::fs;

use slentail::frontend::{
    parse_file, parse_system, print_file, print_system, rule_size, system_size, validate_system, DiagnosticKind,
    QuerySide,
};
use slentail::slcore::Formula;
use slentail::Error;

const DLL: &str = "DLL(hd, p, tl, n) ::= hd -> (n, p) & hd = tl
    | \\E x . hd -> (x, p) * DLL(x, hd, tl, n);
";

fn corpus_files() -> Vec<std::path::PathBuf> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus");
    let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

#[test]
fn parses_dll() {
    let sys = parse_system(DLL).unwrap();
    assert_eq!(sys.predicates.len(), 1);
    assert_eq!(sys.predicates[0].rules.len(), 2);
    assert_eq!(sys.selector_count, 2);
}

#[test]
fn smallest_system() {
    let sys = parse_system("P(x) ::= x -> (nil);").unwrap();
    assert_eq!(sys.predicates.len(), 1);
    assert_eq!(sys.selector_count, 1);
    assert_eq!(system_size(&sys), 2);
}

#[test]
fn parses_tll() {
    let sys = parse_system(
        "TLL(root, ll, lr) ::= root -> (nil, nil, lr) & root = ll
            | \\E x, y, z . root -> (x, y, nil) * TLL(x, ll, z) * TLL(y, z, lr);",
    )
    .unwrap();
    assert_eq!(sys.predicates[0].rules.len(), 2);
    assert_eq!(sys.selector_count, 3);
    assert!(validate_system(&sys).is_empty());
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_system("P(x) ::= x -> (nil)\nQ(y) ::= y -> ;") {
        Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(parse_system("P(nil) ::= emp;"), Err(Error::Syntax { .. })));
}

#[test]
fn unresolved_references() {
    assert!(matches!(parse_system("P(x) ::= x -> (nil) * Q(x);"), Err(Error::UnknownPredicate { .. })));
    assert!(matches!(
        parse_system("P(x) ::= \\E y . x -> (y) * P(x, y);"),
        Err(Error::ArityMismatch { expected: 1, found: 2, .. })
    ));
    assert!(matches!(parse_file(&format!("{DLL} entail DLL(a) |- DLL(a);")), Err(Error::ArityMismatch { .. })));
}

#[test]
fn validation_accepts_dll() {
    assert!(validate_system(&parse_system(DLL).unwrap()).is_empty());
}

#[test]
fn validation_rejects_empty_head() {
    let sys = parse_system("Q(x) ::= x -> (nil);\nP(x, y) ::= Q(x) * Q(y);").unwrap();
    let d = validate_system(&sys);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].kind, DiagnosticKind::EmptyHead);
    assert_eq!((d[0].pred.as_str(), d[0].rule), ("P", 0));
}

#[test]
fn validation_rejects_disconnected_rule() {
    let sys = parse_system(
        "LS(x, y) ::= x -> (y) | \\E z . x -> (z) * LS(z, y);
         TWO(a, b, c, d) ::= LS(a, b) * LS(c, d) * a -> (b);",
    )
    .unwrap();
    let d = validate_system(&sys);
    assert!(d.iter().any(|d| d.kind == DiagnosticKind::DisconnectedRule && d.pred == "TWO"));
}

#[test]
fn validation_rejects_branching_of_unallocated_formal() {
    let sys = parse_system(
        "L(x, e) ::= x -> (e);
         B(x, e) ::= \\E l, r . x -> (l, r) * L(l, e) * L(r, e);",
    )
    .unwrap();
    let d = validate_system(&sys);
    assert!(d.iter().any(|d| d.kind == DiagnosticKind::BranchingPropagation && d.pred == "B"));
}

#[test]
fn validation_rejects_pure_shape() {
    let sys = parse_system("P(x, y, z) ::= x -> (nil) & y = z;").unwrap();
    let d = validate_system(&sys);
    assert!(d.iter().any(|d| d.kind == DiagnosticKind::PureShape));
}

#[test]
fn sizes() {
    let sys = parse_system(DLL).unwrap();
    assert_eq!(rule_size(&sys.predicates[0].rules[1]), 8);
    assert_eq!(rule_size(&sys.predicates[0].rules[0]), 4);
    assert_eq!(system_size(&sys), 12);
    assert_eq!(rule_size(&Formula::emp()), 1);
}

#[test]
fn corpus_validates_and_round_trips() {
    let files = corpus_files();
    assert_eq!(files.iter().filter(|f| f.extension().is_some_and(|e| e == "sid")).count(), 15);
    for f in files {
        let text = fs::read_to_string(&f).unwrap();
        let file = parse_file(&text).unwrap();
        let diags = validate_system(&file.system);
        assert!(diags.is_empty(), "{}: {diags:?}", f.display());
        let printed = print_file(&file);
        assert_eq!(parse_file(&printed).unwrap(), file, "{}", f.display());
        assert_eq!(print_file(&parse_file(&printed).unwrap()), printed);
    }
}

#[test]
fn printer_layout_is_pinned() {
    let sys = parse_system(DLL).unwrap();
    assert_eq!(print_system(&sys), DLL);
}

#[test]
fn formula_query_sides() {
    let file = parse_file(&format!(
        "{DLL}entail \\E y, a . x -> (y, nil) * y -> (a, x) * DLL(a, y, c, nil) |- DLL(x, nil, c, nil);"
    ))
    .unwrap();
    let q = file.query.unwrap();
    match &q.lhs {
        QuerySide::Formula(f) => {
            assert_eq!(f.existentials.len(), 2);
            assert_eq!(f.calls.len(), 1);
        }
        QuerySide::Call(_) => panic!("lhs should be a formula"),
    }
    let names: Vec<String> = q.lhs.free_vars_ordered().iter().map(|v| v.to_string()).collect();
    assert_eq!(names, ["x", "c"]);
    assert!(matches!(q.rhs, QuerySide::Call(_)));
}
