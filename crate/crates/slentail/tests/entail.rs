mod common;

use common::{expected, row, DLL};
use rayon::prelude::*;
use slentail::entail::{check_entailment, check_entailment_with, prepare_query, Answer, Options, Verdict};
use slentail::frontend::{parse_file, DiagnosticKind};
use slentail::oracle::OracleOutcome;
use slentail::slcore::Var;
use slentail::Error;

fn check(i: usize) -> Verdict {
    let f = row(i);
    check_entailment(&f.system, f.query.as_ref().unwrap()).unwrap()
}

fn sizes(v: &Verdict) -> String {
    format!("{} {} {}", v.stats.lhs, v.stats.rhs, v.stats.rot)
}

#[test]
fn corpus_answers() {
    for i in 1..=14 {
        let v = check(i);
        match expected(i).as_str() {
            "valid" => assert_eq!(v.answer, Answer::Valid, "row {i}"),
            "invalid" if v.lhs_local && v.rhs_local => assert_eq!(v.answer, Answer::Invalid, "row {i}"),
            "invalid" => {
                assert_eq!(v.answer, Answer::Unknown, "row {i}");
                assert!(matches!(v.oracle, Some(OracleOutcome::CounterModel(_))), "row {i}: {:?}", v.oracle);
            }
            other => panic!("row {i}: bad expectation {other}"),
        }
    }
}

#[test]
fn verdict_invariants() {
    for i in 1..=14 {
        let v = check(i);
        match v.answer {
            Answer::Valid => assert!(v.witness.is_none()),
            Answer::Invalid => assert!(v.lhs_local && v.rhs_local && v.witness.is_some()),
            Answer::Unknown => assert!(!(v.lhs_local && v.rhs_local) && v.witness.is_some()),
        }
        assert!(v.stats.rot_trimmed.transitions <= v.stats.rot.transitions);
        assert!(v.stats.rot.states >= v.stats.rhs.states);
    }
}

#[test]
fn dll_against_dll_rev_sizes() {
    let v = check(1);
    assert_eq!(v.answer, Answer::Valid);
    assert_eq!(sizes(&v), "2/4 2/4 5/8");
}

#[test]
fn invalid_local_row_sizes() {
    let v = check(8);
    assert_eq!(v.answer, Answer::Invalid);
    assert!(v.lhs_local && v.rhs_local);
    assert_eq!(sizes(&v), "2/4 3/4 8/10");
}

#[test]
fn non_local_false_row_is_unknown() {
    let v = check(14);
    assert_eq!(v.answer, Answer::Unknown);
    assert!(!v.rhs_local);
    assert_eq!(format!("{} {}", v.stats.lhs, v.stats.rhs), "4/8 4/7");
}

#[test]
fn naive_inclusion_gives_the_same_answers() {
    let naive = Options { antichain: false, ..Options::default() };
    for i in 1..=14 {
        let f = row(i);
        let v = check_entailment_with(&f.system, f.query.as_ref().unwrap(), &naive).unwrap();
        assert_eq!(v.answer, check(i).answer, "row {i}");
    }
}

#[test]
fn verdicts_are_deterministic_across_threads() {
    let reference: Vec<(Answer, String)> = (1..=14).map(|i| (check(i).answer, sizes(&check(i)))).collect();
    for _ in 0..3 {
        let par: Vec<(Answer, String)> =
            (1..=14).into_par_iter().map(|i| (check(i).answer, sizes(&check(i)))).collect();
        assert_eq!(par, reference);
    }
    let w1 = check(8).witness.map(|w| format!("{w:?}"));
    let w2 = check(8).witness.map(|w| format!("{w:?}"));
    assert_eq!(w1, w2);
}

#[test]
fn oracle_never_contradicts_a_valid_answer() {
    let opts = Options { always_oracle: true, ..Options::default() };
    for i in 1..=14 {
        let f = row(i);
        let v = check_entailment_with(&f.system, f.query.as_ref().unwrap(), &opts).unwrap();
        let oracle = v.oracle.unwrap();
        if v.answer == Answer::Valid {
            assert!(!matches!(oracle, OracleOutcome::CounterModel(_)), "row {i}");
        }
        if matches!(oracle, OracleOutcome::CounterModel(_)) {
            assert_ne!(v.answer, Answer::Valid, "row {i}");
        }
        if v.answer == Answer::Invalid {
            assert!(matches!(oracle, OracleOutcome::CounterModel(_)), "row {i}");
        }
    }
}

#[test]
fn counter_models_use_query_names() {
    // `x` is also a variable of the DLL rules and gets renamed internally
    let opts = Options { always_oracle: true, ..Options::default() };
    let f = row(8);
    let v = check_entailment_with(&f.system, f.query.as_ref().unwrap(), &opts).unwrap();
    let Some(OracleOutcome::CounterModel(s)) = v.oracle else { panic!() };
    assert!(s.store.contains_key(&Var::named("x")));
    assert!(!s.store.keys().any(|k| k.to_string().contains('\'')));
}

#[test]
fn colliding_constants_are_renamed() {
    let f = row(7);
    let p = prepare_query(&f.system, f.query.as_ref().unwrap()).unwrap();
    let x = p.lhs.args.iter().find(|v| v.to_string().starts_with('x')).unwrap();
    assert_eq!(x.to_string(), "x'");
    assert_eq!(p.back[x], Var::named("x"));
    assert!(p.system.contains(&p.lhs.pred));
}

#[test]
fn disconnected_systems_are_refused() {
    let f = parse_file(
        "LS(x, y) ::= x -> (y) | \\E z . x -> (z) * LS(z, y);
         TWO(a, b, c, d) ::= LS(a, b) * LS(c, d) * a -> (b);
         entail TWO(a, b, c, d) |- TWO(a, b, c, d);",
    )
    .unwrap();
    match check_entailment(&f.system, f.query.as_ref().unwrap()) {
        Err(Error::ValidationFailed(d)) => assert!(d.iter().any(|d| d.kind == DiagnosticKind::DisconnectedRule)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unrelated_arguments_are_invalid() {
    let f = parse_file(&format!("{DLL}entail DLL(a, nil, c, nil) |- DLL(c, nil, a, nil);")).unwrap();
    let v = check_entailment(&f.system, f.query.as_ref().unwrap()).unwrap();
    assert_eq!(v.answer, Answer::Invalid);
    let f = parse_file(&format!("{DLL}entail DLL(a, b, c, d) |- DLL(a, b, c, d);")).unwrap();
    assert_eq!(check_entailment(&f.system, f.query.as_ref().unwrap()).unwrap().answer, Answer::Valid);
}

#[test]
fn corpus_queries_run_fast() {
    for i in 1..=14 {
        let v = check(i);
        assert!(v.stats.elapsed.as_secs_f64() < 1.0, "row {i} took {:?}", v.stats.elapsed);
    }
}
