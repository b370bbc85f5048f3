use std::collections::BTreeSet;

use slentail::frontend::{parse_system, print_system};
use slentail::preprocess::{
    cleanup, compute_signatures, eliminate_equalities, eliminate_parameters, locality_test, run_pipeline, split_system,
    Signature,
};
use slentail::slcore::Var;
use slentail::Error;

const LIB: &str = include_str!("../../../corpus/lib.sid");

fn vars(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| if *n == "nil" { Var::Nil } else { Var::named(n) }).collect()
}

fn lib() -> slentail::frontend::InductiveSystem {
    parse_system(LIB).unwrap()
}

#[test]
fn equality_classes_collapse_to_one_existential() {
    let sys = parse_system("P(a) ::= \\E x, y . a -> (y) & x = y;").unwrap();
    let out = eliminate_equalities(&sys).unwrap();
    assert_eq!(print_system(&out), "P(a) ::= \\E x . a -> (x);\n");
}

#[test]
fn equality_between_allocated_formal_and_formal_is_kept() {
    let sys = parse_system("DLL(hd, p, tl, n) ::= hd -> (n, p) & hd = tl;").unwrap();
    assert_eq!(eliminate_equalities(&sys).unwrap(), sys);
}

#[test]
fn double_allocation_is_unsat() {
    let sys = parse_system("P(a, b) ::= a -> (nil) * b -> (nil) & a = b;").unwrap();
    assert!(matches!(eliminate_equalities(&sys), Err(Error::UnsatRule { .. })));
}

#[test]
fn split_keeps_single_points_to_systems() {
    let sys = lib().trimmed("DLL");
    assert_eq!(split_system(&sys).unwrap(), sys);
}

#[test]
fn split_chains_atoms_in_dfs_order() {
    let sys = parse_system("P(x) ::= \\E y, z . x -> (y, z) * y -> (nil, nil) * z -> (nil, nil);").unwrap();
    let out = split_system(&sys).unwrap();
    assert_eq!(out.predicates.len(), 3);
    for p in &out.predicates {
        for r in &p.rules {
            assert_eq!(r.points_tos().count(), 1);
        }
    }
    let root = &out.get("P").unwrap().rules[0];
    assert_eq!(root.calls.len(), 2);
    // The child reached through the first selector comes first.
    assert_eq!(root.calls[0].args[0], root.points_tos().next().unwrap().targets[0]);
}

#[test]
fn split_rejects_disconnected_rule() {
    let sys = parse_system("P(a) ::= \\E x, y . a -> (nil) * x -> (y) * y -> (nil);").unwrap();
    assert!(matches!(split_system(&sys), Err(Error::DisconnectedRule { .. })));
}

#[test]
fn cleanup_moves_existential_into_its_only_user() {
    let sys = parse_system("R1(x) ::= \\E y, z . x -> (y) * R2(y, z);\nR2(y, z) ::= y -> (z);").unwrap();
    let out = cleanup(&sys, &BTreeSet::from(["R1".to_string()]));
    assert_eq!(print_system(&out), "R1(x) ::= \\E y . x -> (y) * R2(y);\nR2(y) ::= \\E z . y -> (z);\n");
}

#[test]
fn cleanup_is_identity_without_unused_variables() {
    let sys = lib().trimmed("DLL");
    assert_eq!(cleanup(&sys, &BTreeSet::new()), sys);
}

#[test]
fn cleanup_drops_dead_formal_along_call_chain() {
    let sys = parse_system(
        "P(x, d) ::= \\E y . x -> (y) * Q(y, d);\nQ(x, d) ::= \\E y . x -> (y) * R(y, d);\nR(x, d) ::= x -> (nil);",
    )
    .unwrap();
    let out = cleanup(&sys, &BTreeSet::from(["P".to_string()]));
    assert_eq!(out.get("Q").unwrap().arity(), 1);
    assert_eq!(out.get("R").unwrap().arity(), 1);
    assert_eq!(out.get("P").unwrap().arity(), 2);
}

#[test]
fn parameter_elimination_of_dll() {
    let out = eliminate_parameters(&lib().trimmed("DLL"), "DLL", &vars(&["a", "b", "c", "d"])).unwrap();
    assert_eq!(
        print_system(&out.system),
        "Q1() ::= a -> (d, b) & a = c\n    | \\E x . a -> (x, b) * Q2(x, a);\n\
         Q2(hd, p) ::= hd -> (d, p) & hd = c\n    | \\E x . hd -> (x, p) * Q2(x, hd);\n"
    );
    assert_eq!(out.parameters, vars(&["a", "b", "c", "d"]));
    assert_eq!(out.root, "Q1");
}

#[test]
fn immediately_allocated_parameter_becomes_constant() {
    let sys = parse_system("P(x) ::= x -> (nil);").unwrap();
    let out = eliminate_parameters(&sys, "P", &vars(&["a"])).unwrap();
    assert_eq!(print_system(&out.system), "Q1() ::= a -> (nil);\n");
}

#[test]
fn parameter_passed_to_two_calls_is_rejected() {
    let sys =
        parse_system("P(x, d) ::= \\E y, z . x -> (y, z) * R(y, d) * R(z, d);\nR(x, d) ::= x -> (d, nil);").unwrap();
    let err = eliminate_parameters(&sys, "P", &vars(&["a", "b"])).err().unwrap();
    assert!(matches!(err, Error::BranchingPropagation { .. }), "{err:?}");
}

#[test]
fn nil_actuals_are_not_parameters() {
    let out = eliminate_parameters(&lib().trimmed("DLL"), "DLL", &vars(&["a", "nil", "c", "nil"])).unwrap();
    assert_eq!(out.parameters, vars(&["a", "c"]));
}

#[test]
fn root_has_no_formals_and_rules_have_one_points_to() {
    let sys = lib();
    for (root, args) in [
        ("DLL_mid", vec!["a", "nil", "c", "nil"]),
        ("TREE_pp_rev", vec!["a", "nil"]),
        ("TLL_pp_rev", vec!["a", "nil", "c", "nil"]),
        ("TLL", vec!["a", "c", "nil"]),
    ] {
        let art = run_pipeline(&sys, root, &vars(&args)).unwrap();
        assert_eq!(art.processed.get(&art.root).unwrap().arity(), 0, "{root}");
        for p in &art.processed.predicates {
            for r in &p.rules {
                assert_eq!(r.points_tos().count(), 1, "{root}: {r}");
            }
            let sig = &art.signatures[&*p.name];
            assert_eq!(sig.arity(), p.arity());
            assert!(sig.fw.is_disjoint(&sig.bw) && sig.fw.is_disjoint(&sig.eq) && sig.bw.is_disjoint(&sig.eq));
        }
    }
}

#[test]
fn dll_signatures() {
    let art = run_pipeline(&lib(), "DLL", &vars(&["a", "b", "c", "d"])).unwrap();
    assert_eq!(art.signatures["Q1"], Signature::default());
    assert_eq!(art.signatures["Q2"], Signature::new([0], [1], []));
    assert!(locality_test(&art.signatures));
}

#[test]
fn tll_with_parent_pointers_has_equality_parameters() {
    let art = run_pipeline(&lib(), "TLL_pp", &vars(&["a", "nil", "c", "nil"])).unwrap();
    assert!(art.signatures.values().any(|s| !s.eq.is_empty()));
    assert!(!art.is_local());
}

#[test]
fn tll_query_system_is_not_local() {
    let art = run_pipeline(&lib(), "TLL", &vars(&["a", "c", "nil"])).unwrap();
    assert!(!locality_test(&art.signatures));
}

#[test]
fn nullary_predicate_has_empty_signature() {
    let sys = parse_system("P() ::= \\E x . x -> (nil);").unwrap();
    assert_eq!(compute_signatures(&sys)["P"], Signature::default());
}

#[test]
fn empty_system_is_local() {
    assert!(locality_test(&Default::default()));
}

#[test]
fn eliminated_predicates_are_no_larger_than_their_sources() {
    use slentail::frontend::{rule_size, system_size};
    let pred_size = |p: &slentail::frontend::Predicate| p.rules.iter().map(rule_size).sum::<usize>();
    let sys = lib();
    for (root, args) in [
        ("DLL", vec!["a", "nil", "c", "nil"]),
        ("DLL_mid", vec!["a", "nil", "c", "nil"]),
        ("TLL_pp", vec!["a", "nil", "c", "nil"]),
        ("TREE_pp_rev", vec!["a", "nil"]),
    ] {
        let art = run_pipeline(&sys, root, &vars(&args)).unwrap();
        let bound = art.after_split.predicates.iter().map(pred_size).max().unwrap();
        for p in &art.processed.predicates {
            assert!(pred_size(p) <= bound, "{root}: {}", p.name);
        }
    }
    // The root is specialised into a copy of its own, so the whole system
    // can grow: DLL goes from 12 to 20.
    let art = run_pipeline(&sys, "DLL", &vars(&["a", "b", "c", "d"])).unwrap();
    assert_eq!((system_size(&art.after_split), system_size(&art.processed)), (12, 20));
}

mod equivalence {
    use slentail::entail::prepare_query;
    use slentail::frontend::InductiveSystem;
    use slentail::oracle::{enumerate_unfoldings, models_of_formula, unfold, BySize};
    use slentail::preprocess::run_pipeline;
    use slentail::slcore::{eval_formula, State, Var};

    fn row(i: usize) -> slentail::frontend::SidFile {
        let path = format!("{}/../../corpus/row{i:02}.sid", env!("CARGO_MANIFEST_DIR"));
        slentail::frontend::parse_file(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    /// Models of `from(args)` up to `depth` levels and six cells.
    fn models(sys: &InductiveSystem, pred: &str, args: &[Var], depth: usize) -> Vec<State> {
        let mut out = Vec::new();
        for t in enumerate_unfoldings(sys, pred, depth).unwrap() {
            let phi = unfold(sys, &t, args).unwrap();
            if phi.points_tos().count() <= 6 {
                out.extend(models_of_formula(&phi, 256).0);
            }
        }
        out
    }

    fn satisfies(s: &State, sys: &InductiveSystem, pred: &str, args: &[Var]) -> bool {
        let mut by = BySize::new(sys);
        by.trees(pred, s.cells()).unwrap().iter().any(|t| eval_formula(s, &unfold(sys, t, args).unwrap()).unwrap())
    }

    #[test]
    fn pipeline_preserves_models_on_corpus() {
        let mut checked = 0;
        for i in 1..=14 {
            let f = row(i);
            let p = prepare_query(&f.system, f.query.as_ref().unwrap()).unwrap();
            for call in [&p.lhs, &p.rhs] {
                let art = run_pipeline(&p.system, &call.pred, &call.args).unwrap();
                let processed = &art.processed;
                for s in models(&p.system, &call.pred, &call.args, 3) {
                    assert!(satisfies(&s, processed, &art.root, &[]), "row {i} {}: {s:?}", call.pred);
                    checked += 1;
                }
                for s in models(processed, &art.root, &[], 4) {
                    assert!(satisfies(&s, &p.system, &call.pred, &call.args), "row {i} {}: {s:?}", call.pred);
                    checked += 1;
                }
            }
        }
        assert!(checked > 100);
    }
}
