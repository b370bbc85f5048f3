#![allow(dead_code)]

use std::fs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slentail::automata::{inclusion, rotation_closure, sl2ta, TreeAutomaton};
use slentail::frontend::{parse_file, parse_side, parse_system, EntailmentQuery, InductiveSystem, QuerySide, SidFile};
use slentail::oracle::{enumerate_unfoldings, models_of_formula, side_as_call, unfold};
use slentail::preprocess::{run_pipeline, PipelineArtifacts};
use slentail::slcore::{
    eval_formula, find_rotation, is_local_state, spanning_trees, tree_shapes, Formula, State, Tree, Var,
};
use slentail::tiles::{char_formula, is_canonical_tree, rotation_oracle, Tile, ROTATION_BOUND};

pub const DLL: &str = "DLL(hd, p, tl, n) ::= hd -> (n, p) & hd = tl
    | \\E x . hd -> (x, p) * DLL(x, hd, tl, n);
";

pub fn corpus_dir() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus").to_string()
}

pub fn row(i: usize) -> SidFile {
    parse_file(&fs::read_to_string(format!("{}/row{i:02}.sid", corpus_dir())).unwrap()).unwrap()
}

/// The `# expected:` line of a corpus file.
pub fn expected(i: usize) -> String {
    let text = fs::read_to_string(format!("{}/row{i:02}.sid", corpus_dir())).unwrap();
    text.lines().find_map(|l| l.strip_prefix("# expected: ")).unwrap().trim().to_string()
}

pub fn library() -> InductiveSystem {
    parse_system(&fs::read_to_string(format!("{}/lib.sid", corpus_dir())).unwrap()).unwrap()
}

pub fn vars(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| if *n == "nil" { Var::Nil } else { Var::named(n) }).collect()
}

pub fn formula(text: &str) -> Formula {
    match parse_side(text).unwrap() {
        QuerySide::Formula(f) => f,
        QuerySide::Call(c) => panic!("expected a formula, got {c}"),
    }
}

pub fn pipeline(sys: &InductiveSystem, root: &str, actuals: &[&str]) -> PipelineArtifacts {
    run_pipeline(sys, root, &vars(actuals)).unwrap()
}

pub fn automaton(sys: &InductiveSystem, root: &str, actuals: &[&str]) -> (PipelineArtifacts, TreeAutomaton) {
    let art = pipeline(sys, root, actuals);
    let a = sl2ta(&art).unwrap();
    (art, a)
}

/// Inclusion against the bounded enumeration: if inclusion holds, every
/// enumerated tree is accepted; otherwise the witness is a real one and,
/// when short enough, enumeration finds a rejected tree as well.
pub fn agrees_with_enumeration(a: &TreeAutomaton, b: &TreeAutomaton, depth: usize) {
    let res = inclusion(a, b, true);
    let trees = a.enumerate(depth, 2000);
    if res.included {
        assert!(trees.iter().all(|t| b.accepts(t)));
    } else {
        let w = res.witness.unwrap();
        assert!(a.accepts(&w) && !b.accepts(&w));
        if w.height() <= depth {
            assert!(trees.iter().any(|t| !b.accepts(t)));
        }
    }
}

pub fn random_automaton(rng: &mut ChaCha8Rng, alphabet: &[Tile]) -> TreeAutomaton {
    let n = rng.gen_range(1..=6);
    let mut a = TreeAutomaton::new();
    for i in 0..n {
        a.add_state(format!("s{i}"));
    }
    let count = rng.gen_range(1..=10);
    for _ in 0..count {
        let tile = &alphabet[rng.gen_range(0..alphabet.len())];
        let children = (0..tile.arity()).map(|_| rng.gen_range(0..n)).collect();
        a.add_transition(tile.clone(), children, rng.gen_range(0..n));
    }
    a.finals.insert(rng.gen_range(0..n));
    if rng.gen_bool(0.3) {
        a.finals.insert(rng.gen_range(0..n));
    }
    a
}

/// Models of canonical trees are unique up to isomorphism and have a local
/// spanning tree over the tree's own domain.
pub fn canonical_models_are_isomorphic(root: &str, actuals: &[&str]) -> usize {
    let (_, a) = automaton(&library(), root, actuals);
    let mut checked = 0;
    for t in a.enumerate(4, 1000) {
        assert!(is_canonical_tree(&t));
        let (models, _) = models_of_formula(&char_formula(&t).unwrap(), 64);
        assert!(!models.is_empty());
        for s in &models {
            assert!(s.isomorphic(&models[0]));
            assert!(is_local_state(s, s.cells()).unwrap());
            let dom = t.positions();
            assert!(spanning_trees(s, s.cells())
                .unwrap()
                .iter()
                .any(|st| st.keys().cloned().collect::<Vec<_>>() == dom));
        }
        checked += 1;
    }
    checked
}

/// Independent re-check: some left unfolding accepts `s`, and no right
/// unfolding with at most `s.cells()` atoms does.
pub fn verify_counter_model(sys: &InductiveSystem, q: &EntailmentQuery, s: &State) {
    let (lsys, lroot, largs) = side_as_call(sys, &q.lhs, "L");
    let lhs_ok = enumerate_unfoldings(&lsys, &lroot, s.cells() + 1)
        .unwrap()
        .iter()
        .any(|t| eval_formula(s, &unfold(&lsys, t, &largs).unwrap()).unwrap());
    assert!(lhs_ok);
    let (rsys, rroot, rargs) = side_as_call(sys, &q.rhs, "R");
    for t in enumerate_unfoldings(&rsys, &rroot, s.cells() + 1).unwrap() {
        assert!(!eval_formula(s, &unfold(&rsys, &t, &rargs).unwrap()).unwrap());
    }
}

/// Trees of `a` with `n` nodes, together with the rotated trees of `ar`.
pub fn same_size(a: &TreeAutomaton, n: usize) -> Vec<Tree<Tile>> {
    a.enumerate(n, 500).into_iter().filter(|t| t.size() == n).collect()
}

/// Rotating a quasi-canonical tree preserves its models.
pub fn check_rotation_preserves_models(sys: &InductiveSystem, root: &str, actuals: &[&str], max: usize) -> usize {
    let (art, a) = automaton(sys, root, actuals);
    let ar = rotation_closure(&a, &art.parameters.iter().cloned().collect());
    let mut pairs = 0;
    for n in 1..=max {
        let us = same_size(&ar, n);
        for t in same_size(&a, n) {
            let phi_t = char_formula(&t).unwrap();
            let (models, _) = models_of_formula(&phi_t, 64);
            for u in &us {
                if rotation_oracle(&t, u, ROTATION_BOUND).unwrap().is_none() {
                    continue;
                }
                pairs += 1;
                let phi_u = char_formula(u).unwrap();
                for s in models.iter().filter(|s| s.cells() <= 6) {
                    assert!(eval_formula(s, &phi_u).unwrap(), "model of t lost by rotation");
                }
            }
        }
    }
    pairs
}

/// Rotation is reflexive, symmetric and transitive on all tree shapes with
/// at most `max` nodes.
pub fn rotation_is_an_equivalence(max: usize) {
    for n in 1..=max {
        let shapes = tree_shapes(n);
        let rel: Vec<Vec<bool>> =
            shapes.iter().map(|a| shapes.iter().map(|b| find_rotation(a, b).is_some()).collect()).collect();
        for i in 0..shapes.len() {
            assert!(rel[i][i]);
            for j in 0..shapes.len() {
                assert_eq!(rel[i][j], rel[j][i]);
                for k in 0..shapes.len() {
                    if rel[i][j] && rel[j][k] {
                        assert!(rel[i][k]);
                    }
                }
            }
        }
    }
}

/// Runs antichain and naive inclusion on `count` random automaton pairs over
/// the DLL and TREE_pp alphabets, each also checked against enumeration.
/// Returns the number of disagreements and of included pairs.
pub fn antichain_sweep(count: usize, seed: u64) -> (usize, usize) {
    let dll = automaton(&parse_system(DLL).unwrap(), "DLL", &["a", "b", "c", "d"]).1;
    let (_, tree) = automaton(&library(), "TREE_pp", &["a", "nil"]);
    let alphabet: Vec<Tile> = dll.alphabet.iter().chain(&tree.alphabet).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = 0;
    let mut included = 0;
    for _ in 0..count {
        let a = random_automaton(&mut rng, &alphabet);
        let b = random_automaton(&mut rng, &alphabet);
        let fast = inclusion(&a, &b, true);
        let slow = inclusion(&a, &b, false);
        if fast.included != slow.included {
            disagreements += 1;
        }
        included += fast.included as usize;
        agrees_with_enumeration(&a, &b, 4);
    }
    (disagreements, included)
}
