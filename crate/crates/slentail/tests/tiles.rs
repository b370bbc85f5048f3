mod common;

use std::collections::BTreeSet;

use common::{automaton, check_rotation_preserves_models, formula, library, same_size, vars, DLL};
use proptest::prelude::*;
use slentail::automata::rotation_closure;
use slentail::frontend::parse_system;
use slentail::slcore::{eval_formula, State, Tree, Var};
use slentail::tiles::{
    canonical_projection, char_formula, char_tile, compose_tiles, is_canonical_tile, is_canonical_tree,
    is_quasi_canonical_tile, is_quasi_canonical_tree, normalize_tile, rotation_oracle, Port, Tile, ROTATION_BOUND,
};
use slentail::Error;

fn port(fw: &[&str], bw: &[&str]) -> Port {
    Port::new(vars(fw), vars(bw), Vec::new())
}

/// `⟨a ↦ (x, b), ∅, (x, a)⟩`
fn dll_root() -> Tile {
    Tile::new(formula("a -> (x, b)"), Port::default(), vec![port(&["x"], &["a"])])
}

/// `⟨∃hd'. hd' ↦ (d, p) ∧ hd = c ∧ hd' = hd, (hd, p)⟩`
fn dll_leaf() -> Tile {
    Tile::new(formula("\\E hd' . hd' -> (d, p) & hd = c & hd' = hd"), port(&["hd"], &["p"]), Vec::new())
}

fn dll_params() -> BTreeSet<Var> {
    vars(&["a", "b", "c", "d"]).into_iter().collect()
}

#[test]
fn dll_alphabet_is_canonical() {
    let (_, a) = automaton(&parse_system(DLL).unwrap(), "DLL", &["a", "b", "c", "d"]);
    assert_eq!(a.alphabet.len(), 4);
    for t in &a.alphabet {
        assert!(is_quasi_canonical_tile(t), "{t}");
        assert!(is_canonical_tile(t), "{t}");
    }
}

#[test]
fn tll_alphabet_is_quasi_canonical_only() {
    let (_, a) = automaton(&library(), "TLL_pp", &["a", "nil", "c", "nil"]);
    assert!(a.alphabet.iter().all(is_quasi_canonical_tile));
    assert!(a.alphabet.iter().any(|t| !is_canonical_tile(t)));
    for t in a.enumerate(3, 50) {
        assert!(is_quasi_canonical_tree(&t));
    }
}

#[test]
fn out_port_without_referenced_variable_is_rejected() {
    let t = Tile::new(formula("a -> (x)"), Port::default(), vec![port(&["y"], &[])]);
    assert!(!is_quasi_canonical_tile(&t));
    assert!(!is_canonical_tile(&t));
}

#[test]
fn composing_dll_tiles_gives_two_cells() {
    let t = compose_tiles(&dll_root(), 0, &dll_leaf()).unwrap();
    assert_eq!(t.arity(), 0);
    assert!(t.input.is_empty());
    let s = State::new()
        .with_store("a", 1)
        .with_store("b", 0)
        .with_store("c", 2)
        .with_store("d", 0)
        .with_cell(1, &[2, 0])
        .with_cell(2, &[0, 1]);
    assert!(eval_formula(&s, &t.formula).unwrap());
    let three = s.clone().with_cell(2, &[3, 1]).with_cell(3, &[0, 2]);
    assert!(!eval_formula(&three, &t.formula).unwrap());
}

#[test]
fn composing_a_leaf_drops_arity() {
    let inner = Tile::new(formula("y -> (z, w)"), port(&["y"], &["w"]), vec![port(&["z"], &["y"])]);
    let outer = Tile::new(formula("a -> (x, b)"), Port::default(), vec![port(&["x"], &["a"]), port(&["x"], &["a"])]);
    // two out-ports on the same variables is not canonical, but composition only needs widths
    let t = compose_tiles(&outer, 1, &dll_leaf()).unwrap();
    assert_eq!(t.arity(), 1);
    let t = compose_tiles(&outer, 0, &inner).unwrap();
    assert_eq!(t.arity(), 2);
}

#[test]
fn composition_errors() {
    let wide = Tile::new(formula("y -> (z, w)"), Port::new(vars(&["y"]), vars(&["w", "z"]), Vec::new()), Vec::new());
    assert!(matches!(compose_tiles(&dll_root(), 0, &wide), Err(Error::PortMismatch(_))));
    assert!(matches!(compose_tiles(&dll_root(), 3, &dll_leaf()), Err(Error::PortMismatch(_))));
    let clash = Tile::new(formula("\\E x . hd -> (x, p)"), port(&["hd"], &["p"]), Vec::new());
    assert!(matches!(compose_tiles(&dll_root(), 0, &clash), Err(Error::VariableClash(_))));
}

#[test]
fn char_formula_of_a_singleton_is_its_formula() {
    let t = Tile::new(formula("a -> (b, d) & a = c"), Port::default(), Vec::new());
    let phi = char_formula(&Tree::leaf(t.clone())).unwrap();
    assert_eq!(phi, t.formula);
}

#[test]
fn char_formula_free_variables_are_parameters() {
    let (_, a) = automaton(&parse_system(DLL).unwrap(), "DLL", &["a", "b", "c", "d"]);
    for t in a.enumerate(4, 20) {
        let phi = char_formula(&t).unwrap();
        let free: BTreeSet<Var> = phi.free_vars();
        assert!(free.is_subset(&dll_params()), "{phi}");
        assert!(char_tile(&t).unwrap().input.is_empty());
    }
}

#[test]
fn normal_form_keeps_parameters() {
    let n = normalize_tile(&dll_root(), &dll_params()).unwrap();
    assert_eq!(n.to_string(), "a -> (ξ1, b) | in: ;; | out_0: ξ1;a;");
    assert_eq!(normalize_tile(&n, &dll_params()).unwrap(), n);
    let leaf = normalize_tile(&dll_leaf(), &dll_params()).unwrap();
    assert_eq!(leaf.to_string(), "c -> (d, ξ1) | in: c;ξ1;");
    assert!(matches!(
        normalize_tile(&Tile::new(formula("emp"), Port::default(), vec![]), &dll_params()),
        Err(Error::NotSingleton(_))
    ));
}

fn rename_bound(t: &Tile, names: &[String]) -> Tile {
    // renames x, hd, p (the non-parameters) to the given fresh names
    let map = [("x", &names[0]), ("hd", &names[1]), ("p", &names[2]), ("hd'", &names[3])];
    t.map_vars(&|var| match var.as_name().and_then(|n| map.iter().find(|(k, _)| *k == n)) {
        Some((_, to)) => Var::named(to),
        None => var.clone(),
    })
}

proptest! {
    #[test]
    fn normal_form_ignores_bound_names(names in proptest::sample::subsequence(
        vec!["u".to_string(), "w1".into(), "zz".into(), "k".into(), "m".into(), "q0".into(), "r".into()], 4)
        .prop_shuffle()) {
        let params = dll_params();
        for t in [dll_root(), dll_leaf(), Tile::new(formula("\\E hd' . hd' -> (x, p) & hd' = hd"), port(&["hd"], &["p"]), vec![port(&["x"], &["hd"])])] {
            let renamed = rename_bound(&t, &names);
            prop_assert_eq!(normalize_tile(&t, &params).unwrap(), normalize_tile(&renamed, &params).unwrap());
        }
    }
}

#[test]
fn projection_of_canonical_tree_is_identity() {
    let (_, a) = automaton(&parse_system(DLL).unwrap(), "DLL", &["a", "b", "c", "d"]);
    for t in a.enumerate(3, 10) {
        assert!(is_canonical_tree(&t));
        assert_eq!(canonical_projection(&t), t);
    }
}

#[test]
fn projection_of_tll_tree_is_canonical() {
    let (_, a) = automaton(&library(), "TLL_pp", &["a", "nil", "c", "nil"]);
    let trees = a.enumerate(3, 20);
    assert!(trees.iter().any(|t| !is_canonical_tree(t)));
    for t in trees {
        let p = canonical_projection(&t);
        assert!(is_canonical_tree(&p), "{:?}", p.labels().iter().map(|(_, l)| l.to_string()).collect::<Vec<_>>());
        assert_eq!(p.positions(), t.positions());
    }
}

#[test]
fn dll_head_and_middle_trees_are_rotations() {
    let (art, a) = automaton(&parse_system(DLL).unwrap(), "DLL", &["a", "b", "c", "d"]);
    let ar = rotation_closure(&a, &art.parameters.iter().cloned().collect());
    let chains = same_size(&a, 3);
    assert_eq!(chains.len(), 1);
    let t = &chains[0];
    let identity = rotation_oracle(t, t, ROTATION_BOUND).unwrap().unwrap();
    assert!(identity.iter().all(|(p, q)| p == q));
    // the tree rooted at the middle cell, with two children
    let middle: Vec<_> = same_size(&ar, 3).into_iter().filter(|u| u.children.len() == 2).collect();
    assert!(!middle.is_empty());
    for u in &middle {
        let r = rotation_oracle(t, u, ROTATION_BOUND).unwrap().expect("rotation");
        assert_eq!(r[&vec![0]], Vec::<u32>::new());
    }
}

#[test]
fn unrelated_trees_are_not_rotations() {
    let (_, dll) = automaton(&parse_system(DLL).unwrap(), "DLL", &["a", "b", "c", "d"]);
    let (_, tree) = automaton(&library(), "TREE_pp", &["a", "nil"]);
    let t = &same_size(&dll, 3)[0];
    for u in same_size(&tree, 3) {
        assert_eq!(rotation_oracle(t, &u, ROTATION_BOUND).unwrap(), None);
    }
    let big = dll.enumerate(9, 20).into_iter().find(|t| t.size() == 9).unwrap();
    assert!(matches!(rotation_oracle(&big, &big, ROTATION_BOUND), Err(Error::BoundExceeded(_))));
}

#[test]
fn rotation_preserves_models_dll() {
    assert!(check_rotation_preserves_models(&parse_system(DLL).unwrap(), "DLL", &["a", "b", "c", "d"], 5) > 5);
}

#[test]
fn rotation_preserves_models_tll() {
    assert!(check_rotation_preserves_models(&library(), "TLL_pp", &["a", "nil", "c", "nil"], 5) > 0);
}
