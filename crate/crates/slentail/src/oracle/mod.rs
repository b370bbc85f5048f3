//! A bounded semantic oracle, independent of the automata pipeline: it
//! unfolds both sides into concrete heaps and compares them directly.

mod bounded;
mod models;
mod unfold;

pub use bounded::{bounded_entailment, OracleBounds, OracleOutcome, MODEL_CAP};
pub use models::models_of_formula;
pub use unfold::{enumerate_capped, enumerate_unfoldings, side_as_call, unfold, BySize, UnfoldingTree, TREE_CAP};
