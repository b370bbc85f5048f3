//! Syntax of symbolic heaps, states, and the strict semantics.

mod eval;
mod formula;
mod spanning;
mod state;
mod tree;
mod uf;
mod var;

pub use eval::eval_formula;
pub use formula::{Formula, PointsTo, PredicateCall, PureAtom, SpatialAtom};
pub use spanning::{edges_local, is_local_state, spanning_trees, SpanningTree, DEFAULT_CELL_BOUND};
pub use state::{disjoint_union, Loc, State, NULL};
pub use tree::{find_rotation, for_each_rotation, pos_string, tree_shapes, Pos, Tree};
pub use uf::VarClasses;
pub use var::{fresh_name, Var};
