//! Tree automata over normal tiles: construction from processed systems,
//! rotation closure and language inclusion.

mod closure;
mod inclusion;
mod sl2ta;
mod ta;

pub use closure::rotation_closure;
pub use inclusion::{inclusion, InclusionResult};
pub use sl2ta::sl2ta;
pub use ta::{Run, StateId, SymbolId, Transition, TreeAutomaton};
