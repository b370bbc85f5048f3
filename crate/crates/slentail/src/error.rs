use thiserror::Error;

use crate::frontend::Diagnostic;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown predicate `{name}`")]
    UnknownPredicate { name: String, line: usize, col: usize },
    #[error("{line}:{col}: `{name}` expects {expected} arguments, got {found}")]
    ArityMismatch { name: String, expected: usize, found: usize, line: usize, col: usize },
    #[error("variable `{0}` is not in the store")]
    UnboundVariable(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("state has no spanning tree")]
    NoSpanningTree,
    #[error("unsatisfiable rule {pred}#{rule}: {reason}")]
    UnsatRule { pred: String, rule: usize, reason: String },
    #[error("empty rule {pred}#{rule}")]
    EmptyRule { pred: String, rule: usize },
    #[error("disconnected rule {pred}#{rule}")]
    DisconnectedRule { pred: String, rule: usize },
    #[error("branching propagation for parameter `{param}` of {pred}")]
    BranchingPropagation { pred: String, param: String },
    #[error("port mismatch: {0}")]
    PortMismatch(String),
    #[error("variable clash: {0}")]
    VariableClash(String),
    #[error("tile is not a singleton: {0}")]
    NotSingleton(String),
    #[error("formula has no model")]
    Unsat,
    #[error("validation failed: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    ValidationFailed(Vec<Diagnostic>),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
