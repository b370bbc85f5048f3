//! The `.sid` input language: parsing, printing, validation and size.

mod ast;
mod parser;
mod printer;
mod size;
mod validate;

pub use ast::{EntailmentQuery, InductiveSystem, Predicate, QuerySide, SidFile};
pub use parser::{parse_file, parse_side, parse_system};
pub use printer::{print_file, print_predicate, print_system};
pub use size::{rule_size, system_size};
pub use validate::{validate_system, Diagnostic, DiagnosticKind};

pub(crate) use validate::{head_root_table, root_candidates};
