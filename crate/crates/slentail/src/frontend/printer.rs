use std::fmt::Write;

use super::ast::{InductiveSystem, Predicate, SidFile};

pub fn print_predicate(p: &Predicate) -> String {
    let mut out = String::new();
    let formals: Vec<String> = p.formals.iter().map(|v| v.to_string()).collect();
    write!(out, "{}({}) ::= ", p.name, formals.join(", ")).unwrap();
    for (j, r) in p.rules.iter().enumerate() {
        if j > 0 {
            out.push_str("\n    | ");
        }
        write!(out, "{r}").unwrap();
    }
    out.push_str(";\n");
    out
}

/// One rule per line, continuation rules indented and led by `|`.
pub fn print_system(sys: &InductiveSystem) -> String {
    sys.predicates.iter().map(print_predicate).collect()
}

pub fn print_file(file: &SidFile) -> String {
    let mut out = print_system(&file.system);
    if let Some(q) = &file.query {
        writeln!(out, "{q}").unwrap();
    }
    out
}
