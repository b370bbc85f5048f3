//! Canonisation of an inductive system: equality elimination, splitting
//! into one points-to per rule, parameter elimination and signatures.

mod cleanup;
mod eliminate;
mod equalities;
mod signatures;
mod split;

use std::collections::BTreeMap;

pub use cleanup::cleanup;
pub use eliminate::{eliminate_parameters, Eliminated};
pub use equalities::eliminate_equalities;
pub use signatures::{compute_signatures, locality_test, Signature};
pub use split::split_system;

use crate::frontend::InductiveSystem;
use crate::slcore::Var;
use crate::Error;

/// Everything the pipeline produces for one rooted system.
#[derive(Clone, Debug)]
pub struct PipelineArtifacts {
    /// One points-to per rule, parameters eliminated, predicates `Q1..Qn`.
    pub processed: InductiveSystem,
    /// Constants standing for the actual parameters (`nil` excluded).
    pub parameters: Vec<Var>,
    pub signatures: BTreeMap<String, Signature>,
    pub root: String,
    pub after_equalities: InductiveSystem,
    pub after_split: InductiveSystem,
}

impl PipelineArtifacts {
    pub fn is_local(&self) -> bool {
        locality_test(&self.signatures)
    }
}

/// Runs the whole pipeline for `root(actuals)`.
pub fn run_pipeline(sys: &InductiveSystem, root: &str, actuals: &[Var]) -> Result<PipelineArtifacts, Error> {
    let sys = sys.trimmed(root);
    let after_equalities = eliminate_equalities(&sys)?;
    let after_split = split_system(&after_equalities)?;
    let el = eliminate_parameters(&after_split, root, actuals)?;
    let signatures = compute_signatures(&el.system);
    Ok(PipelineArtifacts {
        processed: el.system,
        parameters: el.parameters,
        signatures,
        root: el.root,
        after_equalities,
        after_split,
    })
}
