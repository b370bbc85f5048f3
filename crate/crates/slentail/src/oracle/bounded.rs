use std::collections::BTreeSet;

use rayon::prelude::*;

use super::models::models_of_formula;
use super::unfold::{enumerate_unfoldings, side_as_call, unfold, BySize, UnfoldingTree};
use crate::frontend::{EntailmentQuery, InductiveSystem, QuerySide};
use crate::slcore::{eval_formula, Formula, State, Var};
use crate::Error;

/// Cap on the models built from one left-hand unfolding.
pub const MODEL_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    /// Unfolding depth on the left (wrapper predicates do not count).
    pub depth: usize,
    /// Largest heap considered.
    pub cells: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { depth: 4, cells: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// Every left model within the bounds is a right model.
    Holds { models_checked: usize },
    /// A left model that no right unfolding of the same size accepts.
    CounterModel(State),
    /// No counter-model was found, but some enumeration was cut short.
    Inconclusive { models_checked: usize, reason: String },
}

/// Bounded semantic check of `query`: enumerate left unfoldings up to the
/// depth bound, build their models up to the cell bound and test each one
/// against every right unfolding with as many points-to atoms as the model
/// has cells.
pub fn bounded_entailment(
    sys: &InductiveSystem,
    query: &EntailmentQuery,
    bounds: &OracleBounds,
) -> Result<OracleOutcome, Error> {
    let (lsys, lroot, largs) = side_as_call(sys, &query.lhs, "Lhs");
    let (rsys, rroot, rargs) = side_as_call(sys, &query.rhs, "Rhs");
    let depth = match query.lhs {
        QuerySide::Formula(_) => bounds.depth.max(1) + 1,
        QuerySide::Call(_) => bounds.depth,
    };
    let lhs_trees = enumerate_unfoldings(&lsys, &lroot, depth)?;

    let mut by_size = BySize::new(&rsys);
    let mut rhs: Vec<Vec<Formula>> = Vec::with_capacity(bounds.cells + 1);
    for n in 0..=bounds.cells {
        let trees = by_size.trees(&rroot, n)?;
        rhs.push(trees.iter().map(|t| unfold(&rsys, t, &rargs)).collect::<Result<_, _>>()?);
    }
    let lhs_vars: BTreeSet<Var> = largs.iter().cloned().collect();
    let rhs_only: Vec<Var> = rargs
        .iter()
        .filter(|v| !v.is_nil() && !lhs_vars.contains(v))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let per_tree: Vec<Result<TreeReport, Error>> =
        lhs_trees.par_iter().map(|t| check_tree(&lsys, t, &largs, &rhs, &rhs_only, bounds.cells)).collect();
    let mut checked = 0;
    let mut truncated = None;
    for r in per_tree {
        let r = r?;
        checked += r.models;
        if let Some(s) = r.counter {
            return Ok(OracleOutcome::CounterModel(s));
        }
        if r.truncated && truncated.is_none() {
            truncated = Some(format!("more than {MODEL_CAP} models for one unfolding"));
        }
    }
    Ok(match truncated {
        Some(reason) => OracleOutcome::Inconclusive { models_checked: checked, reason },
        None => OracleOutcome::Holds { models_checked: checked },
    })
}

struct TreeReport {
    models: usize,
    truncated: bool,
    counter: Option<State>,
}

fn check_tree(
    sys: &InductiveSystem,
    t: &UnfoldingTree,
    args: &[Var],
    rhs: &[Vec<Formula>],
    rhs_only: &[Var],
    cells: usize,
) -> Result<TreeReport, Error> {
    let phi = unfold(sys, t, args)?;
    let mut report = TreeReport { models: 0, truncated: false, counter: None };
    if phi.points_tos().count() > cells {
        return Ok(report);
    }
    let (models, truncated) = models_of_formula(&phi, MODEL_CAP);
    report.truncated = truncated;
    for mut s in models {
        // Constants only the right side mentions get their own locations.
        let mut next = s.max_loc() + 1;
        for v in args {
            if !v.is_nil() && !s.store.contains_key(v) {
                s.store.insert(v.clone(), next);
                next += 1;
            }
        }
        for v in rhs_only {
            s.store.insert(v.clone(), next);
            next += 1;
        }
        report.models += 1;
        let mut found = false;
        for psi in &rhs[s.heap.len()] {
            if eval_formula(&s, psi)? {
                found = true;
                break;
            }
        }
        if !found {
            report.counter = Some(s);
            return Ok(report);
        }
    }
    Ok(report)
}
