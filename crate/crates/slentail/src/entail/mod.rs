//! The decision procedure: both sides go through the preprocessing
//! pipeline and become tree automata, the right one is closed under
//! rotation, and the answer comes from language inclusion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use crate::automata::{inclusion, rotation_closure, sl2ta, TreeAutomaton};
use crate::frontend::{validate_system, EntailmentQuery, InductiveSystem, Predicate, QuerySide};
use crate::oracle::{bounded_entailment, OracleBounds, OracleOutcome};
use crate::preprocess::{run_pipeline, PipelineArtifacts};
use crate::slcore::{fresh_name, PredicateCall, State, Tree, Var};
use crate::tiles::Tile;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Valid,
    Invalid,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Valid => "Valid",
            Answer::Invalid => "Invalid",
            Answer::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct AutomatonSize {
    pub states: usize,
    pub transitions: usize,
}

impl AutomatonSize {
    pub fn of(a: &TreeAutomaton) -> Self {
        AutomatonSize { states: a.state_count(), transitions: a.transition_count() }
    }
}

impl fmt::Display for AutomatonSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.states, self.transitions)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub lhs: AutomatonSize,
    pub rhs: AutomatonSize,
    /// The rotation closure as built, before trimming.
    pub rot: AutomatonSize,
    pub rot_trimmed: AutomatonSize,
    /// Pairs explored by the inclusion check.
    pub explored: usize,
    /// Wall time per stage, in pipeline order.
    pub stages: Vec<(&'static str, Duration)>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: Answer,
    pub lhs_local: bool,
    pub rhs_local: bool,
    pub stats: Stats,
    /// A tree of the left automaton outside the closed right language.
    pub witness: Option<Tree<Tile>>,
    /// Bounded oracle result, run when the answer is `Unknown` (or always
    /// when requested). Variable names are those of the query.
    pub oracle: Option<OracleOutcome>,
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Antichain pruning in the inclusion check.
    pub antichain: bool,
    /// Run the oracle for every query, not only on `Unknown`.
    pub always_oracle: bool,
    /// Run the oracle on `Unknown` answers.
    pub oracle_on_unknown: bool,
    pub oracle_bounds: OracleBounds,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            antichain: true,
            always_oracle: false,
            oracle_on_unknown: true,
            oracle_bounds: OracleBounds::default(),
        }
    }
}

/// A query made ready for the pipeline: constants renamed away from the
/// system's variables and formula sides replaced by wrapper predicates.
#[derive(Clone, Debug)]
pub struct PreparedQuery {
    pub system: InductiveSystem,
    pub lhs: PredicateCall,
    pub rhs: PredicateCall,
    /// The query after renaming but before wrapping, for the oracle.
    pub renamed: EntailmentQuery,
    /// Renamed constant back to its name in the query.
    pub back: BTreeMap<Var, Var>,
}

pub fn prepare_query(sys: &InductiveSystem, q: &EntailmentQuery) -> Result<PreparedQuery, Error> {
    let names = sys.var_names();
    let mut constants: Vec<Var> = q.lhs.free_vars_ordered();
    for v in q.rhs.free_vars_ordered() {
        if !constants.contains(&v) {
            constants.push(v);
        }
    }
    let taken_const: BTreeSet<String> = constants.iter().map(|v| v.to_string()).collect();
    let mut map = BTreeMap::new();
    let mut back = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for c in &constants {
        let name = c.to_string();
        if names.contains(&name) {
            let fresh = fresh_name(&name, &|s| names.contains(s) || taken_const.contains(s) || used.contains(s));
            used.insert(fresh.clone());
            map.insert(c.clone(), Var::named(&fresh));
            back.insert(Var::named(&fresh), c.clone());
        }
    }
    let rename = |s: &QuerySide| match s {
        QuerySide::Call(c) => QuerySide::Call(PredicateCall {
            pred: c.pred.clone(),
            args: c.args.iter().map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone())).collect(),
        }),
        QuerySide::Formula(f) => QuerySide::Formula(f.substitute(&map)),
    };
    let renamed = EntailmentQuery { lhs: rename(&q.lhs), rhs: rename(&q.rhs) };

    let mut system = sys.clone();
    let mut wrap = |side: &QuerySide, base: &str| -> Result<PredicateCall, Error> {
        match side {
            QuerySide::Call(c) => {
                let p = system.get(&c.pred).ok_or_else(|| Error::UnknownPredicate {
                    name: c.pred.to_string(),
                    line: 0,
                    col: 0,
                })?;
                if p.arity() != c.args.len() {
                    return Err(Error::ArityMismatch {
                        name: c.pred.to_string(),
                        expected: p.arity(),
                        found: c.args.len(),
                        line: 0,
                        col: 0,
                    });
                }
                Ok(c.clone())
            }
            QuerySide::Formula(f) => {
                for c in &f.calls {
                    let Some(p) = system.get(&c.pred) else {
                        return Err(Error::UnknownPredicate { name: c.pred.to_string(), line: 0, col: 0 });
                    };
                    if p.arity() != c.args.len() {
                        return Err(Error::ArityMismatch {
                            name: c.pred.to_string(),
                            expected: p.arity(),
                            found: c.args.len(),
                            line: 0,
                            col: 0,
                        });
                    }
                }
                let formals = side.free_vars_ordered();
                let name = system.fresh_pred_name(base);
                system.insert(Predicate::new(&name, formals.clone(), vec![f.clone()]));
                system.refresh_selector_count();
                Ok(PredicateCall::new(&name, formals))
            }
        }
    };
    let lhs = wrap(&renamed.lhs, "Lhs")?;
    let rhs = wrap(&renamed.rhs, "Rhs")?;
    Ok(PreparedQuery { system, lhs, rhs, renamed, back })
}

/// All intermediate results of one check, for inspection and dumps.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub prepared: PreparedQuery,
    pub lhs: PipelineArtifacts,
    pub rhs: PipelineArtifacts,
    pub a_lhs: TreeAutomaton,
    pub a_rhs: TreeAutomaton,
    pub a_rot: TreeAutomaton,
    pub stages: Vec<(&'static str, Duration)>,
}

/// Validates the part of the system each side uses, then compiles both
/// sides and closes the right automaton under rotation.
pub fn compile_query(sys: &InductiveSystem, q: &EntailmentQuery) -> Result<Compiled, Error> {
    let mut stages = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, stages: &mut Vec<(&'static str, Duration)>| {
        stages.push((name, clock.elapsed()));
        clock = Instant::now();
    };
    let prepared = prepare_query(sys, q)?;
    let mut diags = validate_system(&prepared.system.trimmed(&prepared.lhs.pred));
    for d in validate_system(&prepared.system.trimmed(&prepared.rhs.pred)) {
        if !diags.contains(&d) {
            diags.push(d);
        }
    }
    if !diags.is_empty() {
        return Err(Error::ValidationFailed(diags));
    }
    lap("validate", &mut stages);
    let lhs = run_pipeline(&prepared.system, &prepared.lhs.pred, &prepared.lhs.args)?;
    let rhs = run_pipeline(&prepared.system, &prepared.rhs.pred, &prepared.rhs.args)?;
    lap("preprocess", &mut stages);
    let a_lhs = sl2ta(&lhs)?;
    let a_rhs = sl2ta(&rhs)?;
    lap("sl2ta", &mut stages);
    let params: BTreeSet<Var> = rhs.parameters.iter().cloned().collect();
    let a_rot = rotation_closure(&a_rhs, &params);
    lap("rotate", &mut stages);
    Ok(Compiled { prepared, lhs, rhs, a_lhs, a_rhs, a_rot, stages })
}

pub fn check_entailment(sys: &InductiveSystem, q: &EntailmentQuery) -> Result<Verdict, Error> {
    check_entailment_with(sys, q, &Options::default())
}

pub fn check_entailment_with(sys: &InductiveSystem, q: &EntailmentQuery, opts: &Options) -> Result<Verdict, Error> {
    let start = Instant::now();
    let c = compile_query(sys, q)?;
    let t = Instant::now();
    let rot_trimmed = c.a_rot.trim();
    let inc = inclusion(&c.a_lhs, &rot_trimmed, opts.antichain);
    let mut stages = c.stages.clone();
    stages.push(("inclusion", t.elapsed()));

    let lhs_local = c.lhs.is_local();
    let rhs_local = c.rhs.is_local();
    let answer = if inc.included {
        Answer::Valid
    } else if lhs_local && rhs_local {
        Answer::Invalid
    } else {
        Answer::Unknown
    };
    let oracle = if opts.always_oracle || (answer == Answer::Unknown && opts.oracle_on_unknown) {
        let t = Instant::now();
        let out = match bounded_entailment(&c.prepared.system, &c.prepared.renamed, &opts.oracle_bounds) {
            Ok(o) => o,
            Err(e) => OracleOutcome::Inconclusive { models_checked: 0, reason: e.to_string() },
        };
        stages.push(("oracle", t.elapsed()));
        Some(match out {
            OracleOutcome::CounterModel(s) => OracleOutcome::CounterModel(rename_store(&s, &c.prepared.back)),
            o => o,
        })
    } else {
        None
    };
    let stats = Stats {
        lhs: AutomatonSize::of(&c.a_lhs),
        rhs: AutomatonSize::of(&c.a_rhs),
        rot: AutomatonSize::of(&c.a_rot),
        rot_trimmed: AutomatonSize::of(&rot_trimmed),
        explored: inc.explored,
        stages,
        elapsed: start.elapsed(),
    };
    Ok(Verdict { answer, lhs_local, rhs_local, stats, witness: inc.witness, oracle })
}

fn rename_store(s: &State, back: &BTreeMap<Var, Var>) -> State {
    let mut out = s.clone();
    out.store = s.store.iter().map(|(v, l)| (back.get(v).cloned().unwrap_or_else(|| v.clone()), *l)).collect();
    out
}
