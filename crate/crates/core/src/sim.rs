//! The refutation driver and the resolution simulation.
//!
//! A run builds one diagram per input clause, conjoins them following a join
//! schedule, and fully reduces after every join. Each elimination event is
//! simulated before it is applied: the false paths through the doomed node
//! pair up across its two branches, and for every pair whose merged path is
//! not already falsified by a known clause, the resolvent of the two
//! annotated clauses is derived. The run ends when a reduced diagram is the
//! false terminal; concatenating the input clauses and the derived
//! resolvents, in order, is then a resolution refutation.
//!
//! Everything a run does is recorded in a serializable script: step list,
//! diagram sizes, and one certificate per elimination carrying the paired
//! paths, the emitted resolvents, the skipped pairs, and the node profile
//! that bounds the event.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::{Annotation, NodeProfile};
use crate::cnf::{resolve_on, ClauseDb, ClauseId, Cnf, Var};
use crate::obdd::{
    EngineError, FalsePath, NodeRef, ObddStore, ReductionEvent, VarOrder, DEFAULT_PATH_BUDGET,
};
use crate::proof::{ProofStep, ResolutionProof};

/// A binary join tree over 1-based axiom indices. Serializes as nested
/// arrays, e.g. `[[1,2],[3,4]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JoinTree {
    Leaf(usize),
    Join(Box<JoinTree>, Box<JoinTree>),
}

impl JoinTree {
    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            JoinTree::Leaf(i) => out.push(*i),
            JoinTree::Join(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        match self {
            JoinTree::Leaf(_) => 1,
            JoinTree::Join(l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    /// Every axiom must be used exactly once. A binary tree over m leaves
    /// then has 2m-1 nodes in total.
    pub fn validate(&self, m: usize) -> Result<(), SimError> {
        let mut leaves = self.leaves();
        leaves.sort_unstable();
        let expected: Vec<usize> = (1..=m).collect();
        if leaves != expected {
            return Err(SimError::BadSchedule(format!(
                "schedule must use each of the {m} axioms exactly once"
            )));
        }
        debug_assert_eq!(self.node_count(), 2 * m - 1);
        Ok(())
    }
}

/// How the axiom diagrams are conjoined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Left fold in clause order: ((1 and 2) and 3) and ...
    Linear,
    /// Balanced split of the clause range.
    Balanced,
    Explicit(JoinTree),
}

impl Schedule {
    pub fn tree(&self, m: usize) -> Result<JoinTree, SimError> {
        let tree = match self {
            Schedule::Linear => {
                let mut acc = JoinTree::Leaf(1);
                for i in 2..=m {
                    acc = JoinTree::Join(Box::new(acc), Box::new(JoinTree::Leaf(i)));
                }
                acc
            }
            Schedule::Balanced => Self::balanced(1, m),
            Schedule::Explicit(t) => t.clone(),
        };
        tree.validate(m)?;
        Ok(tree)
    }

    fn balanced(lo: usize, hi: usize) -> JoinTree {
        if lo == hi {
            return JoinTree::Leaf(lo);
        }
        let mid = (lo + hi) / 2;
        JoinTree::Join(
            Box::new(Self::balanced(lo, mid)),
            Box::new(Self::balanced(mid + 1, hi)),
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Explicit variable order; ascending variable number when absent.
    pub order: Option<Vec<Var>>,
    pub path_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: None,
            path_budget: DEFAULT_PATH_BUDGET,
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("the empty formula has nothing to refute")]
    EmptyFormula,
    #[error("bad schedule: {0}")]
    BadSchedule(String),
    #[error("bad variable order: {0}")]
    BadOrder(String),
}

/// What happened to one paired set of false paths during an elimination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PairAction {
    /// No existing clause was falsified by the merged path; the resolvent of
    /// the pair's clauses was derived. `fresh` is false when an earlier pair
    /// of the same event already produced the identical resolvent.
    Resolved { resolvent: ClauseId, fresh: bool },
    /// The merged path already falsifies `witness`; no resolution step is
    /// needed for this pair.
    Skipped { witness: ClauseId },
}

impl PairAction {
    /// The clause that covers the merged path after the elimination.
    pub fn clause(&self) -> ClauseId {
        match self {
            PairAction::Resolved { resolvent, .. } => *resolvent,
            PairAction::Skipped { witness } => *witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub high_path: FalsePath,
    pub low_path: FalsePath,
    pub merged: FalsePath,
    pub high_clause: ClauseId,
    pub low_clause: ClauseId,
    pub action: PairAction,
}

/// The full record of one simulated elimination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationCertificate {
    pub node: NodeRef,
    pub var: Var,
    pub pairs: Vec<PairRecord>,
    /// Emitted resolvents in derivation order (deduplicated within the event).
    pub resolvents: Vec<ClauseId>,
    /// Annotation profile of the node at event time.
    pub profile: NodeProfile,
}

impl EliminationCertificate {
    pub fn skip_count(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| matches!(p.action, PairAction::Skipped { .. }))
            .count()
    }
}

/// Simulates eliminating `p` under the current annotation: pairs up the
/// false paths through `p`, skips pairs whose merged path is already
/// falsified by a guard clause, and derives the resolvent of the annotated
/// clauses for the rest. Derived clauses are appended to the database;
/// identical resolvents within the event are derived once.
///
/// `guard_ids` must be the clauses the diagram currently encodes — its
/// subtree's axioms plus everything derived while reducing that subtree.
/// Consulting anything wider would let bindings escape the diagram's own
/// formula and break the per-diagram soundness relation.
pub fn simulate_elimination(
    store: &ObddStore,
    annotation: &Annotation,
    p: NodeRef,
    db: &mut ClauseDb,
    guard_ids: &[ClauseId],
) -> Result<EliminationCertificate, SimError> {
    let root = annotation.root();
    let var = store.var(p);
    let profile = annotation.profile(store, p)?;
    let paired = store.paired_paths_at(root, p)?;
    // the guard only consults clauses that existed before this event
    let mut guard: Vec<ClauseId> = guard_ids.to_vec();
    guard.sort_unstable();
    let mut emitted: BTreeMap<crate::cnf::Clause, ClauseId> = BTreeMap::new();
    let mut resolvents = Vec::new();
    let mut pairs = Vec::new();
    for (high_path, low_path) in paired {
        let merged = high_path.without_var(var);
        debug_assert_eq!(merged, low_path.without_var(var));
        let high_clause = annotation
            .clause_for(&high_path)
            .unwrap_or_else(|| panic!("annotation misses path `{high_path}`"));
        let low_clause = annotation
            .clause_for(&low_path)
            .unwrap_or_else(|| panic!("annotation misses path `{low_path}`"));
        let witness = guard
            .iter()
            .copied()
            .find(|id| merged.falsifies(db.clause(*id)));
        let action = if let Some(witness) = witness {
            PairAction::Skipped { witness }
        } else {
            let c = db.clause(high_clause);
            let d = db.clause(low_clause);
            let (resolvent, pivot) = resolve_on(c, d).unwrap_or_else(|e| {
                panic!(
                    "pair `{high_path}` / `{low_path}` must resolve but {e}: \
                     {high_clause}=`{c}` vs {low_clause}=`{d}` \
                     (this indicates an engine bug or subsumed input clauses)"
                )
            });
            assert_eq!(
                pivot, var,
                "pair resolves on {pivot}, expected the eliminated variable {var}"
            );
            match emitted.get(&resolvent) {
                Some(&id) => PairAction::Resolved {
                    resolvent: id,
                    fresh: false,
                },
                None => {
                    let id = db.push_resolvent(resolvent.clone(), high_clause, low_clause, var);
                    emitted.insert(resolvent, id);
                    resolvents.push(id);
                    PairAction::Resolved {
                        resolvent: id,
                        fresh: true,
                    }
                }
            }
        };
        pairs.push(PairRecord {
            high_path,
            low_path,
            merged,
            high_clause,
            low_clause,
            action,
        });
    }
    Ok(EliminationCertificate {
        node: p,
        var,
        pairs,
        resolvents,
        profile,
    })
}

/// One entry of the run script.
#[derive(Clone, Debug, Serialize)]
pub enum ScriptStep {
    Axiom {
        clause: ClauseId,
        root: NodeRef,
        size: usize,
    },
    Join {
        /// 1-based indices of the operand steps (axioms or joins), whose
        /// reduced diagrams feed the conjunction.
        left: usize,
        right: usize,
        root: NodeRef,
        size: usize,
    },
    Eliminate {
        node: NodeRef,
        var: Var,
        root_after: NodeRef,
        size_after: usize,
        certificate: EliminationCertificate,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RunOutcome {
    Refuted,
    Satisfiable,
}

/// Serializable record of a refutation run.
#[derive(Clone, Debug, Serialize)]
pub struct RefutationScript {
    /// Number of input clauses.
    pub m: usize,
    pub outcome: RunOutcome,
    pub steps: Vec<ScriptStep>,
    /// Input clauses followed by derived resolvents.
    pub clause_db: ClauseDb,
    /// Diagram sizes along the run: each axiom, each join, and the reduced
    /// size after each join that triggered eliminations.
    pub sizes: Vec<usize>,
    /// Sum of `sizes`; the size measure the global bounds are stated against.
    pub total_size: usize,
    /// Whether all scheduled joins ran before the run ended.
    pub complete: bool,
    pub final_root: NodeRef,
    pub final_size: usize,
    pub warnings: Vec<String>,
}

impl RefutationScript {
    pub fn derived_count(&self) -> usize {
        self.clause_db.len() - self.m
    }

    pub fn certificates(&self) -> impl Iterator<Item = &EliminationCertificate> {
        self.steps.iter().filter_map(|s| match s {
            ScriptStep::Eliminate { certificate, .. } => Some(certificate),
            _ => None,
        })
    }

    pub fn join_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, ScriptStep::Join { .. }))
            .count()
    }

    /// Number of diagrams in the refutation sequence (axioms plus joins).
    pub fn obdd_count(&self) -> usize {
        self.m + self.join_count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("script serializes")
    }
}

/// Read-only view of a run state handed to observers.
pub struct StepView<'a> {
    pub store: &'a ObddStore,
    pub db: &'a ClauseDb,
    pub root: NodeRef,
    pub annotation: &'a Annotation,
    /// Clause ids the diagram currently encodes: the axioms of its subtree
    /// plus every resolvent derived while reducing it.
    pub clause_ids: &'a [ClauseId],
}

/// Hooks for watching a run step by step; all default to no-ops.
pub trait RunObserver {
    fn on_axiom(&mut self, _view: StepView<'_>) {}
    fn on_join(&mut self, _left: StepView<'_>, _right: StepView<'_>, _joined: StepView<'_>) {}
    fn before_elimination(&mut self, _view: StepView<'_>, _candidate: NodeRef) {}
    fn on_elimination(
        &mut self,
        _event: &ReductionEvent,
        _certificate: &EliminationCertificate,
        _view: StepView<'_>,
    ) {
    }
}

/// The do-nothing observer.
pub struct NoopObserver;

impl RunObserver for NoopObserver {}

/// Everything a run leaves behind. The store is kept so recorded roots can
/// still be rendered or re-inspected after the run.
pub struct RunArtifacts {
    pub script: RefutationScript,
    pub store: ObddStore,
    pub final_annotation: Annotation,
}

struct SubState {
    step: usize,
    root: NodeRef,
    annotation: Annotation,
    clause_ids: Vec<ClauseId>,
}

fn compile_joins(tree: &JoinTree, next_slot: &mut usize, joins: &mut Vec<(usize, usize)>) -> usize {
    match tree {
        JoinTree::Leaf(i) => i - 1,
        JoinTree::Join(l, r) => {
            let ls = compile_joins(l, next_slot, joins);
            let rs = compile_joins(r, next_slot, joins);
            let slot = *next_slot;
            *next_slot += 1;
            joins.push((ls, rs));
            slot
        }
    }
}

/// Runs the refutation: axiom diagrams in clause order, then the scheduled
/// joins, fully reducing after each join and simulating every elimination.
/// The run stops as soon as a reduced diagram is the false terminal; if all
/// joins finish with a non-false diagram the input was satisfiable.
pub fn run_refutation(
    cnf: &Cnf,
    schedule: &Schedule,
    config: &RunConfig,
) -> Result<RunArtifacts, SimError> {
    run_refutation_observed(cnf, schedule, config, &mut NoopObserver)
}

pub fn run_refutation_observed(
    cnf: &Cnf,
    schedule: &Schedule,
    config: &RunConfig,
    observer: &mut dyn RunObserver,
) -> Result<RunArtifacts, SimError> {
    if cnf.is_empty() {
        return Err(SimError::EmptyFormula);
    }
    let m = cnf.len();
    let order = match &config.order {
        Some(vars) => {
            let order = VarOrder::from_permutation(vars.clone())
                .map_err(|e| SimError::BadOrder(e.to_string()))?;
            for v in cnf.vars() {
                if !order.contains(v) {
                    return Err(SimError::BadOrder(format!(
                        "{v} is not covered by the order"
                    )));
                }
            }
            order
        }
        None => VarOrder::ascending(cnf.max_var()),
    };
    let tree = schedule.tree(m)?;
    let mut joins = Vec::new();
    let mut next_slot = m;
    let root_slot = compile_joins(&tree, &mut next_slot, &mut joins);

    let mut store = ObddStore::with_path_budget(order, config.path_budget);
    let mut db = ClauseDb::from_cnf(cnf);
    let warnings: Vec<String> = cnf
        .subsumed_pairs()
        .iter()
        .map(|(a, b)| format!("input clause {a} subsumes {b}"))
        .collect();

    let mut steps = Vec::new();
    let mut sizes = Vec::new();
    let mut states: Vec<SubState> = Vec::with_capacity(2 * m - 1);

    for id in (1..=m).map(ClauseId) {
        let root = store.clause_obdd(db.clause(id));
        let annotation = Annotation::for_axiom(&store, root, id, &db)?;
        let size = store.size(root);
        steps.push(ScriptStep::Axiom {
            clause: id,
            root,
            size,
        });
        sizes.push(size);
        let clause_ids = vec![id];
        observer.on_axiom(StepView {
            store: &store,
            db: &db,
            root,
            annotation: &annotation,
            clause_ids: &clause_ids,
        });
        states.push(SubState {
            step: steps.len(),
            root,
            annotation,
            clause_ids,
        });
    }

    let mut last_slot = if m == 1 { 0 } else { root_slot };
    for (li, ri) in joins {
        let (lroot, rroot) = (states[li].root, states[ri].root);
        let joined = store.apply_and(lroot, rroot)?;
        let annotation = Annotation::join(
            &store,
            &states[li].annotation,
            &states[ri].annotation,
            joined,
            &db,
        )?;
        let mut clause_ids: Vec<ClauseId> = states[li]
            .clause_ids
            .iter()
            .chain(&states[ri].clause_ids)
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let size = store.size(joined);
        steps.push(ScriptStep::Join {
            left: states[li].step,
            right: states[ri].step,
            root: joined,
            size,
        });
        sizes.push(size);
        let join_step = steps.len();
        observer.on_join(
            StepView {
                store: &store,
                db: &db,
                root: states[li].root,
                annotation: &states[li].annotation,
                clause_ids: &states[li].clause_ids,
            },
            StepView {
                store: &store,
                db: &db,
                root: states[ri].root,
                annotation: &states[ri].annotation,
                clause_ids: &states[ri].clause_ids,
            },
            StepView {
                store: &store,
                db: &db,
                root: joined,
                annotation: &annotation,
                clause_ids: &clause_ids,
            },
        );

        let mut root = joined;
        let mut annotation = annotation;
        let mut eliminations = 0usize;
        while let Some(p) = store.next_reducible(root) {
            observer.before_elimination(
                StepView {
                    store: &store,
                    db: &db,
                    root,
                    annotation: &annotation,
                    clause_ids: &clause_ids,
                },
                p,
            );
            let certificate = simulate_elimination(&store, &annotation, p, &mut db, &clause_ids)?;
            for id in &certificate.resolvents {
                clause_ids.push(*id);
            }
            let (next_root, event) = store
                .eliminate(root, p)
                .expect("reduction candidate satisfies the elimination precondition");
            annotation = annotation.rebind_after_elimination(
                &store,
                &event,
                &certificate,
                next_root,
                &db,
            )?;
            let size_after = store.size(next_root);
            steps.push(ScriptStep::Eliminate {
                node: p,
                var: event.var,
                root_after: next_root,
                size_after,
                certificate: certificate.clone(),
            });
            eliminations += 1;
            root = next_root;
            observer.on_elimination(
                &event,
                &certificate,
                StepView {
                    store: &store,
                    db: &db,
                    root,
                    annotation: &annotation,
                    clause_ids: &clause_ids,
                },
            );
        }
        if eliminations > 0 {
            sizes.push(store.size(root));
        }

        states.push(SubState {
            step: join_step,
            root,
            annotation,
            clause_ids,
        });
        last_slot = states.len() - 1;
        if root.is_false() {
            break;
        }
    }

    let final_state = &states[last_slot];
    let outcome = if final_state.root.is_false() {
        RunOutcome::Refuted
    } else {
        RunOutcome::Satisfiable
    };
    let executed_joins = states.len() - m;
    let total_size = sizes.iter().sum();
    let script = RefutationScript {
        m,
        outcome,
        clause_db: db,
        sizes,
        total_size,
        complete: executed_joins == m - 1,
        final_root: final_state.root,
        final_size: store.size(final_state.root),
        warnings,
        steps,
    };
    let final_annotation = final_state.annotation.clone();
    Ok(RunArtifacts {
        script,
        store,
        final_annotation,
    })
}

/// Conjoins all input clauses of the database linearly without any
/// reduction, threading the annotation through every join. Used to study a
/// single elimination on the raw conjunction.
pub fn conjoin_unreduced(
    store: &mut ObddStore,
    db: &ClauseDb,
) -> Result<(NodeRef, Annotation), SimError> {
    assert!(db.input_count() > 0, "nothing to conjoin");
    let first = ClauseId(1);
    let mut root = store.clause_obdd(db.clause(first));
    let mut annotation = Annotation::for_axiom(store, root, first, db)?;
    for id in (2..=db.input_count()).map(ClauseId) {
        let axiom_root = store.clause_obdd(db.clause(id));
        let axiom_ann = Annotation::for_axiom(store, axiom_root, id, db)?;
        let joined = store.apply_and(root, axiom_root)?;
        annotation = Annotation::join(store, &annotation, &axiom_ann, joined, db)?;
        root = joined;
    }
    Ok((root, annotation))
}

/// Runs a batch of instances sequentially. Each run gets its own store.
pub fn run_many_seq(
    instances: &[(String, Cnf)],
    schedule: &Schedule,
    config: &RunConfig,
) -> Vec<(String, Result<RefutationScript, SimError>)> {
    instances
        .iter()
        .map(|(label, cnf)| {
            (
                label.clone(),
                run_refutation(cnf, schedule, config).map(|a| a.script),
            )
        })
        .collect()
}

/// Runs a batch of instances on the rayon pool, one store per instance.
#[cfg(feature = "parallel")]
pub fn run_many_par(
    instances: &[(String, Cnf)],
    schedule: &Schedule,
    config: &RunConfig,
) -> Vec<(String, Result<RefutationScript, SimError>)> {
    use rayon::prelude::*;
    instances
        .par_iter()
        .map(|(label, cnf)| {
            (
                label.clone(),
                run_refutation(cnf, schedule, config).map(|a| a.script),
            )
        })
        .collect()
}

/// Feature-dispatched batch runner.
pub fn run_many(
    instances: &[(String, Cnf)],
    schedule: &Schedule,
    config: &RunConfig,
) -> Vec<(String, Result<RefutationScript, SimError>)> {
    #[cfg(feature = "parallel")]
    {
        run_many_par(instances, schedule, config)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_many_seq(instances, schedule, config)
    }
}

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("the run did not end in the false terminal; there is no refutation to translate")]
    NotRefuted,
    #[error("refuted run has no empty clause in its database; this is an engine bug")]
    MissingEmptyClause,
    #[error(
        "size bound violated: {detail} (subsumed input clauses present: {subsumption_warned})"
    )]
    BoundViolation {
        detail: String,
        subsumption_warned: bool,
        certificates: Vec<EliminationCertificate>,
    },
}

/// Turns a refuting script into a resolution proof: all input clauses as
/// axioms, then every derived resolvent in derivation order. The size
/// bounds that keep the translation polynomial are asserted here and a
/// violation is an error, never ignored. If the input itself contains the
/// empty clause the proof is just the axiom prefix ending at it.
pub fn translate(cnf: &Cnf, script: &RefutationScript) -> Result<ResolutionProof, TranslateError> {
    if script.outcome != RunOutcome::Refuted {
        return Err(TranslateError::NotRefuted);
    }
    let db = &script.clause_db;
    let m = script.m;
    debug_assert_eq!(m, cnf.len());

    // degenerate exit: the input contains the empty clause
    if let Some(bottom) = (1..=m).map(ClauseId).find(|id| db.clause(*id).is_empty()) {
        let mut proof = ResolutionProof::new();
        for id in (1..=bottom.0).map(ClauseId) {
            proof.push(ProofStep::Axiom {
                clause: db.clause(id).clone(),
            });
        }
        return Ok(proof);
    }

    let derived = script.derived_count();
    let n = script.total_size;
    let subsumption_warned = !script.warnings.is_empty();
    let mut violations = Vec::new();
    if derived > m * n {
        violations.push(format!("derived steps {derived} exceed m*n = {}", m * n));
    }
    if m <= n && derived > n * n {
        violations.push(format!("derived steps {derived} exceed n^2 = {}", n * n));
    }
    for cert in script.certificates() {
        let emitted = cert.resolvents.len();
        let pair_bound = cert.pairs.len(); // = ceil(|paths through node| / 2)
        let support = cert.profile.support();
        if emitted > pair_bound {
            violations.push(format!(
                "event on {} emitted {emitted} resolvents, above its {pair_bound} pairs",
                cert.var
            ));
        }
        if emitted > m {
            violations.push(format!(
                "event on {} emitted {emitted} resolvents, above the {m} input clauses",
                cert.var
            ));
        }
        if emitted > support {
            violations.push(format!(
                "event on {} emitted {emitted} resolvents, above its profile support {support}",
                cert.var
            ));
        }
    }
    if !violations.is_empty() {
        return Err(TranslateError::BoundViolation {
            detail: violations.join("; "),
            subsumption_warned,
            certificates: script.certificates().cloned().collect(),
        });
    }

    let mut proof = ResolutionProof::new();
    let mut closed = false;
    for id in (1..=db.len()).map(ClauseId) {
        let entry = db.entry(id);
        match entry.origin {
            crate::cnf::ClauseOrigin::Input => {
                proof.push(ProofStep::Axiom {
                    clause: entry.clause.clone(),
                });
            }
            crate::cnf::ClauseOrigin::Resolvent { left, right, pivot } => {
                // clause ids are dense, so the proof step index of a clause
                // is its id
                proof.push(ProofStep::Resolvent {
                    clause: entry.clause.clone(),
                    left: left.0,
                    right: right.0,
                    pivot: Some(pivot),
                });
                // the empty clause can arrive before the diagram bottoms
                // out; resolvents derived after it are dead weight and are
                // never parents of earlier steps, so the proof stops here
                if entry.clause.is_empty() {
                    closed = true;
                    break;
                }
            }
        }
    }
    if closed {
        Ok(proof)
    } else {
        Err(TranslateError::MissingEmptyClause)
    }
}

/// Per-event numbers for the stats report.
#[derive(Clone, Debug, Serialize)]
pub struct EventStats {
    pub var: Var,
    pub paths_through: usize,
    pub pairs: usize,
    pub emitted: usize,
    pub skips: usize,
    /// Distinct clauses on paths through the node at event time.
    pub support: usize,
    pub excess: usize,
    /// min(pairs, input clause count) minus emitted.
    pub slack: usize,
}

/// Machine-readable run summary.
#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    pub outcome: RunOutcome,
    pub input_clauses: usize,
    /// The refutation size n: sum of all recorded diagram sizes.
    pub refutation_size: usize,
    /// Diagrams in the refutation sequence (axioms plus joins).
    pub obdd_count: usize,
    pub complete: bool,
    pub derived_steps: usize,
    pub bound_product: usize,
    /// n^2, present when the input-clause count is at most n.
    pub bound_square: Option<usize>,
    pub max_event_support: usize,
    pub events: Vec<EventStats>,
    pub proof_steps: Option<usize>,
    pub warnings: Vec<String>,
}

pub fn stats(script: &RefutationScript, proof: Option<&ResolutionProof>) -> StatsReport {
    let m = script.m;
    let n = script.total_size;
    let events: Vec<EventStats> = script
        .certificates()
        .map(|cert| {
            let emitted = cert.resolvents.len();
            EventStats {
                var: cert.var,
                paths_through: cert.profile.false_paths,
                pairs: cert.pairs.len(),
                emitted,
                skips: cert.skip_count(),
                support: cert.profile.support(),
                excess: cert.profile.excess,
                slack: cert.pairs.len().min(m).saturating_sub(emitted),
            }
        })
        .collect();
    StatsReport {
        outcome: script.outcome,
        input_clauses: m,
        refutation_size: n,
        obdd_count: script.obdd_count(),
        complete: script.complete,
        derived_steps: script.derived_count(),
        bound_product: m * n,
        bound_square: (m <= n).then(|| n * n),
        max_event_support: events.iter().map(|e| e.support).max().unwrap_or(0),
        events,
        proof_steps: proof.map(|p| p.len()),
        warnings: script.warnings.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::parse_dimacs;
    use crate::proof::{check, Verdict};

    fn running_example() -> Cnf {
        parse_dimacs("p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n")
            .unwrap()
            .cnf
    }

    fn derived_clauses(script: &RefutationScript) -> Vec<String> {
        (script.m + 1..=script.clause_db.len())
            .map(|i| script.clause_db.clause(ClauseId(i)).to_string())
            .collect()
    }

    /// Linear schedule over the worked four-clause example: sizes along the
    /// run, the derived clauses, and the checked proof all line up.
    #[test]
    fn running_example_full_run() {
        let cnf = running_example();
        let arts = run_refutation(&cnf, &Schedule::Linear, &RunConfig::default()).unwrap();
        let script = &arts.script;
        assert_eq!(script.outcome, RunOutcome::Refuted);
        assert!(script.complete);
        assert_eq!(script.sizes, vec![2, 2, 2, 1, 4, 4, 2, 1, 0]);
        assert_eq!(script.total_size, 18);
        assert_eq!(script.obdd_count(), 7);
        assert_eq!(derived_clauses(script), vec!["2", "1", "0"]);

        let proof = translate(&cnf, script).unwrap();
        assert_eq!(proof.len(), 7);
        assert_eq!(proof.derived_count(), 3);
        assert_eq!(check(&cnf, &proof), Verdict::Verified);
    }

    #[test]
    fn contradiction_pair_refutes_with_one_elimination() {
        let cnf = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap().cnf;
        let arts = run_refutation(&cnf, &Schedule::Linear, &RunConfig::default()).unwrap();
        let script = &arts.script;
        assert_eq!(script.outcome, RunOutcome::Refuted);
        // the conjunction is a single node over x with both branches false;
        // eliminating it derives the empty clause
        let certs: Vec<_> = script.certificates().collect();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].resolvents.len(), 1);
        let proof = translate(&cnf, script).unwrap();
        assert_eq!(proof.len(), 3);
        assert_eq!(check(&cnf, &proof), Verdict::Verified);
    }

    #[test]
    fn satisfiable_input_is_reported() {
        let cnf = parse_dimacs("p cnf 2 1\n1 2 0\n").unwrap().cnf;
        let arts = run_refutation(&cnf, &Schedule::Linear, &RunConfig::default()).unwrap();
        assert_eq!(arts.script.outcome, RunOutcome::Satisfiable);
        assert!(!arts.script.final_root.is_false());
        assert!(matches!(
            translate(&cnf, &arts.script),
            Err(TranslateError::NotRefuted)
        ));
        let report = stats(&arts.script, None);
        assert_eq!(report.proof_steps, None);
        assert!(report.refutation_size > 0);
    }

    #[test]
    fn empty_clause_in_input_short_circuits() {
        let cnf = parse_dimacs("p cnf 1 2\n0\n1 0\n").unwrap().cnf;
        let arts = run_refutation(&cnf, &Schedule::Linear, &RunConfig::default()).unwrap();
        assert_eq!(arts.script.outcome, RunOutcome::Refuted);
        let proof = translate(&cnf, &arts.script).unwrap();
        assert_eq!(proof.len(), 1);
        assert!(proof.last_clause().unwrap().is_empty());
        assert_eq!(check(&cnf, &proof), Verdict::Verified);
    }

    /// Subsumed input clauses are flagged but the run proceeds.
    #[test]
    fn subsumed_inputs_are_warned_about() {
        let cnf = parse_dimacs("p cnf 2 3\n2 0\n1 2 0\n-2 0\n").unwrap().cnf;
        let arts = run_refutation(&cnf, &Schedule::Linear, &RunConfig::default()).unwrap();
        assert_eq!(arts.script.warnings.len(), 1);
        assert!(arts.script.warnings[0].contains("subsumes"));
        assert_eq!(arts.script.outcome, RunOutcome::Refuted);
        let proof = translate(&cnf, &arts.script).unwrap();
        assert_eq!(check(&cnf, &proof), Verdict::Verified);
    }

    /// Equal-looking input clauses keep distinct indices; the run and the
    /// checker both treat them as separate axioms.
    #[test]
    fn duplicate_input_clauses_keep_their_identities() {
        let cnf = parse_dimacs("p cnf 2 4\n1 2 0\n1 2 0\n-1 0\n-2 0\n")
            .unwrap()
            .cnf;
        let arts = run_refutation(&cnf, &Schedule::Linear, &RunConfig::default()).unwrap();
        assert_eq!(arts.script.outcome, RunOutcome::Refuted);
        assert_eq!(arts.script.m, 4);
        let proof = translate(&cnf, &arts.script).unwrap();
        assert_eq!(check(&cnf, &proof), Verdict::Verified);
    }

    #[test]
    fn schedules_agree_on_the_verdict() {
        let cnf = running_example();
        for schedule in [
            Schedule::Linear,
            Schedule::Balanced,
            Schedule::Explicit(JoinTree::Join(
                Box::new(JoinTree::Join(
                    Box::new(JoinTree::Leaf(4)),
                    Box::new(JoinTree::Leaf(1)),
                )),
                Box::new(JoinTree::Join(
                    Box::new(JoinTree::Leaf(2)),
                    Box::new(JoinTree::Leaf(3)),
                )),
            )),
        ] {
            let arts = run_refutation(&cnf, &schedule, &RunConfig::default()).unwrap();
            assert_eq!(arts.script.outcome, RunOutcome::Refuted);
            let proof = translate(&cnf, &arts.script).unwrap();
            assert_eq!(check(&cnf, &proof), Verdict::Verified);
        }
    }

    #[test]
    fn bad_schedules_are_rejected() {
        let tree = JoinTree::Join(Box::new(JoinTree::Leaf(1)), Box::new(JoinTree::Leaf(1)));
        assert!(matches!(
            Schedule::Explicit(tree).tree(2),
            Err(SimError::BadSchedule(_))
        ));
    }

    #[test]
    fn join_tree_json_shape() {
        let tree = Schedule::Balanced.tree(4).unwrap();
        let json = serde_json::to_string(&tree).unwrap();
        assert_eq!(json, "[[1,2],[3,4]]");
        let back: JoinTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tree);
    }

    #[test]
    fn explicit_order_changes_the_root_variable() {
        let cnf = running_example();
        let config = RunConfig {
            order: Some(vec![Var(3), Var(2), Var(1)]),
            ..RunConfig::default()
        };
        let arts = run_refutation(&cnf, &Schedule::Linear, &config).unwrap();
        assert_eq!(arts.script.outcome, RunOutcome::Refuted);
        let proof = translate(&cnf, &arts.script).unwrap();
        assert_eq!(check(&cnf, &proof), Verdict::Verified);
    }

    #[test]
    fn stats_running_example() {
        let cnf = running_example();
        let arts = run_refutation(&cnf, &Schedule::Linear, &RunConfig::default()).unwrap();
        let proof = translate(&cnf, &arts.script).unwrap();
        let report = stats(&arts.script, Some(&proof));
        assert_eq!(report.refutation_size, 18);
        assert_eq!(report.derived_steps, 3);
        assert_eq!(report.bound_product, 72);
        assert_eq!(report.bound_square, Some(324));
        assert_eq!(report.proof_steps, Some(7));
        assert!(report.derived_steps <= report.bound_product);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["refutation_size"], 18);
    }

    #[test]
    fn empty_formula_is_an_error() {
        assert!(matches!(
            run_refutation(&Cnf::top(), &Schedule::Linear, &RunConfig::default()),
            Err(SimError::EmptyFormula)
        ));
    }

    /// Walks the first two eliminations of the running example by hand and
    /// checks each rebinding: the merged path picks up the fresh resolvent.
    #[test]
    fn rebinding_after_eliminations_step_by_step() {
        use crate::obdd::{FalsePath, ObddStore, VarOrder};

        let cnf = parse_dimacs("p cnf 3 3\n1 -2 0\n2 3 0\n2 -3 0\n")
            .unwrap()
            .cnf;
        let mut db = ClauseDb::from_cnf(&cnf);
        let mut store = ObddStore::new(VarOrder::ascending(3));
        let (root, ann) = conjoin_unreduced(&mut store, &db).unwrap();
        let mut guard: Vec<ClauseId> = (1..=3).map(ClauseId).collect();

        let path = |ints: &[i32]| {
            FalsePath::new(
                ints.iter()
                    .map(|&n| crate::cnf::Lit::from_dimacs(n).unwrap())
                    .collect(),
            )
        };

        // the deepest redundant node tests the last variable
        let z = store.next_reducible(root).unwrap();
        assert_eq!(store.var(z), Var(3));
        let cert = simulate_elimination(&store, &ann, z, &mut db, &guard).unwrap();
        assert_eq!(cert.resolvents, vec![ClauseId(4)]);
        assert_eq!(
            db.clause(ClauseId(4)),
            &crate::cnf::Clause::from_dimacs(&[2])
        );
        guard.extend(cert.resolvents.iter().copied());
        let (root, event) = store.eliminate(root, z).unwrap();
        let ann = ann
            .rebind_after_elimination(&store, &event, &cert, root, &db)
            .unwrap();
        assert_eq!(ann.clause_for(&path(&[1, -2])), Some(ClauseId(4)));
        assert_eq!(ann.clause_for(&path(&[-1, 2])), Some(ClauseId(1)));

        let y = store.next_reducible(root).unwrap();
        assert_eq!(store.var(y), Var(2));
        let cert = simulate_elimination(&store, &ann, y, &mut db, &guard).unwrap();
        assert_eq!(cert.resolvents, vec![ClauseId(5)]);
        assert_eq!(
            db.clause(ClauseId(5)),
            &crate::cnf::Clause::from_dimacs(&[1])
        );
        let (root, event) = store.eliminate(root, y).unwrap();
        let ann = ann
            .rebind_after_elimination(&store, &event, &cert, root, &db)
            .unwrap();
        assert_eq!(ann.clause_for(&path(&[-1])), Some(ClauseId(5)));
        assert!(store.next_reducible(root).is_none());
    }

    /// Eliminating a node no false path crosses emits nothing and leaves
    /// the annotation unchanged.
    #[test]
    fn elimination_off_all_false_paths_is_a_no_op() {
        use crate::obdd::{ObddStore, VarOrder};

        let cnf = parse_dimacs("p cnf 1 1\n-1 0\n").unwrap().cnf;
        let mut db = ClauseDb::from_cnf(&cnf);
        let mut store = ObddStore::new(VarOrder::ascending(2));
        let t = store.true_ref();
        let f = store.false_ref();
        // an extra test on the second variable below the false branch; both
        // of its children are true, so it sits on no false path
        let extra = store.make_node(Var(2), t, t);
        let root = store.make_node(Var(1), extra, f);
        let ann = Annotation::for_axiom(&store, root, ClauseId(1), &db).unwrap();

        let guard = vec![ClauseId(1)];
        let cert = simulate_elimination(&store, &ann, extra, &mut db, &guard).unwrap();
        assert!(cert.pairs.is_empty());
        assert!(cert.resolvents.is_empty());
        let (root2, event) = store.eliminate(root, extra).unwrap();
        let ann2 = ann
            .rebind_after_elimination(&store, &event, &cert, root2, &db)
            .unwrap();
        assert_eq!(ann2.iter().count(), 1);
        assert_eq!(
            ann.iter()
                .map(|(p, id)| (p.clone(), id))
                .collect::<Vec<_>>(),
            ann2.iter()
                .map(|(p, id)| (p.clone(), id))
                .collect::<Vec<_>>()
        );
    }
}
