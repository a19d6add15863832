//! Path-to-clause annotations.
//!
//! An annotation pins down, for every false path of a diagram, one clause of
//! the tracked clause set that the path falsifies. Axiom diagrams have a
//! single false path mapped to their clause; joins pick, for each false path
//! of the conjunction, the lowest-indexed clause among those inherited from
//! a contained operand path; eliminations rebind merged paths to whatever
//! still falsifies them, falling back to the clause recorded for the merged
//! pair.
//!
//! Per-node profiles summarize how often the annotation reuses a clause on
//! the paths through a node; the profile numbers drive the per-event bounds
//! asserted by the simulation layer.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cnf::{Clause, ClauseDb, ClauseId};
use crate::obdd::{EngineError, FalsePath, NodeRef, ObddStore, ReductionEvent};
use crate::oracle::{clauses_obdd_counterexample, OracleConfig, OracleError};
use crate::sim::EliminationCertificate;

/// The falsified-clause map of one diagram: total on its false paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    root: NodeRef,
    map: BTreeMap<FalsePath, ClauseId>,
}

impl Annotation {
    /// Annotation of an axiom diagram: its unique false path (the empty path
    /// for the empty clause) maps to the clause itself.
    pub fn for_axiom(
        store: &ObddStore,
        root: NodeRef,
        id: ClauseId,
        db: &ClauseDb,
    ) -> Result<Annotation, EngineError> {
        let paths = store.false_paths(root)?;
        assert_eq!(
            paths.len(),
            1,
            "a clause diagram has exactly one false path, got {}",
            paths.len()
        );
        let clause = db.clause(id);
        assert!(
            paths[0].falsifies(clause),
            "axiom path `{}` does not falsify {id}",
            paths[0]
        );
        let mut map = BTreeMap::new();
        map.insert(paths[0].clone(), id);
        Ok(Annotation { root, map })
    }

    /// The trivial annotation of the true terminal (no false paths).
    pub fn for_true(store: &ObddStore) -> Annotation {
        Annotation {
            root: store.true_ref(),
            map: BTreeMap::new(),
        }
    }

    /// Annotation of a conjunction. Every false path of the result contains
    /// a false path of an operand; each path takes the lowest clause index
    /// offered by its contained operand paths, which keeps runs reproducible
    /// and prefers input clauses over derived ones.
    pub fn join(
        store: &ObddStore,
        left: &Annotation,
        right: &Annotation,
        joined: NodeRef,
        db: &ClauseDb,
    ) -> Result<Annotation, EngineError> {
        let sources: Vec<(&FalsePath, ClauseId)> = left
            .map
            .iter()
            .chain(right.map.iter())
            .map(|(p, id)| (p, *id))
            .collect();
        let mut map = BTreeMap::new();
        for path in store.false_paths(joined)? {
            let best = sources
                .iter()
                .filter(|(src, _)| path.contains_all(src))
                .map(|(_, id)| *id)
                .min();
            let id = best.unwrap_or_else(|| {
                panic!("false path `{path}` of the conjunction contains no operand false path")
            });
            debug_assert!(path.falsifies(db.clause(id)));
            map.insert(path, id);
        }
        Ok(Annotation { root: joined, map })
    }

    /// Annotation after eliminating a node. Paths that avoided the node keep
    /// their clause. A merged path keeps a prior clause of its pair when that
    /// clause is still falsified (it no longer mentions the pivot), otherwise
    /// it takes the clause recorded for the pair: the guard's witness on a
    /// skip, or the emitted resolvent.
    pub fn rebind_after_elimination(
        &self,
        store: &ObddStore,
        event: &ReductionEvent,
        cert: &EliminationCertificate,
        new_root: NodeRef,
        db: &ClauseDb,
    ) -> Result<Annotation, EngineError> {
        assert_eq!(
            cert.node, event.eliminated,
            "certificate was built for another elimination"
        );
        let mut merged_map: BTreeMap<&FalsePath, ClauseId> = BTreeMap::new();
        for pair in &cert.pairs {
            let prior = [pair.high_clause, pair.low_clause]
                .into_iter()
                .filter(|id| pair.merged.falsifies(db.clause(*id)))
                .min();
            let id = prior.unwrap_or_else(|| pair.action.clause());
            debug_assert!(pair.merged.falsifies(db.clause(id)));
            merged_map.insert(&pair.merged, id);
        }
        let mut map = BTreeMap::new();
        for path in store.false_paths(new_root)? {
            let id = merged_map
                .get(&path)
                .copied()
                .or_else(|| self.map.get(&path).copied())
                .unwrap_or_else(|| {
                    panic!(
                        "path `{path}` survived eliminating {} but has no prior binding",
                        event.eliminated
                    )
                });
            map.insert(path, id);
        }
        Ok(Annotation {
            root: new_root,
            map,
        })
    }

    pub fn root(&self) -> NodeRef {
        self.root
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn clause_for(&self, path: &FalsePath) -> Option<ClauseId> {
        self.map.get(path).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FalsePath, ClauseId)> {
        self.map.iter().map(|(p, id)| (p, *id))
    }

    /// Test/debug helper: overrides one binding, e.g. to build negative
    /// controls for the soundness checker.
    pub fn with_binding(mut self, path: FalsePath, id: ClauseId) -> Annotation {
        self.map.insert(path, id);
        self
    }

    /// Profile of one node: how many false paths run through it, which
    /// clauses the annotation assigns them, and how much reuse there is.
    pub fn profile(&self, store: &ObddStore, node: NodeRef) -> Result<NodeProfile, EngineError> {
        let paths = store.false_paths_through(self.root, node)?;
        let mut per_clause: BTreeMap<ClauseId, usize> = BTreeMap::new();
        for p in &paths {
            let id = self
                .map
                .get(p)
                .copied()
                .unwrap_or_else(|| panic!("annotation is not total: `{p}` unbound"));
            *per_clause.entry(id).or_insert(0) += 1;
        }
        let excess = per_clause.values().map(|c| c - 1).sum();
        Ok(NodeProfile {
            node,
            false_paths: paths.len(),
            clauses: per_clause.keys().copied().collect(),
            per_clause_excess: per_clause
                .into_iter()
                .map(|(id, count)| (id, count - 1))
                .collect(),
            excess,
        })
    }

    /// Largest profile `support` over all reachable inner nodes; feeds the
    /// join-additivity bound.
    pub fn max_support(&self, store: &ObddStore) -> Result<usize, EngineError> {
        let mut best = 0;
        for node in store.reachable(self.root) {
            best = best.max(self.profile(store, node)?.support());
        }
        Ok(best)
    }

    /// Debug dump: the path map plus per-node profiles, as JSON.
    pub fn to_json(&self, store: &ObddStore) -> serde_json::Value {
        let paths: serde_json::Map<String, serde_json::Value> = self
            .map
            .iter()
            .map(|(p, id)| (p.to_string(), serde_json::json!(id.0)))
            .collect();
        let profiles: Vec<serde_json::Value> = store
            .reachable(self.root)
            .into_iter()
            .map(|n| {
                let prof = self.profile(store, n).expect("profiled within budget");
                serde_json::json!({
                    "node": n.to_string(),
                    "false_paths": prof.false_paths,
                    "clauses": prof.clauses.iter().map(|c| c.0).collect::<Vec<_>>(),
                    "excess": prof.excess,
                })
            })
            .collect();
        serde_json::json!({
            "root": self.root.to_string(),
            "paths": paths,
            "profiles": profiles,
        })
    }
}

/// Annotation statistics at one node. `false_paths - excess` always equals
/// the number of distinct clauses, and that quantity bounds the resolvents
/// any elimination of the node can emit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeProfile {
    pub node: NodeRef,
    pub false_paths: usize,
    pub clauses: BTreeSet<ClauseId>,
    pub per_clause_excess: BTreeMap<ClauseId, usize>,
    pub excess: usize,
}

impl NodeProfile {
    /// Number of false paths minus the annotation's reuse; equals the number
    /// of distinct clauses assigned on paths through this node.
    pub fn support(&self) -> usize {
        self.false_paths - self.excess
    }
}

/// Outcome of the faithfulness check between a clause set and an annotated
/// diagram: the two must be logically equivalent, and every false path must
/// falsify its assigned clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faithfulness {
    pub counterexample: Option<crate::cnf::Assignment>,
    pub unfalsified_path: Option<(FalsePath, ClauseId)>,
}

impl Faithfulness {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none() && self.unfalsified_path.is_none()
    }
}

/// Checks that the conjunction of `clause_ids` and the annotated diagram are
/// logically equivalent (by exhaustive enumeration) and that the annotation
/// is sound path-wise.
pub fn check_faithful(
    store: &ObddStore,
    annotation: &Annotation,
    clause_ids: &[ClauseId],
    db: &ClauseDb,
    cfg: &OracleConfig,
) -> Result<Faithfulness, OracleError> {
    let clauses: Vec<&Clause> = clause_ids.iter().map(|id| db.clause(*id)).collect();
    let counterexample = clauses_obdd_counterexample(&clauses, store, annotation.root(), cfg)?;
    let unfalsified_path = annotation
        .iter()
        .find(|(path, id)| !path.falsifies(db.clause(*id)))
        .map(|(path, id)| (path.clone(), id));
    Ok(Faithfulness {
        counterexample,
        unfalsified_path,
    })
}
