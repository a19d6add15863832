//! Ordered binary decision diagrams with structural sharing.
//!
//! The store is append-only: nodes are hash-consed through a unique table,
//! so no two live nodes share `(var, low, high)` and the merging rule holds
//! by construction. Conjunction never applies the elimination rule — nodes
//! with identical children are created on purpose, so that every elimination
//! is an explicit, observable event consumed by the proof simulation.
//!
//! A false path is a root-to-false-terminal path read as the sequence of
//! branch literals. Path enumeration is the backbone of the annotation and
//! simulation layers and is deliberately desk-scale; a configurable budget
//! aborts runs that would enumerate too much.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cnf::{Assignment, Clause, Lit, Var};

static NEXT_STORE_ID: AtomicU32 = AtomicU32::new(0);

/// A total variable order. Rank 0 is the first variable tested on any path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarOrder {
    by_rank: Vec<Var>,
    rank_of: HashMap<Var, u32>,
}

impl VarOrder {
    /// Ascending variable number, the default order.
    pub fn ascending(max_var: u32) -> VarOrder {
        VarOrder::from_permutation((1..=max_var).map(Var).collect())
            .expect("ascending is a permutation")
    }

    /// An explicit permutation; earlier entries are tested first.
    pub fn from_permutation(vars: Vec<Var>) -> Result<VarOrder, EngineError> {
        let mut rank_of = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if rank_of.insert(*v, i as u32).is_some() {
                return Err(EngineError::BadOrder {
                    reason: format!("{v} appears twice"),
                });
            }
        }
        Ok(VarOrder {
            by_rank: vars,
            rank_of,
        })
    }

    pub fn rank(&self, var: Var) -> u32 {
        *self
            .rank_of
            .get(&var)
            .unwrap_or_else(|| panic!("{var} is not covered by the variable order"))
    }

    pub fn contains(&self, var: Var) -> bool {
        self.rank_of.contains_key(&var)
    }

    pub fn len(&self) -> usize {
        self.by_rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_rank.is_empty()
    }

    pub fn vars_by_rank(&self) -> &[Var] {
        &self.by_rank
    }
}

/// Handle to a node in one particular store. Slot 0 is the false terminal,
/// slot 1 the true terminal; inner nodes start at slot 2.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    store: u32,
    slot: u32,
}

const FALSE_SLOT: u32 = 0;
const TRUE_SLOT: u32 = 1;

impl NodeRef {
    pub fn is_false(self) -> bool {
        self.slot == FALSE_SLOT
    }

    pub fn is_true(self) -> bool {
        self.slot == TRUE_SLOT
    }

    pub fn is_terminal(self) -> bool {
        self.slot <= TRUE_SLOT
    }

    pub fn slot(self) -> u32 {
        self.slot
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            FALSE_SLOT => write!(f, "F"),
            TRUE_SLOT => write!(f, "T"),
            s => write!(f, "n{s}"),
        }
    }
}

impl fmt::Debug for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@{}", self.store)
    }
}

impl Serialize for NodeRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Copy, Clone, Debug)]
struct Node {
    var: Var,
    low: NodeRef,
    high: NodeRef,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("node handle belongs to a different store")]
    StoreMismatch,
    #[error("false-path enumeration exceeded the budget of {budget} paths")]
    PathBudgetExceeded { budget: usize },
    #[error("node {node} is not reachable from the given root")]
    NotReachable { node: String },
    #[error("node {node} has distinct children and cannot be eliminated")]
    NotRedundant { node: String },
    #[error("expected an inner node, got terminal {node}")]
    Terminal { node: String },
    #[error("invalid variable order: {reason}")]
    BadOrder { reason: String },
}

/// One application of the elimination rule: `eliminated` was removed and all
/// links to it now reach `replacement`; rebuilt ancestors are listed in
/// `remapped` (old handle, new handle).
#[derive(Clone, Debug, Serialize)]
pub struct ReductionEvent {
    pub eliminated: NodeRef,
    pub var: Var,
    pub replacement: NodeRef,
    pub remapped: Vec<(NodeRef, NodeRef)>,
}

/// A path from the root to the false terminal, as its branch literals in
/// order. Positive literal = true branch, negative = false branch. The empty
/// path stands for the degenerate diagram that *is* the false terminal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FalsePath {
    lits: Vec<Lit>,
}

impl FalsePath {
    pub fn new(lits: Vec<Lit>) -> FalsePath {
        FalsePath { lits }
    }

    pub fn empty() -> FalsePath {
        FalsePath::default()
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.contains(&lit)
    }

    /// Set containment: every literal of `other` occurs in `self`.
    pub fn contains_all(&self, other: &FalsePath) -> bool {
        other.lits.iter().all(|l| self.lits.contains(l))
    }

    /// The path with any literal on `var` removed.
    pub fn without_var(&self, var: Var) -> FalsePath {
        FalsePath {
            lits: self
                .lits
                .iter()
                .copied()
                .filter(|l| l.var() != var)
                .collect(),
        }
    }

    /// True iff every literal of the clause occurs negated on the path, i.e.
    /// no completion of the path can satisfy the clause.
    pub fn falsifies(&self, clause: &Clause) -> bool {
        clause.lits().iter().all(|l| self.contains(l.negated()))
    }
}

impl fmt::Display for FalsePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "");
        }
        let parts: Vec<String> = self.lits.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for FalsePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub const DEFAULT_PATH_BUDGET: usize = 1 << 20;

/// Append-only node store with a unique table and a fixed variable order.
/// Unreachable nodes are retained for the life of the store so that event
/// identities stay stable across reductions.
pub struct ObddStore {
    id: u32,
    order: VarOrder,
    nodes: Vec<Node>,
    unique: HashMap<(Var, NodeRef, NodeRef), NodeRef>,
    path_budget: usize,
}

impl ObddStore {
    pub fn new(order: VarOrder) -> ObddStore {
        ObddStore {
            id: NEXT_STORE_ID.fetch_add(1, Ordering::Relaxed),
            order,
            nodes: Vec::new(),
            unique: HashMap::new(),
            path_budget: DEFAULT_PATH_BUDGET,
        }
    }

    pub fn with_path_budget(order: VarOrder, budget: usize) -> ObddStore {
        let mut s = ObddStore::new(order);
        s.path_budget = budget;
        s
    }

    pub fn set_path_budget(&mut self, budget: usize) {
        self.path_budget = budget;
    }

    pub fn order(&self) -> &VarOrder {
        &self.order
    }

    pub fn false_ref(&self) -> NodeRef {
        NodeRef {
            store: self.id,
            slot: FALSE_SLOT,
        }
    }

    pub fn true_ref(&self) -> NodeRef {
        NodeRef {
            store: self.id,
            slot: TRUE_SLOT,
        }
    }

    fn check(&self, n: NodeRef) -> Result<(), EngineError> {
        if n.store != self.id {
            return Err(EngineError::StoreMismatch);
        }
        Ok(())
    }

    fn assert_local(&self, n: NodeRef) {
        assert_eq!(n.store, self.id, "node handle from a different store");
    }

    fn node(&self, n: NodeRef) -> &Node {
        self.assert_local(n);
        debug_assert!(!n.is_terminal());
        &self.nodes[(n.slot - 2) as usize]
    }

    pub fn var(&self, n: NodeRef) -> Var {
        self.node(n).var
    }

    pub fn low(&self, n: NodeRef) -> NodeRef {
        self.node(n).low
    }

    pub fn high(&self, n: NodeRef) -> NodeRef {
        self.node(n).high
    }

    /// Total nodes ever created, terminals excluded.
    pub fn created_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Hash-consing constructor. Children must test strictly larger variables;
    /// identical children are allowed (no silent elimination).
    pub fn make_node(&mut self, var: Var, low: NodeRef, high: NodeRef) -> NodeRef {
        self.assert_local(low);
        self.assert_local(high);
        let rank = self.order.rank(var);
        for child in [low, high] {
            if !child.is_terminal() {
                assert!(
                    self.order.rank(self.var(child)) > rank,
                    "edge from {var} to {} violates the variable order",
                    self.var(child)
                );
            }
        }
        if let Some(&n) = self.unique.get(&(var, low, high)) {
            return n;
        }
        let slot = self.nodes.len() as u32 + 2;
        let n = NodeRef {
            store: self.id,
            slot,
        };
        self.nodes.push(Node { var, low, high });
        self.unique.insert((var, low, high), n);
        n
    }

    /// The diagram of a single clause: a chain over the clause's variables
    /// with exactly one false path, the one falsifying every literal. The
    /// empty clause maps to the false terminal.
    pub fn clause_obdd(&mut self, clause: &Clause) -> NodeRef {
        let mut lits: Vec<Lit> = clause.lits().to_vec();
        lits.sort_by_key(|l| std::cmp::Reverse(self.order.rank(l.var())));
        let mut acc = self.false_ref();
        let t = self.true_ref();
        for lit in lits {
            acc = if lit.is_positive() {
                self.make_node(lit.var(), acc, t)
            } else {
                self.make_node(lit.var(), t, acc)
            };
        }
        acc
    }

    /// Conjunction by the classic recursive descent: terminal short-circuits,
    /// equal-top split, one-sided descent. Memoized on unordered operand
    /// pairs; the memo is local to this call, the unique table is not.
    pub fn apply_and(&mut self, a: NodeRef, b: NodeRef) -> Result<NodeRef, EngineError> {
        self.check(a)?;
        self.check(b)?;
        let mut memo: HashMap<(NodeRef, NodeRef), NodeRef> = HashMap::new();
        Ok(self.apply_and_rec(a, b, &mut memo))
    }

    fn apply_and_rec(
        &mut self,
        a: NodeRef,
        b: NodeRef,
        memo: &mut HashMap<(NodeRef, NodeRef), NodeRef>,
    ) -> NodeRef {
        if a.is_false() || b.is_false() {
            return self.false_ref();
        }
        if a.is_true() {
            return b;
        }
        if b.is_true() {
            return a;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&n) = memo.get(&key) {
            return n;
        }
        let (va, vb) = (self.var(a), self.var(b));
        let (ra, rb) = (self.order.rank(va), self.order.rank(vb));
        let result = if ra == rb {
            let low = self.apply_and_rec(self.low(a), self.low(b), memo);
            let high = self.apply_and_rec(self.high(a), self.high(b), memo);
            self.make_node(va, low, high)
        } else if ra < rb {
            let low = self.apply_and_rec(self.low(a), b, memo);
            let high = self.apply_and_rec(self.high(a), b, memo);
            self.make_node(va, low, high)
        } else {
            let low = self.apply_and_rec(a, self.low(b), memo);
            let high = self.apply_and_rec(a, self.high(b), memo);
            self.make_node(vb, low, high)
        };
        memo.insert(key, result);
        result
    }

    /// Structural isomorphism. With the unique table in force this coincides
    /// with handle equality; `iso_recursive` is the independent check.
    pub fn iso(&self, a: NodeRef, b: NodeRef) -> bool {
        self.assert_local(a);
        self.assert_local(b);
        a == b
    }

    /// Recursive isomorphism test that does not rely on hash consing.
    pub fn iso_recursive(&self, a: NodeRef, b: NodeRef) -> bool {
        if a.is_terminal() || b.is_terminal() {
            return a.is_false() == b.is_false() && a.is_true() == b.is_true();
        }
        self.var(a) == self.var(b)
            && self.iso_recursive(self.low(a), self.low(b))
            && self.iso_recursive(self.high(a), self.high(b))
    }

    /// Inner nodes reachable from `root`, in ascending slot order.
    pub fn reachable(&self, root: NodeRef) -> Vec<NodeRef> {
        self.assert_local(root);
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if n.is_terminal() || !seen.insert(n) {
                continue;
            }
            stack.push(self.low(n));
            stack.push(self.high(n));
        }
        seen.into_iter().collect()
    }

    /// Size of the diagram rooted at `root`: the number of reachable inner
    /// nodes. Unreachable (retired) nodes do not count.
    pub fn size(&self, root: NodeRef) -> usize {
        self.reachable(root).len()
    }

    pub fn reachable_vars(&self, root: NodeRef) -> Vec<Var> {
        self.reachable(root).iter().map(|&n| self.var(n)).collect()
    }

    pub fn is_reachable(&self, root: NodeRef, node: NodeRef) -> bool {
        if node == root {
            return true;
        }
        self.reachable(root).contains(&node)
    }

    pub fn eval(&self, root: NodeRef, a: &Assignment) -> bool {
        let mut n = root;
        while !n.is_terminal() {
            let v = a
                .value(self.var(n))
                .unwrap_or_else(|| panic!("assignment misses {}", self.var(n)));
            n = if v { self.high(n) } else { self.low(n) };
        }
        n.is_true()
    }

    /// All false paths of `root` in depth-first order, false branch first;
    /// that is lexicographic under the variable order with the negative
    /// literal before the positive one.
    pub fn false_paths(&self, root: NodeRef) -> Result<Vec<FalsePath>, EngineError> {
        self.false_paths_filtered(root, None)
    }

    /// False paths passing through `through`.
    pub fn false_paths_through(
        &self,
        root: NodeRef,
        through: NodeRef,
    ) -> Result<Vec<FalsePath>, EngineError> {
        self.false_paths_filtered(root, Some(through))
    }

    fn false_paths_filtered(
        &self,
        root: NodeRef,
        through: Option<NodeRef>,
    ) -> Result<Vec<FalsePath>, EngineError> {
        self.check(root)?;
        if let Some(t) = through {
            self.check(t)?;
        }
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.walk_false_paths(
            root,
            through,
            through.is_none_or(|t| t == root),
            &mut prefix,
            &mut out,
        )?;
        Ok(out)
    }

    fn walk_false_paths(
        &self,
        node: NodeRef,
        through: Option<NodeRef>,
        hit: bool,
        prefix: &mut Vec<Lit>,
        out: &mut Vec<FalsePath>,
    ) -> Result<(), EngineError> {
        if node.is_terminal() {
            if node.is_false() && hit {
                if out.len() >= self.path_budget {
                    return Err(EngineError::PathBudgetExceeded {
                        budget: self.path_budget,
                    });
                }
                out.push(FalsePath::new(prefix.clone()));
            }
            return Ok(());
        }
        let var = self.var(node);
        for (child, lit) in [
            (self.low(node), Lit::negative(var)),
            (self.high(node), Lit::positive(var)),
        ] {
            let child_hit = hit || through == Some(child);
            prefix.push(lit);
            self.walk_false_paths(child, through, child_hit, prefix, out)?;
            prefix.pop();
        }
        Ok(())
    }

    /// Groups the false paths through an eliminable node `p` into pairs that
    /// agree everywhere except the branch taken at `p`. Returned as
    /// (path via true branch, path via false branch), ordered by the merged
    /// path. Requires `low(p) == high(p)`, which makes the pairing total.
    pub fn paired_paths_at(
        &self,
        root: NodeRef,
        p: NodeRef,
    ) -> Result<Vec<(FalsePath, FalsePath)>, EngineError> {
        self.check(root)?;
        self.check(p)?;
        if p.is_terminal() {
            return Err(EngineError::Terminal {
                node: p.to_string(),
            });
        }
        if self.low(p) != self.high(p) {
            return Err(EngineError::NotRedundant {
                node: p.to_string(),
            });
        }
        let var = self.var(p);
        let mut by_merged: std::collections::BTreeMap<
            FalsePath,
            (Option<FalsePath>, Option<FalsePath>),
        > = std::collections::BTreeMap::new();
        for path in self.false_paths_through(root, p)? {
            let merged = path.without_var(var);
            let entry = by_merged.entry(merged).or_default();
            if path.contains(Lit::positive(var)) {
                entry.0 = Some(path);
            } else {
                entry.1 = Some(path);
            }
        }
        let mut pairs = Vec::with_capacity(by_merged.len());
        for (merged, (high, low)) in by_merged {
            match (high, low) {
                (Some(h), Some(l)) => pairs.push((h, l)),
                _ => panic!(
                    "false paths through {p} do not pair up around {var} at merged path `{merged}`"
                ),
            }
        }
        Ok(pairs)
    }

    /// The next node the reduction loop should eliminate: among reachable
    /// nodes with identical children, the one testing the latest variable in
    /// the order; ties go to the earliest-created node. Bottom-up scheduling
    /// keeps children fully reduced before their parents are considered.
    pub fn next_reducible(&self, root: NodeRef) -> Option<NodeRef> {
        self.reachable(root)
            .into_iter()
            .filter(|&n| self.low(n) == self.high(n))
            .max_by_key(|&n| (self.order.rank(self.var(n)), std::cmp::Reverse(n.slot())))
    }

    /// Applies the elimination rule at `p`: every link to `p` is redirected
    /// to the root of its (shared) child by rebuilding the ancestors of `p`.
    /// Hash consing may merge rebuilt ancestors with existing nodes, which is
    /// exactly the merging rule.
    pub fn eliminate(
        &mut self,
        root: NodeRef,
        p: NodeRef,
    ) -> Result<(NodeRef, ReductionEvent), EngineError> {
        self.check(root)?;
        self.check(p)?;
        if p.is_terminal() {
            return Err(EngineError::Terminal {
                node: p.to_string(),
            });
        }
        if !self.is_reachable(root, p) {
            return Err(EngineError::NotReachable {
                node: p.to_string(),
            });
        }
        if self.low(p) != self.high(p) {
            return Err(EngineError::NotRedundant {
                node: p.to_string(),
            });
        }
        let replacement = self.high(p);
        let before = self.size(root);
        let mut rebuilt: HashMap<NodeRef, NodeRef> = HashMap::new();
        let new_root = self.substitute(root, p, replacement, &mut rebuilt);
        let mut remapped: Vec<(NodeRef, NodeRef)> = rebuilt
            .into_iter()
            .filter(|(old, new)| old != new && *old != p)
            .collect();
        remapped.sort();
        let event = ReductionEvent {
            eliminated: p,
            var: self.var(p),
            replacement,
            remapped,
        };
        debug_assert!(
            self.size(new_root) < before,
            "elimination must shrink the diagram"
        );
        debug_assert!(!self.is_reachable(new_root, p));
        Ok((new_root, event))
    }

    fn substitute(
        &mut self,
        node: NodeRef,
        from: NodeRef,
        to: NodeRef,
        memo: &mut HashMap<NodeRef, NodeRef>,
    ) -> NodeRef {
        if node == from {
            return to;
        }
        if node.is_terminal() {
            return node;
        }
        if let Some(&n) = memo.get(&node) {
            return n;
        }
        let low = self.substitute(self.low(node), from, to, memo);
        let high = self.substitute(self.high(node), from, to, memo);
        let result = if low == self.low(node) && high == self.high(node) {
            node
        } else {
            self.make_node(self.var(node), low, high)
        };
        memo.insert(node, result);
        result
    }

    /// Eliminates until no node has identical children. Merging needs no
    /// steps of its own: the unique table keeps it invariant throughout.
    pub fn reduce(&mut self, root: NodeRef) -> (NodeRef, Vec<ReductionEvent>) {
        let mut root = root;
        let mut events = Vec::new();
        let start = self.size(root);
        while let Some(p) = self.next_reducible(root) {
            let (next, event) = self
                .eliminate(root, p)
                .expect("candidate satisfies the precondition");
            events.push(event);
            root = next;
        }
        debug_assert!(events.len() <= start);
        (root, events)
    }

    /// GraphViz rendering: solid edges for true branches, dotted for false,
    /// terminals as boxed `t`/`f`.
    pub fn dot(&self, root: NodeRef) -> String {
        let nodes = self.reachable(root);
        let mut out = String::from("digraph obdd {\n");
        let uses_false = root.is_false()
            || nodes
                .iter()
                .any(|&n| self.low(n).is_false() || self.high(n).is_false());
        let uses_true = root.is_true()
            || nodes
                .iter()
                .any(|&n| self.low(n).is_true() || self.high(n).is_true());
        if uses_false {
            out.push_str("  f [shape=box,label=\"f\"];\n");
        }
        if uses_true {
            out.push_str("  t [shape=box,label=\"t\"];\n");
        }
        for &n in &nodes {
            out.push_str(&format!("  n{} [label=\"{}\"];\n", n.slot(), self.var(n)));
        }
        fn target(n: NodeRef) -> String {
            if n.is_false() {
                "f".into()
            } else if n.is_true() {
                "t".into()
            } else {
                format!("n{}", n.slot())
            }
        }
        for &n in &nodes {
            out.push_str(&format!("  n{} -> {};\n", n.slot(), target(self.high(n))));
            out.push_str(&format!(
                "  n{} -> {} [style=dotted];\n",
                n.slot(),
                target(self.low(n))
            ));
        }
        out.push_str("}\n");
        out
    }

    /// Stable textual dump of the reachable node table: a `root` line, then
    /// one `id var low high` line per inner node in id order, with terminals
    /// written F and T.
    pub fn dump(&self, root: NodeRef) -> String {
        fn cell(n: NodeRef) -> String {
            if n.is_false() {
                "F".into()
            } else if n.is_true() {
                "T".into()
            } else {
                n.slot().to_string()
            }
        }
        let mut out = format!("root {}\n", cell(root));
        for n in self.reachable(root) {
            out.push_str(&format!(
                "{} {} {} {}\n",
                n.slot(),
                self.var(n).0,
                cell(self.low(n)),
                cell(self.high(n))
            ));
        }
        out
    }
}
