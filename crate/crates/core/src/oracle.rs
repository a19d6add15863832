//! Brute-force semantic oracle for small variable universes.
//!
//! Everything here enumerates the full assignment space, so callers must stay
//! under the configured variable limit. With the `parallel` feature the sweep
//! runs on rayon; the sequential path is always available for comparison.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cnf::{Assignment, Clause, Cnf, Var};
use crate::obdd::{NodeRef, ObddStore};

/// Limits for exhaustive enumeration.
#[derive(Copy, Clone, Debug)]
pub struct OracleConfig {
    pub max_vars: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_vars: 20 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("universe has {vars} variables, above the oracle limit {limit}")]
    TooLarge { vars: usize, limit: usize },
}

/// Outcome of the brute-force satisfiability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatStatus {
    Satisfiable(Assignment),
    Unsatisfiable,
}

impl SatStatus {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatStatus::Satisfiable(_))
    }
}

/// Finds the lowest mask in `0..2^bits` accepted by `pred`, sequentially.
pub fn first_mask_seq(bits: usize, pred: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    (0..1u64 << bits).find(|&m| pred(m))
}

/// Finds the lowest mask in `0..2^bits` accepted by `pred`, on rayon.
#[cfg(feature = "parallel")]
pub fn first_mask_par(bits: usize, pred: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    use rayon::prelude::*;
    (0..1u64 << bits).into_par_iter().find_first(|&m| pred(m))
}

// Below this size the rayon setup costs more than the sweep itself.
const PARALLEL_THRESHOLD_BITS: usize = 12;

/// Feature-dispatched sweep; both paths return the lowest matching mask.
pub fn first_mask(bits: usize, pred: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    #[cfg(feature = "parallel")]
    {
        if bits >= PARALLEL_THRESHOLD_BITS {
            return first_mask_par(bits, pred);
        }
    }
    first_mask_seq(bits, pred)
}

/// Evaluates clauses and diagrams against a mask over a sorted universe,
/// without materializing an `Assignment` per mask.
pub struct MaskEval<'a> {
    vars: &'a [Var],
}

impl<'a> MaskEval<'a> {
    pub fn new(vars: &'a [Var]) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        MaskEval { vars }
    }

    fn var_bit(&self, var: Var, mask: u64) -> bool {
        let i = self
            .vars
            .binary_search(&var)
            .expect("variable inside the enumeration universe");
        mask >> i & 1 == 1
    }

    pub fn clause(&self, clause: &Clause, mask: u64) -> bool {
        clause
            .lits()
            .iter()
            .any(|l| self.var_bit(l.var(), mask) == l.is_positive())
    }

    pub fn cnf(&self, cnf: &Cnf, mask: u64) -> bool {
        cnf.clauses().iter().all(|c| self.clause(c, mask))
    }

    pub fn all_clauses(&self, clauses: &[&Clause], mask: u64) -> bool {
        clauses.iter().all(|c| self.clause(c, mask))
    }

    pub fn obdd(&self, store: &ObddStore, root: NodeRef, mask: u64) -> bool {
        let mut node = root;
        while !node.is_terminal() {
            let var = store.var(node);
            node = if self.var_bit(var, mask) {
                store.high(node)
            } else {
                store.low(node)
            };
        }
        node.is_true()
    }
}

// masks live in a u64, so the sweep cannot go past 62 variables regardless
// of the configured limit
const HARD_LIMIT: usize = 62;

fn check_limit(universe: &[Var], cfg: &OracleConfig) -> Result<(), OracleError> {
    let limit = cfg.max_vars.min(HARD_LIMIT);
    if universe.len() > limit {
        return Err(OracleError::TooLarge {
            vars: universe.len(),
            limit,
        });
    }
    Ok(())
}

fn sorted_universe(vars: impl IntoIterator<Item = Var>) -> Vec<Var> {
    let set: BTreeSet<Var> = vars.into_iter().collect();
    set.into_iter().collect()
}

/// Enumerates every assignment over the formula's variables.
pub fn brute_force_status(cnf: &Cnf, cfg: &OracleConfig) -> Result<SatStatus, OracleError> {
    let universe = sorted_universe(cnf.vars());
    check_limit(&universe, cfg)?;
    let eval = MaskEval::new(&universe);
    match first_mask(universe.len(), |m| eval.cnf(cnf, m)) {
        Some(mask) => Ok(SatStatus::Satisfiable(Assignment::from_mask(
            &universe, mask,
        ))),
        None => Ok(SatStatus::Unsatisfiable),
    }
}

/// Sequential variant of [`brute_force_status`], kept for benchmarking.
pub fn brute_force_status_seq(cnf: &Cnf, cfg: &OracleConfig) -> Result<SatStatus, OracleError> {
    let universe = sorted_universe(cnf.vars());
    check_limit(&universe, cfg)?;
    let eval = MaskEval::new(&universe);
    match first_mask_seq(universe.len(), |m| eval.cnf(cnf, m)) {
        Some(mask) => Ok(SatStatus::Satisfiable(Assignment::from_mask(
            &universe, mask,
        ))),
        None => Ok(SatStatus::Unsatisfiable),
    }
}

/// Parallel variant of [`brute_force_status`], kept for benchmarking.
#[cfg(feature = "parallel")]
pub fn brute_force_status_par(cnf: &Cnf, cfg: &OracleConfig) -> Result<SatStatus, OracleError> {
    let universe = sorted_universe(cnf.vars());
    check_limit(&universe, cfg)?;
    let eval = MaskEval::new(&universe);
    match first_mask_par(universe.len(), |m| eval.cnf(cnf, m)) {
        Some(mask) => Ok(SatStatus::Satisfiable(Assignment::from_mask(
            &universe, mask,
        ))),
        None => Ok(SatStatus::Unsatisfiable),
    }
}

/// Checks whether a clause set and a diagram agree on every assignment over
/// their joint variables; returns a counterexample if not.
pub fn clauses_obdd_counterexample(
    clauses: &[&Clause],
    store: &ObddStore,
    root: NodeRef,
    cfg: &OracleConfig,
) -> Result<Option<Assignment>, OracleError> {
    let universe = sorted_universe(
        clauses
            .iter()
            .flat_map(|c| c.vars())
            .chain(store.reachable_vars(root)),
    );
    check_limit(&universe, cfg)?;
    let eval = MaskEval::new(&universe);
    let hit = first_mask(universe.len(), |m| {
        eval.all_clauses(clauses, m) != eval.obdd(store, root, m)
    });
    Ok(hit.map(|m| Assignment::from_mask(&universe, m)))
}

/// Checks whether two diagrams in the same store compute the same function.
pub fn obdd_counterexample(
    store: &ObddStore,
    a: NodeRef,
    b: NodeRef,
    cfg: &OracleConfig,
) -> Result<Option<Assignment>, OracleError> {
    let universe = sorted_universe(
        store
            .reachable_vars(a)
            .into_iter()
            .chain(store.reachable_vars(b)),
    );
    check_limit(&universe, cfg)?;
    let eval = MaskEval::new(&universe);
    let hit = first_mask(universe.len(), |m| {
        eval.obdd(store, a, m) != eval.obdd(store, b, m)
    });
    Ok(hit.map(|m| Assignment::from_mask(&universe, m)))
}
