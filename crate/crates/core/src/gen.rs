//! Formula generators and fixtures: pigeonhole formulas, their doubled
//! variants, oracle-certified random unsatisfiable instances, and the two
//! worked examples used across the test suite.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{Clause, Cnf, Lit, Var};
use crate::oracle::{brute_force_status, OracleConfig, OracleError, SatStatus};

/// Pigeonhole formula: n+1 pigeons into n holes. Pigeon clauses first, then
/// one conflict clause per hole and pigeon pair. Variable p(i,j) is numbered
/// row-major: (i-1)*n + j.
pub fn php(n: u32) -> Cnf {
    assert!(n >= 1);
    let var = |i: u32, j: u32| Var((i - 1) * n + j);
    let mut clauses = Vec::new();
    for i in 1..=n + 1 {
        let lits = (1..=n).map(|j| Lit::positive(var(i, j)));
        clauses.push(Clause::new(lits).expect("distinct variables"));
    }
    for k in 1..=n {
        for i in 1..=n {
            for j in i + 1..=n + 1 {
                let c = Clause::new([Lit::negative(var(i, k)), Lit::negative(var(j, k))])
                    .expect("distinct variables");
                clauses.push(c);
            }
        }
    }
    Cnf::new(clauses)
}

/// Doubles the pigeonhole formula over a fresh first variable p0: for every
/// clause C the result contains both p0 | C and -p0 | C, adjacent and in the
/// original clause order. All pigeonhole variables shift up by one.
pub fn php_doubled(n: u32) -> Cnf {
    let base = php(n);
    let p0 = Var(1);
    let mut clauses = Vec::with_capacity(2 * base.len());
    for clause in base.clauses() {
        let shifted: Vec<Lit> = clause
            .lits()
            .iter()
            .map(|l| Lit::new(Var(l.var().0 + 1), l.is_positive()))
            .collect();
        for first in [Lit::positive(p0), Lit::negative(p0)] {
            let mut lits = shifted.clone();
            lits.push(first);
            clauses.push(Clause::new(lits).expect("fresh variable"));
        }
    }
    Cnf::new(clauses)
}

/// The two formulas worked through step by step in the documentation and
/// acceptance tests.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Fixture {
    /// (x | -y) & (y | z) & (y | -z) & -x over x=1, y=2, z=3.
    RunningExample,
    /// Eight ternary clauses over x=1, y=2, z=3, v=4, w=5 whose conjunction
    /// has a root with identical branches; satisfiable, used to study a
    /// single root elimination.
    EightClause,
}

impl Fixture {
    pub fn parse(name: &str) -> Option<Fixture> {
        match name {
            "running-example" => Some(Fixture::RunningExample),
            "eight-clause-example" => Some(Fixture::EightClause),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fixture::RunningExample => "running-example",
            Fixture::EightClause => "eight-clause-example",
        }
    }
}

pub fn fixture(f: Fixture) -> Cnf {
    let rows: &[&[i32]] = match f {
        Fixture::RunningExample => &[&[1, -2], &[2, 3], &[2, -3], &[-1]],
        Fixture::EightClause => &[
            &[-1, -2, -4],
            &[-1, -3, -5],
            &[-1, 2, -4],
            &[-1, 3, -5],
            &[1, -3, -4],
            &[1, -2, -5],
            &[1, 3, -4],
            &[1, 2, -5],
        ],
    };
    Cnf::new(rows.iter().map(|r| Clause::from_dimacs(r)).collect())
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("no unsatisfiable instance found within {attempts} attempts")]
    BudgetExhausted { attempts: usize },
}

#[derive(Clone, Debug)]
pub struct RandomUnsatConfig {
    pub vars: u32,
    pub clauses: usize,
    pub seed: u64,
    pub max_attempts: usize,
    pub oracle: OracleConfig,
}

impl RandomUnsatConfig {
    pub fn new(vars: u32, clauses: usize, seed: u64) -> Self {
        RandomUnsatConfig {
            vars,
            clauses,
            seed,
            max_attempts: 20_000,
            oracle: OracleConfig::default(),
        }
    }
}

/// Rejection-samples random CNFs of 2- and 3-literal clauses until the
/// brute-force oracle certifies one unsatisfiable. Deterministic in the
/// seed.
pub fn random_unsat(cfg: &RandomUnsatConfig) -> Result<Cnf, GenError> {
    if cfg.vars as usize > cfg.oracle.max_vars {
        return Err(OracleError::TooLarge {
            vars: cfg.vars as usize,
            limit: cfg.oracle.max_vars,
        }
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.max_attempts {
        let mut clauses = Vec::with_capacity(cfg.clauses);
        for _ in 0..cfg.clauses {
            let width = (*[2usize, 3].choose(&mut rng).unwrap()).min(cfg.vars as usize);
            let vars = rand::seq::index::sample(&mut rng, cfg.vars as usize, width);
            let lits = vars
                .iter()
                .map(|v| Lit::new(Var(v as u32 + 1), rng.gen_bool(0.5)));
            clauses.push(Clause::new(lits).expect("distinct variables"));
        }
        let cnf = Cnf::new(clauses);
        if brute_force_status(&cnf, &cfg.oracle)? == SatStatus::Unsatisfiable {
            return Ok(cnf);
        }
    }
    Err(GenError::BudgetExhausted {
        attempts: cfg.max_attempts,
    })
}

/// The standing test corpus: scans seeds from 0 upward, deriving per-seed
/// sizes (4..=10 variables, clause counts capped at 25), and keeps the first
/// `count` seeds that yield an unsatisfiable instance. Deterministic.
pub fn unsat_corpus(count: usize) -> Vec<(String, Cnf)> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let vars = 4 + (seed % 7) as u32;
        let clauses = usize::min(25, (vars as usize * 14).div_ceil(5) + (seed % 4) as usize);
        let cfg = RandomUnsatConfig {
            max_attempts: 500,
            ..RandomUnsatConfig::new(vars, clauses, seed)
        };
        if let Ok(cnf) = random_unsat(&cfg) {
            out.push((format!("rnd-{seed}"), cnf));
        }
        seed += 1;
    }
    out
}
