//! Refutes unsatisfiable CNFs by conjoining per-clause ordered binary
//! decision diagrams, and turns every such refutation into a resolution
//! proof by simulating each node elimination with resolution steps. The
//! derived proof is replayed through an independent checker, and the size
//! bounds that make the translation polynomial are asserted at runtime.

pub mod annotation;
pub mod cnf;
pub mod gen;
pub mod obdd;
pub mod oracle;
pub mod proof;
pub mod sim;

pub use annotation::{check_faithful, Annotation, NodeProfile};
pub use cnf::{parse_dimacs, resolve, Assignment, Clause, ClauseDb, ClauseId, Cnf, Lit, Var};
pub use obdd::{FalsePath, NodeRef, ObddStore, VarOrder};
pub use oracle::{brute_force_status, OracleConfig, SatStatus};
pub use proof::{check, read_trace, write_trace, ResolutionProof, Verdict};
pub use sim::{
    run_refutation, simulate_elimination, stats, translate, RefutationScript, RunConfig,
    RunOutcome, Schedule,
};
