//! Resolution proofs: the step model, a text trace format, and an
//! independent checker.
//!
//! This module deliberately depends on nothing but the `cnf` layer, so the
//! checker shares no code path with the diagram engine whose output it
//! verifies.
//!
//! Trace format, one step per line, LF-terminated ASCII decimal:
//!
//! ```text
//! <id> <lit>... 0 <parent-id> <parent-id> 0
//! ```
//!
//! Axioms carry an empty parent list (`<id> <lit>... 0 0`). Ids are strictly
//! increasing and parents must refer to earlier ids.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cnf::{resolve_on, Clause, Cnf, Lit, ResolveError, Var};

/// One step of a resolution proof. Parent fields are 1-based step indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProofStep {
    Axiom {
        clause: Clause,
    },
    Resolvent {
        clause: Clause,
        left: usize,
        right: usize,
        /// Pivot variable when the producer recorded it; checked if present.
        pivot: Option<Var>,
    },
}

impl ProofStep {
    pub fn clause(&self) -> &Clause {
        match self {
            ProofStep::Axiom { clause } => clause,
            ProofStep::Resolvent { clause, .. } => clause,
        }
    }
}

/// A sequence of axioms and resolvents; a refutation ends in the empty
/// clause.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResolutionProof {
    steps: Vec<ProofStep>,
}

impl ResolutionProof {
    pub fn new() -> ResolutionProof {
        ResolutionProof::default()
    }

    pub fn push(&mut self, step: ProofStep) -> usize {
        self.steps.push(step);
        self.steps.len()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// 1-based access.
    pub fn step(&self, idx: usize) -> &ProofStep {
        &self.steps[idx - 1]
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    /// Test helper: replaces a step in place (1-based).
    pub fn replace_step(&mut self, idx: usize, step: ProofStep) {
        self.steps[idx - 1] = step;
    }

    /// Test helper: drops the last step.
    pub fn truncate_last(&mut self) {
        self.steps.pop();
    }

    pub fn last_clause(&self) -> Option<&Clause> {
        self.steps.last().map(|s| s.clause())
    }

    pub fn derived_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, ProofStep::Resolvent { .. }))
            .count()
    }
}

/// Why a proof failed to check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CheckFailure {
    EmptyProof,
    AxiomNotInFormula,
    ParentOutOfOrder,
    NotAValidResolvent { detail: String },
    FinalClauseNotEmpty,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFailure::EmptyProof => write!(f, "proof has no steps"),
            CheckFailure::AxiomNotInFormula => write!(f, "axiom clause is not in the formula"),
            CheckFailure::ParentOutOfOrder => {
                write!(f, "parents must be distinct earlier steps")
            }
            CheckFailure::NotAValidResolvent { detail } => {
                write!(f, "not a valid resolvent: {detail}")
            }
            CheckFailure::FinalClauseNotEmpty => write!(f, "final clause not empty"),
        }
    }
}

/// Checker verdict: verified, or the first failing step with the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Verified,
    Failed { step: usize, reason: CheckFailure },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => write!(f, "OK"),
            Verdict::Failed { step, reason } => write!(f, "FAIL at step {step}: {reason}"),
        }
    }
}

/// Replays the proof against the formula: every axiom must be an input
/// clause, every resolvent must equal the resolution of its parents on a
/// unique complementary pair, and the last clause must be empty.
pub fn check(cnf: &Cnf, proof: &ResolutionProof) -> Verdict {
    if proof.is_empty() {
        return Verdict::Failed {
            step: 0,
            reason: CheckFailure::EmptyProof,
        };
    }
    for (i, step) in proof.steps().iter().enumerate() {
        let idx = i + 1;
        match step {
            ProofStep::Axiom { clause } => {
                if !cnf.contains_clause(clause) {
                    return Verdict::Failed {
                        step: idx,
                        reason: CheckFailure::AxiomNotInFormula,
                    };
                }
            }
            ProofStep::Resolvent {
                clause,
                left,
                right,
                pivot,
            } => {
                if *left == 0 || *right == 0 || *left >= idx || *right >= idx || left == right {
                    return Verdict::Failed {
                        step: idx,
                        reason: CheckFailure::ParentOutOfOrder,
                    };
                }
                let c = proof.step(*left).clause();
                let d = proof.step(*right).clause();
                match resolve_on(c, d) {
                    Ok((expected, var)) => {
                        if &expected != clause {
                            return Verdict::Failed {
                                step: idx,
                                reason: CheckFailure::NotAValidResolvent {
                                    detail: format!(
                                        "resolving steps {left} and {right} gives `{expected}`, not `{clause}`"
                                    ),
                                },
                            };
                        }
                        if let Some(p) = pivot {
                            if *p != var {
                                return Verdict::Failed {
                                    step: idx,
                                    reason: CheckFailure::NotAValidResolvent {
                                        detail: format!(
                                            "recorded pivot {p} but the complementary pair is on {var}"
                                        ),
                                    },
                                };
                            }
                        }
                    }
                    Err(ResolveError::NotResolvable) => {
                        return Verdict::Failed {
                            step: idx,
                            reason: CheckFailure::NotAValidResolvent {
                                detail: "parents share no complementary pair".into(),
                            },
                        }
                    }
                    Err(ResolveError::TautologicalResolvent) => {
                        return Verdict::Failed {
                            step: idx,
                            reason: CheckFailure::NotAValidResolvent {
                                detail: "parents share two or more complementary pairs".into(),
                            },
                        }
                    }
                }
            }
        }
    }
    if !proof.last_clause().expect("non-empty").is_empty() {
        return Verdict::Failed {
            step: proof.len(),
            reason: CheckFailure::FinalClauseNotEmpty,
        };
    }
    Verdict::Verified
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: malformed step: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: ids must be strictly increasing")]
    NonIncreasingId { line: usize },
    #[error("line {line}: reference to unknown step id {id}")]
    UnknownParent { line: usize, id: u64 },
    #[error("line {line}: step clause is tautological")]
    Tautology { line: usize },
}

/// Renders the proof in the trace format above, with dense 1-based ids and
/// parents ordered low-to-high.
pub fn write_trace(proof: &ResolutionProof) -> String {
    let mut out = String::new();
    for (i, step) in proof.steps().iter().enumerate() {
        let id = i + 1;
        out.push_str(&id.to_string());
        for lit in step.clause().lits() {
            out.push(' ');
            out.push_str(&lit.to_dimacs().to_string());
        }
        out.push_str(" 0");
        if let ProofStep::Resolvent { left, right, .. } = step {
            let (a, b) = (left.min(right), left.max(right));
            out.push_str(&format!(" {a} {b}"));
        }
        out.push_str(" 0\n");
    }
    out
}

/// Parses a trace. Ids may be sparse but must increase; parents must name
/// earlier steps. Semantic validity is left to [`check`].
pub fn read_trace(text: &str) -> Result<ResolutionProof, TraceError> {
    let mut proof = ResolutionProof::new();
    // maps trace ids to 1-based step indices
    let mut id_of: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    let mut last_id: Option<u64> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut nums = Vec::new();
        for token in trimmed.split_whitespace() {
            let n: i64 = token.parse().map_err(|_| TraceError::Malformed {
                line,
                reason: format!("`{token}` is not an integer"),
            })?;
            nums.push(n);
        }
        let mut it = nums.into_iter();
        let id = match it.next() {
            Some(n) if n > 0 => n as u64,
            _ => {
                return Err(TraceError::Malformed {
                    line,
                    reason: "missing positive step id".into(),
                })
            }
        };
        if last_id.is_some_and(|prev| id <= prev) {
            return Err(TraceError::NonIncreasingId { line });
        }
        let mut lits = Vec::new();
        let mut saw_zero = false;
        for n in it.by_ref() {
            if n == 0 {
                saw_zero = true;
                break;
            }
            let lit = i32::try_from(n)
                .ok()
                .and_then(Lit::from_dimacs)
                .ok_or_else(|| TraceError::Malformed {
                    line,
                    reason: format!("literal {n} out of range"),
                })?;
            lits.push(lit);
        }
        if !saw_zero {
            return Err(TraceError::Malformed {
                line,
                reason: "clause not terminated by 0".into(),
            });
        }
        let mut parents = Vec::new();
        let mut terminated = false;
        for n in it.by_ref() {
            if n == 0 {
                terminated = true;
                break;
            }
            if n < 0 {
                return Err(TraceError::Malformed {
                    line,
                    reason: "negative parent id".into(),
                });
            }
            parents.push(n as u64);
        }
        if !terminated || it.next().is_some() {
            return Err(TraceError::Malformed {
                line,
                reason: "expected `0` closing the parent list and end of line".into(),
            });
        }
        let clause = Clause::new(lits).map_err(|_| TraceError::Tautology { line })?;
        let step = match parents.as_slice() {
            [] => ProofStep::Axiom { clause },
            [a, b] => {
                let left = *id_of
                    .get(a)
                    .ok_or(TraceError::UnknownParent { line, id: *a })?;
                let right = *id_of
                    .get(b)
                    .ok_or(TraceError::UnknownParent { line, id: *b })?;
                ProofStep::Resolvent {
                    clause,
                    left,
                    right,
                    pivot: None,
                }
            }
            _ => {
                return Err(TraceError::Malformed {
                    line,
                    reason: format!("expected 0 or 2 parents, got {}", parents.len()),
                })
            }
        };
        let idx = proof.push(step);
        id_of.insert(id, idx);
        last_id = Some(id);
    }
    Ok(proof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::parse_dimacs;

    fn running_example() -> Cnf {
        parse_dimacs("p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n")
            .unwrap()
            .cnf
    }

    /// Axioms C1..C4 then y, x, and the empty clause.
    fn running_proof() -> ResolutionProof {
        let mut p = ResolutionProof::new();
        for c in running_example().clauses() {
            p.push(ProofStep::Axiom { clause: c.clone() });
        }
        p.push(ProofStep::Resolvent {
            clause: Clause::from_dimacs(&[2]),
            left: 2,
            right: 3,
            pivot: Some(Var(3)),
        });
        p.push(ProofStep::Resolvent {
            clause: Clause::from_dimacs(&[1]),
            left: 1,
            right: 5,
            pivot: Some(Var(2)),
        });
        p.push(ProofStep::Resolvent {
            clause: Clause::empty(),
            left: 4,
            right: 6,
            pivot: Some(Var(1)),
        });
        p
    }

    #[test]
    fn running_example_proof_checks() {
        assert_eq!(
            check(&running_example(), &running_proof()),
            Verdict::Verified
        );
    }

    #[test]
    fn altered_resolvent_fails_at_its_step() {
        let mut proof = running_proof();
        // C6 becomes -2 instead of 1
        proof.replace_step(
            6,
            ProofStep::Resolvent {
                clause: Clause::from_dimacs(&[-2]),
                left: 1,
                right: 5,
                pivot: None,
            },
        );
        match check(&running_example(), &proof) {
            Verdict::Failed {
                step: 6,
                reason: CheckFailure::NotAValidResolvent { .. },
            } => {}
            v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn non_empty_final_clause_fails() {
        let mut proof = running_proof();
        proof.truncate_last();
        match check(&running_example(), &proof) {
            Verdict::Failed {
                step: 6,
                reason: CheckFailure::FinalClauseNotEmpty,
            } => {}
            v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn foreign_axiom_fails() {
        let mut proof = running_proof();
        proof.replace_step(
            1,
            ProofStep::Axiom {
                clause: Clause::from_dimacs(&[1, 2]),
            },
        );
        match check(&running_example(), &proof) {
            Verdict::Failed {
                step: 1,
                reason: CheckFailure::AxiomNotInFormula,
            } => {}
            v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn trace_round_trip_and_golden_last_line() {
        let proof = running_proof();
        let text = write_trace(&proof);
        assert!(text.ends_with("7 0 4 6 0\n"));
        let back = read_trace(&text).unwrap();
        assert_eq!(back.len(), proof.len());
        for (a, b) in back.steps().iter().zip(proof.steps()) {
            assert_eq!(a.clause(), b.clause());
        }
        assert_eq!(check(&running_example(), &back), Verdict::Verified);
    }

    #[test]
    fn trace_parse_errors() {
        assert!(matches!(
            read_trace("1 1 0 0\n2 0 1 99 0\n"),
            Err(TraceError::UnknownParent { id: 99, .. })
        ));
        assert!(matches!(
            read_trace("2 1 0 0\n1 2 0 0\n"),
            Err(TraceError::NonIncreasingId { line: 2 })
        ));
        assert!(matches!(
            read_trace("1 1 2\n"),
            Err(TraceError::Malformed { .. })
        ));
        // a single parent is malformed: resolvents take exactly two
        assert!(matches!(
            read_trace("1 1 0 2 0\n"),
            Err(TraceError::Malformed { .. })
        ));
    }

    #[test]
    fn sparse_ids_are_accepted() {
        let text = "3 1 0 0\n7 -1 0 0\n9 0 3 7 0\n";
        let proof = read_trace(text).unwrap();
        assert_eq!(proof.len(), 3);
        let cnf = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap().cnf;
        assert_eq!(check(&cnf, &proof), Verdict::Verified);
    }
}
