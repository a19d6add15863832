//! CNF formulas: literals, clauses, DIMACS parsing, restriction and the
//! resolution rule.
//!
//! Clauses are kept normalized: literals sorted by (variable, polarity),
//! deduplicated, and never containing a complementary pair. The empty
//! clause is representable and stands for the unsatisfiable constant.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal: a variable or its negation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lit {
    var: Var,
    positive: bool,
}

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        assert!(var.0 >= 1, "variables are numbered from 1");
        Lit { var, positive }
    }

    pub fn positive(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn negative(var: Var) -> Lit {
        Lit::new(var, false)
    }

    /// Builds a literal from a non-zero DIMACS integer.
    pub fn from_dimacs(n: i32) -> Option<Lit> {
        if n == 0 {
            return None;
        }
        Some(Lit {
            var: Var(n.unsigned_abs()),
            positive: n > 0,
        })
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var.0 as i32;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

// Order by variable first, negative before positive, so that sorted literal
// sequences line up with the branch order used when walking diagrams.
impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var, self.positive).cmp(&(other.var, other.positive))
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl Serialize for Lit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.to_dimacs())
    }
}

/// Error raised when a clause would contain both a variable and its negation.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("clause contains the complementary pair on {0}")]
pub struct TautologyError(pub Var);

/// A disjunction of literals, normalized on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Normalizes (sorts, deduplicates) and rejects tautological input.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<Clause, TautologyError> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return Err(TautologyError(w[0].var()));
            }
        }
        Ok(Clause { lits })
    }

    /// The empty clause, i.e. the unsatisfiable constant.
    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    /// Convenience constructor from DIMACS integers; panics on 0 or tautology.
    pub fn from_dimacs(ints: &[i32]) -> Clause {
        Clause::new(
            ints.iter()
                .map(|&n| Lit::from_dimacs(n).expect("non-zero literal")),
        )
        .expect("non-tautological clause")
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
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    /// True iff every literal of `self` occurs in `other`.
    pub fn subsumes(&self, other: &Clause) -> bool {
        self.lits.iter().all(|l| other.contains(*l))
    }

    pub fn eval(&self, a: &Assignment) -> bool {
        self.lits
            .iter()
            .any(|l| a.lit_value(*l).expect("assignment covers clause variables"))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.lits.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Why two clauses cannot be resolved.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("clauses share no complementary pair")]
    NotResolvable,
    #[error("clauses share two or more complementary pairs; the resolvent would be tautological")]
    TautologicalResolvent,
}

/// Resolves two clauses on their unique complementary pair, returning the
/// resolvent and the pivot variable.
pub fn resolve_on(c: &Clause, d: &Clause) -> Result<(Clause, Var), ResolveError> {
    let mut pivot = None;
    for l in c.lits() {
        if d.contains(l.negated()) {
            if pivot.is_some() {
                return Err(ResolveError::TautologicalResolvent);
            }
            pivot = Some(l.var());
        }
    }
    let pivot = pivot.ok_or(ResolveError::NotResolvable)?;
    let lits = c
        .lits()
        .iter()
        .chain(d.lits())
        .copied()
        .filter(|l| l.var() != pivot);
    let clause = Clause::new(lits).expect("a unique pivot leaves no complementary pair");
    Ok((clause, pivot))
}

/// Resolves two clauses; see [`resolve_on`].
pub fn resolve(c: &Clause, d: &Clause) -> Result<Clause, ResolveError> {
    resolve_on(c, d).map(|(clause, _)| clause)
}

/// A total truth assignment over a fixed variable universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    vars: Vec<Var>, // sorted ascending
    values: Vec<bool>,
}

impl Assignment {
    /// Builds an assignment from a sorted universe and a bit mask, where bit
    /// `i` gives the value of the `i`-th variable.
    pub fn from_mask(vars: &[Var], mask: u64) -> Assignment {
        debug_assert!(
            vars.windows(2).all(|w| w[0] < w[1]),
            "universe sorted and unique"
        );
        let values = (0..vars.len()).map(|i| mask >> i & 1 == 1).collect();
        Assignment {
            vars: vars.to_vec(),
            values,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, bool)>) -> Assignment {
        let mut pairs: Vec<(Var, bool)> = pairs.into_iter().collect();
        pairs.sort_by_key(|p| p.0);
        pairs.dedup_by_key(|p| p.0);
        Assignment {
            vars: pairs.iter().map(|p| p.0).collect(),
            values: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn universe(&self) -> &[Var] {
        &self.vars
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.vars.binary_search(&var).ok().map(|i| self.values[i])
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.value(lit.var()).map(|v| v == lit.is_positive())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.values)
            .map(|(v, b)| format!("{}={}", v, if *b { "1" } else { "0" }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Index of a clause in a formula or clause database. Indices start at 1 and
/// are stable for the life of a run; derived clauses extend the range.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ClauseId(pub usize);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

/// A conjunction of clauses with stable 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cnf {
    clauses: Vec<Clause>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    comments: Vec<String>,
}

impl Cnf {
    pub fn new(clauses: Vec<Clause>) -> Cnf {
        Cnf {
            clauses,
            comments: Vec::new(),
        }
    }

    pub fn with_comments(clauses: Vec<Clause>, comments: Vec<String>) -> Cnf {
        Cnf { clauses, comments }
    }

    /// The empty conjunction, i.e. the valid constant.
    pub fn top() -> Cnf {
        Cnf::new(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.clauses[id.0 - 1]
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn ids(&self) -> impl Iterator<Item = ClauseId> {
        (1..=self.clauses.len()).map(ClauseId)
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn max_var(&self) -> u32 {
        self.vars().iter().map(|v| v.0).max().unwrap_or(0)
    }

    pub fn contains_clause(&self, clause: &Clause) -> bool {
        self.clauses.iter().any(|c| c == clause)
    }

    pub fn eval(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.eval(a))
    }

    /// The restriction of the formula under `lit` being true: clauses
    /// containing `lit` are dropped and the complementary literal is removed
    /// from the rest. Clauses may become empty.
    pub fn restrict(&self, lit: Lit) -> Cnf {
        let neg = lit.negated();
        let clauses = self
            .clauses
            .iter()
            .filter(|c| !c.contains(lit))
            .map(|c| {
                Clause::new(c.lits().iter().copied().filter(|l| *l != neg))
                    .expect("removing a literal cannot create a tautology")
            })
            .collect();
        Cnf::new(clauses)
    }

    /// Pairs `(i, j)` of clause indices where clause `i` subsumes clause `j`.
    pub fn subsumed_pairs(&self) -> Vec<(ClauseId, ClauseId)> {
        let mut out = Vec::new();
        for (i, c) in self.clauses.iter().enumerate() {
            for (j, d) in self.clauses.iter().enumerate() {
                if i != j && c.subsumes(d) {
                    out.push((ClauseId(i + 1), ClauseId(j + 1)));
                }
            }
        }
        out
    }

    /// Renders normalized DIMACS: comments first, then the problem line with
    /// the largest used variable, then one clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("c ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!(
            "p cnf {} {}\n",
            self.max_var(),
            self.clauses.len()
        ));
        for clause in &self.clauses {
            for lit in clause.lits() {
                out.push_str(&lit.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// A note recorded while ingesting a formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ParseWarning {
    /// A tautological input clause was dropped; its diagram would be the
    /// true terminal and contributes nothing.
    TautologyDropped { line: usize, var: Var },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::TautologyDropped { line, var } => {
                write!(f, "line {line}: tautological clause on {var} dropped")
            }
        }
    }
}

/// Result of parsing a DIMACS file.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub cnf: Cnf,
    pub warnings: Vec<ParseWarning>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected `p cnf <vars> <clauses>` header, got `{found}`")]
    MalformedHeader { line: usize, found: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: `{token}` is not a literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} out of range 1..={max}")]
    LiteralOutOfRange { line: usize, lit: i32, max: u32 },
    #[error("line {line}: clause not terminated by 0 at end of input")]
    UnterminatedClause { line: usize },
    #[error("header declares {declared} clauses but the file has {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// Parses DIMACS CNF. Comment lines are preserved as metadata; duplicate
/// literals inside a clause are silently merged; tautological clauses are
/// dropped with a warning.
pub fn parse_dimacs(input: &str) -> Result<Parsed, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut comments = Vec::new();
    let mut clauses = Vec::new();
    let mut warnings = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut clause_line = 0usize;
    let mut parsed_count = 0usize;

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            comments.push(rest.trim_start().to_string());
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::DuplicateHeader { line: line_no });
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, m] => v.parse::<u32>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or(ParseError::MalformedHeader {
                line: line_no,
                found: line.to_string(),
            })?);
            continue;
        }
        let (max_var, _) = header.ok_or(ParseError::MissingHeader)?;
        for token in line.split_whitespace() {
            let n: i32 = token.parse().map_err(|_| ParseError::BadToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if n == 0 {
                parsed_count += 1;
                match Clause::new(current.drain(..)) {
                    Ok(clause) => clauses.push(clause),
                    Err(TautologyError(var)) => warnings.push(ParseWarning::TautologyDropped {
                        line: clause_line.max(line_no),
                        var,
                    }),
                }
                clause_line = 0;
                continue;
            }
            if n.unsigned_abs() > max_var {
                return Err(ParseError::LiteralOutOfRange {
                    line: line_no,
                    lit: n,
                    max: max_var,
                });
            }
            if current.is_empty() {
                clause_line = line_no;
            }
            current.push(Lit::from_dimacs(n).expect("checked non-zero"));
        }
    }

    let (_, declared) = header.ok_or(ParseError::MissingHeader)?;
    if !current.is_empty() {
        return Err(ParseError::UnterminatedClause {
            line: input.lines().count(),
        });
    }
    if parsed_count != declared {
        return Err(ParseError::ClauseCountMismatch {
            declared,
            found: parsed_count,
        });
    }
    Ok(Parsed {
        cnf: Cnf::with_comments(clauses, comments),
        warnings,
    })
}

/// How a clause entered the database.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ClauseOrigin {
    Input,
    Resolvent {
        left: ClauseId,
        right: ClauseId,
        pivot: Var,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DbClause {
    pub id: ClauseId,
    pub clause: Clause,
    pub origin: ClauseOrigin,
}

/// A clause database: the input clauses followed by derived resolvents, with
/// ids never reused. Annotations and proof traces refer to ids, never to
/// structural equality, so equal-looking clauses from different origins stay
/// distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseDb {
    entries: Vec<DbClause>,
    input_count: usize,
}

impl ClauseDb {
    pub fn from_cnf(cnf: &Cnf) -> ClauseDb {
        let entries = cnf
            .ids()
            .map(|id| DbClause {
                id,
                clause: cnf.clause(id).clone(),
                origin: ClauseOrigin::Input,
            })
            .collect::<Vec<_>>();
        let input_count = entries.len();
        ClauseDb {
            entries,
            input_count,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of input (non-derived) clauses.
    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.entries[id.0 - 1].clause
    }

    pub fn entry(&self, id: ClauseId) -> &DbClause {
        &self.entries[id.0 - 1]
    }

    pub fn entries(&self) -> &[DbClause] {
        &self.entries
    }

    pub fn ids(&self) -> impl Iterator<Item = ClauseId> {
        (1..=self.entries.len()).map(ClauseId)
    }

    pub fn push_resolvent(
        &mut self,
        clause: Clause,
        left: ClauseId,
        right: ClauseId,
        pivot: Var,
    ) -> ClauseId {
        let id = ClauseId(self.entries.len() + 1);
        self.entries.push(DbClause {
            id,
            clause,
            origin: ClauseOrigin::Resolvent { left, right, pivot },
        });
        id
    }

    /// Lowest id among clauses with the given literal set, if any.
    pub fn find_equal(&self, clause: &Clause) -> Option<ClauseId> {
        self.entries
            .iter()
            .find(|e| &e.clause == clause)
            .map(|e| e.id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(ints: &[i32]) -> Clause {
        Clause::from_dimacs(ints)
    }

    #[test]
    fn literal_negation_is_involution() {
        let l = Lit::from_dimacs(-7).unwrap();
        assert_eq!(l.negated().negated(), l);
        assert_eq!(l.negated().to_dimacs(), 7);
    }

    #[test]
    fn clause_normalizes_and_rejects_tautologies() {
        let c = clause(&[3, -2, 3]);
        assert_eq!(c.lits().len(), 2);
        assert_eq!(c.lits()[0].to_dimacs(), -2);
        assert!(
            Clause::new([Lit::from_dimacs(1).unwrap(), Lit::from_dimacs(-1).unwrap()]).is_err()
        );
    }

    #[test]
    fn resolve_running_example_steps() {
        // y = res(y|z, y|-z); empty = res(x, -x)
        let r = resolve(&clause(&[2, 3]), &clause(&[2, -3])).unwrap();
        assert_eq!(r, clause(&[2]));
        let e = resolve(&clause(&[1]), &clause(&[-1])).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn resolve_wider_clauses() {
        // res(-x|-y|-v, x|-z|-v) = -y|-z|-v
        let r = resolve(&clause(&[-1, -2, -4]), &clause(&[1, -3, -4])).unwrap();
        assert_eq!(r, clause(&[-2, -3, -4]));
    }

    #[test]
    fn resolve_errors() {
        assert_eq!(
            resolve(&clause(&[1, 2]), &clause(&[1, 3])),
            Err(ResolveError::NotResolvable)
        );
        assert_eq!(
            resolve(&clause(&[1, 2]), &clause(&[-1, -2])),
            Err(ResolveError::TautologicalResolvent)
        );
    }

    #[test]
    fn resolve_pivot_reported() {
        let (r, pivot) = resolve_on(&clause(&[1, -2]), &clause(&[2])).unwrap();
        assert_eq!(r, clause(&[1]));
        assert_eq!(pivot, Var(2));
    }

    #[test]
    fn restrict_follows_the_definition() {
        // ((x|-y) & (y|z)) restricted under x -> (y|z)
        let cnf = Cnf::new(vec![clause(&[1, -2]), clause(&[2, 3])]);
        let r = cnf.restrict(Lit::positive(Var(1)));
        assert_eq!(r.clauses(), &[clause(&[2, 3])]);

        // ((x|-y) & -x) restricted under x -> the empty clause
        let cnf = Cnf::new(vec![clause(&[1, -2]), clause(&[-1])]);
        let r = cnf.restrict(Lit::positive(Var(1)));
        assert_eq!(r.clauses(), &[Clause::empty()]);

        // restriction on an unused variable is the identity
        let cnf = Cnf::new(vec![clause(&[1, -2])]);
        assert_eq!(cnf.restrict(Lit::positive(Var(9))).clauses(), cnf.clauses());
    }

    #[test]
    fn subsumes_examples() {
        assert!(clause(&[2]).subsumes(&clause(&[2, 3])));
        assert!(!clause(&[2, 3]).subsumes(&clause(&[2])));
        assert!(Clause::empty().subsumes(&clause(&[1])));
    }

    #[test]
    fn parse_running_example() {
        let text = "c the running example\np cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n";
        let parsed = parse_dimacs(text).unwrap();
        assert_eq!(parsed.cnf.len(), 4);
        assert_eq!(parsed.cnf.comments(), &["the running example".to_string()]);
        assert_eq!(parsed.cnf.vars().len(), 3);
        assert!(parsed.warnings.is_empty());
        assert_eq!(parsed.cnf.clause(ClauseId(4)), &clause(&[-1]));
    }

    #[test]
    fn parse_empty_formula() {
        let parsed = parse_dimacs("p cnf 0 0\n").unwrap();
        assert!(parsed.cnf.is_empty());
    }

    #[test]
    fn parse_drops_tautologies_with_warning() {
        let parsed = parse_dimacs("p cnf 2 1\n1 -1 2 0\n").unwrap();
        assert!(parsed.cnf.is_empty());
        assert_eq!(
            parsed.warnings,
            vec![ParseWarning::TautologyDropped {
                line: 2,
                var: Var(1)
            }]
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_dimacs("p cnf x 1\n1 0\n"),
            Err(ParseError::MalformedHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n3 0\n"),
            Err(ParseError::LiteralOutOfRange { lit: 3, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(ParseError::UnterminatedClause { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 2\n1 0\n"),
            Err(ParseError::ClauseCountMismatch {
                declared: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c hello\np cnf 3 2\n-1 2 0\n2 3 0\n";
        let parsed = parse_dimacs(text).unwrap();
        let rendered = parsed.cnf.to_dimacs();
        assert_eq!(rendered, text);
        let again = parse_dimacs(&rendered).unwrap();
        assert_eq!(again.cnf, parsed.cnf);
    }

    #[test]
    fn subsumed_pair_detection() {
        let cnf = Cnf::new(vec![clause(&[2]), clause(&[2, 3])]);
        assert_eq!(cnf.subsumed_pairs(), vec![(ClauseId(1), ClauseId(2))]);
    }

    #[test]
    fn clause_db_indices_are_stable() {
        let cnf = Cnf::new(vec![clause(&[1]), clause(&[-1])]);
        let mut db = ClauseDb::from_cnf(&cnf);
        assert_eq!(db.input_count(), 2);
        let id = db.push_resolvent(Clause::empty(), ClauseId(1), ClauseId(2), Var(1));
        assert_eq!(id, ClauseId(3));
        assert_eq!(db.clause(id), &Clause::empty());
        assert_eq!(db.find_equal(&clause(&[-1])), Some(ClauseId(2)));
    }
}
