//! Disjunctive transition invariants with per-disjunct rank witnesses.
//!
//! A candidate `T = T_1 ∪ ... ∪ T_k` relates a pre-state to a post-state;
//! atoms mention unprimed (pre) and primed (post) variables. Checks are
//! exhaustive over a finite box. Difference-bound disjuncts are also
//! checked symbolically.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::affine::Affine;
use crate::interp::{explore_reachable, transitions, Reach, StateBox, Trace};
use crate::program::{Program, StateVector};
use crate::ramsey::EdgeColoring;
use crate::syntax::{parse_affine, tokenize, Cursor, PrePost, SyntaxError, Tok, Vars};

/// Pre/post pairs enumerated per disjunct before `check_dwf` gives up.
pub const DWF_PAIR_BUDGET: u128 = 400_000_000;
/// Source pairs enumerated for the case-split table before it is skipped.
pub const STEP_PAIR_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransInvError {
    #[error("invariant file: {0}")]
    Syntax(#[from] SyntaxError),
    #[error("invariant file, line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("invariant has no disjuncts")]
    Empty,
    #[error("states {i} and {j} of the trace ({pre} -> {post}) satisfy no disjunct")]
    Uncovered {
        i: usize,
        j: usize,
        pre: StateVector,
        post: StateVector,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelCmp {
    Lt,
    Le,
}

/// `expr cmp bound`, with `expr` over pre slots `0..n` and post slots `n..2n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelAtom {
    pub expr: Affine,
    pub cmp: RelCmp,
    pub bound: i64,
}

impl RelAtom {
    fn split(&self, pre: &[i64], post: &[i64]) -> i64 {
        let n = pre.len();
        let c = &self.expr.coeffs;
        let a: i64 = c[..n].iter().zip(pre).map(|(c, v)| c * v).sum();
        let b: i64 = c[n..].iter().zip(post).map(|(c, v)| c * v).sum();
        a + b
    }

    pub fn holds(&self, pre: &[i64], post: &[i64]) -> bool {
        let v = self.split(pre, post);
        match self.cmp {
            RelCmp::Lt => v < self.bound,
            RelCmp::Le => v <= self.bound,
        }
    }

    /// Integer-tight form `expr <= bound'`.
    fn le_bound(&self) -> i64 {
        match self.cmp {
            RelCmp::Lt => self.bound - 1,
            RelCmp::Le => self.bound,
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a RelAtom, Vec<String>);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let op = match self.0.cmp {
                    RelCmp::Lt => "<",
                    RelCmp::Le => "<=",
                };
                write!(f, "{} {op} {}", self.0.expr.display(&self.1), self.0.bound)
            }
        }
        let mut slots: Vec<String> = names.to_vec();
        slots.extend(names.iter().map(|v| format!("{v}'")));
        D(self, slots)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disjunct {
    pub atoms: Vec<RelAtom>,
    /// Affine rank over the pre-state variables.
    pub witness: Affine,
}

impl Disjunct {
    pub fn holds(&self, pre: &[i64], post: &[i64]) -> bool {
        self.atoms.iter().all(|a| a.holds(pre, post))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantCandidate {
    pub vars: Vec<String>,
    pub disjuncts: Vec<Disjunct>,
}

impl InvariantCandidate {
    /// Parses the invariant file format against the given variable names.
    pub fn parse(text: &str, vars: &[String]) -> Result<InvariantCandidate, TransInvError> {
        let mut cur = Cursor::new(tokenize(text)?);
        let slots = PrePost(vars);
        let mut disjuncts = Vec::new();
        cur.skip_newlines();
        while cur.peek().tok != Tok::Eof {
            cur.expect_keyword("disjunct")?;
            cur.expect(&Tok::Colon, "`:`")?;
            cur.skip_newlines();
            let mut atoms = Vec::new();
            while !(cur.at_keyword("rank") && *cur.peek_at(1) == Tok::Colon) {
                if cur.peek().tok == Tok::Eof || cur.at_keyword("disjunct") {
                    return Err(cur.error("disjunct without a `rank:` line").into());
                }
                let line = cur.peek().line;
                let lhs = parse_affine(&mut cur, &slots)?;
                let op = cur.next();
                let rhs = parse_affine(&mut cur, &slots)?;
                let diff = lhs.sub(&rhs);
                let (form, cmp) = match op.tok {
                    Tok::Lt => (diff, RelCmp::Lt),
                    Tok::Le => (diff, RelCmp::Le),
                    Tok::Gt => (diff.scaled(-1), RelCmp::Lt),
                    Tok::Ge => (diff.scaled(-1), RelCmp::Le),
                    other => {
                        return Err(SyntaxError::new(
                            op.line,
                            op.col,
                            format!("expected comparison, found {other}"),
                        )
                        .into())
                    }
                };
                if form.is_constant() {
                    return Err(TransInvError::Semantic {
                        line,
                        message: "atom mentions no variable".into(),
                    });
                }
                let bound = -form.constant;
                let mut expr = form;
                expr.constant = 0;
                atoms.push(RelAtom { expr, cmp, bound });
                end_line(&mut cur)?;
            }
            cur.expect_keyword("rank")?;
            cur.expect(&Tok::Colon, "`:`")?;
            let witness = parse_affine(&mut cur, &Vars(vars))?;
            end_line(&mut cur)?;
            disjuncts.push(Disjunct { atoms, witness });
        }
        if disjuncts.is_empty() {
            return Err(TransInvError::Empty);
        }
        Ok(InvariantCandidate {
            vars: vars.to_vec(),
            disjuncts,
        })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// 1-based index of the least disjunct relating `pre` to `post`.
    pub fn least_holding(&self, pre: &[i64], post: &[i64]) -> Option<usize> {
        self.disjuncts
            .iter()
            .position(|d| d.holds(pre, post))
            .map(|i| i + 1)
    }

    pub fn holds_any(&self, pre: &[i64], post: &[i64]) -> bool {
        self.disjuncts.iter().any(|d| d.holds(pre, post))
    }
}

fn end_line(cur: &mut Cursor) -> Result<(), SyntaxError> {
    match cur.peek().tok {
        Tok::Newline => {
            cur.skip_newlines();
            Ok(())
        }
        Tok::Eof => Ok(()),
        ref other => Err(cur.error(format!("expected end of line, found {other}"))),
    }
}

impl fmt::Display for InvariantCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.disjuncts {
            writeln!(f, "disjunct:")?;
            for a in &d.atoms {
                writeln!(f, "  {}", a.display(&self.vars))?;
            }
            writeln!(f, "rank: {}", d.witness.display(&self.vars))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DwfFailure {
    /// The witness is negative at a pre-state of the disjunct.
    NegativeRank { pre: StateVector, post: StateVector },
    /// The witness does not drop by at least one.
    NoDecrease { pre: StateVector, post: StateVector },
    /// Box-checked fine but symbolically refuted (the box is too small).
    SymbolicRefutation,
    /// The box has too many pairs to enumerate.
    BoxTooLarge { pairs: u128 },
}

impl fmt::Display for DwfFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DwfFailure::NegativeRank { pre, post } => {
                write!(f, "rank negative at pre-state {pre} (post {post})")
            }
            DwfFailure::NoDecrease { pre, post } => {
                write!(f, "rank does not decrease from {pre} to {post}")
            }
            DwfFailure::SymbolicRefutation => {
                f.write_str("difference-bound entailment fails outside the box")
            }
            DwfFailure::BoxTooLarge { pairs } => write!(f, "{pairs} pairs exceed the budget"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjunctDwf {
    /// 1-based.
    pub index: usize,
    pub pairs_checked: u64,
    /// `Some` when every atom is a difference bound and the witness a
    /// single variable: the exact entailment verdict.
    pub symbolic: Option<bool>,
    pub failure: Option<DwfFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DwfReport {
    pub disjuncts: Vec<DisjunctDwf>,
}

impl DwfReport {
    pub fn passed(&self) -> bool {
        self.disjuncts.iter().all(|d| d.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&DisjunctDwf> {
        self.disjuncts.iter().find(|d| d.failure.is_some())
    }
}

/// For each disjunct: over all box pairs it relates, the witness is
/// nonnegative at the pre-state and drops by at least one.
pub fn check_dwf(c: &InvariantCandidate, bx: &StateBox) -> DwfReport {
    let states: Vec<Vec<i64>> = bx.states().collect();
    let disjuncts = c
        .disjuncts
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let symbolic = dbm::entails_descent(d, c.arity());
            let (pairs_checked, mut failure) = box_descent(d, &states, bx.len());
            if failure.is_none() && symbolic == Some(false) {
                failure = Some(DwfFailure::SymbolicRefutation);
            }
            DisjunctDwf {
                index: i + 1,
                pairs_checked,
                symbolic,
                failure,
            }
        })
        .collect();
    DwfReport { disjuncts }
}

fn box_descent(d: &Disjunct, states: &[Vec<i64>], len: u128) -> (u64, Option<DwfFailure>) {
    let pairs = len * len;
    if pairs > DWF_PAIR_BUDGET {
        return (0, Some(DwfFailure::BoxTooLarge { pairs }));
    }
    let n = d.witness.arity();
    // atoms are separable: value = pre part + post part
    let part = |a: &RelAtom, lo: usize| -> Vec<i64> {
        states
            .iter()
            .map(|s| a.expr.coeffs[lo..lo + n].iter().zip(s).map(|(c, v)| c * v).sum())
            .collect()
    };
    let pre_parts: Vec<Vec<i64>> = d.atoms.iter().map(|a| part(a, 0)).collect();
    let post_parts: Vec<Vec<i64>> = d.atoms.iter().map(|a| part(a, n)).collect();
    let bounds: Vec<i64> = d.atoms.iter().map(RelAtom::le_bound).collect();
    let rank: Vec<i64> = states.iter().map(|s| d.witness.eval_small(s)).collect();
    let mut checked = 0u64;
    for (si, s) in states.iter().enumerate() {
        for (ti, t) in states.iter().enumerate() {
            let related = (0..d.atoms.len()).all(|k| pre_parts[k][si] + post_parts[k][ti] <= bounds[k]);
            if !related {
                continue;
            }
            checked += 1;
            let pair = || (StateVector(s.clone()), StateVector(t.clone()));
            if rank[si] < 0 {
                let (pre, post) = pair();
                return (checked, Some(DwfFailure::NegativeRank { pre, post }));
            }
            if rank[ti] > rank[si] - 1 {
                let (pre, post) = pair();
                return (checked, Some(DwfFailure::NoDecrease { pre, post }));
            }
        }
    }
    (checked, None)
}

mod dbm {
    //! Difference-bound matrices: nodes are a zero node plus one node per
    //! pre and post slot; `u - v <= c` is an edge `v -> u` of weight `c`.

    use super::{Disjunct, RelAtom};

    const ZERO: usize = 0;

    fn as_difference(a: &RelAtom) -> Option<(usize, usize, i64)> {
        let nz: Vec<(usize, i64)> = a.expr.support().map(|s| (s, a.expr.coeffs[s])).collect();
        let c = a.le_bound();
        match nz.as_slice() {
            [(u, 1)] => Some((u + 1, ZERO, c)),
            [(v, -1)] => Some((ZERO, v + 1, c)),
            [(u, 1), (v, -1)] | [(v, -1), (u, 1)] => Some((u + 1, v + 1, c)),
            _ => None,
        }
    }

    /// Tightest bounds `dist[v][u] >= u - v`, or `None` when unsatisfiable.
    fn close(constraints: &[(usize, usize, i64)], nodes: usize) -> Option<Vec<Vec<Option<i64>>>> {
        let mut d = vec![vec![None; nodes]; nodes];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = Some(0);
        }
        for &(u, v, c) in constraints {
            if d[v][u].is_none_or(|old| c < old) {
                d[v][u] = Some(c);
            }
        }
        for k in 0..nodes {
            for i in 0..nodes {
                let Some(ik) = d[i][k] else { continue };
                for j in 0..nodes {
                    if let Some(kj) = d[k][j] {
                        let s = ik + kj;
                        if d[i][j].is_none_or(|old| s < old) {
                            d[i][j] = Some(s);
                        }
                    }
                }
            }
        }
        if (0..nodes).any(|i| d[i][i].is_some_and(|v| v < 0)) {
            None
        } else {
            Some(d)
        }
    }

    /// Exact verdict on whether the disjunct forces the witness to be
    /// nonnegative and to drop by one, when both fit the fragment.
    pub(super) fn entails_descent(d: &Disjunct, n: usize) -> Option<bool> {
        let cons: Vec<_> = d.atoms.iter().map(as_difference).collect::<Option<_>>()?;
        let mut support = d.witness.support();
        let v = support.next()?;
        if support.next().is_some() {
            return None;
        }
        let sign = d.witness.coeffs[v];
        if sign.abs() != 1 {
            return None;
        }
        let k = d.witness.constant;
        let Some(dist) = close(&cons, 2 * n + 1) else {
            // the disjunct is empty
            return Some(true);
        };
        let (pre, post) = (v + 1, v + 1 + n);
        let le = |u: usize, w: usize, c: i64| dist[w][u].is_some_and(|b| b <= c);
        Some(if sign == 1 {
            // x + k >= 0 and x' - x <= -1
            le(ZERO, pre, k) && le(post, pre, -1)
        } else {
            // k - x >= 0 and x - x' <= -1
            le(pre, ZERO, k) && le(pre, post, -1)
        })
    }
}

/// Per (source, case): the disjuncts that held on every checked instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseSplitRow {
    /// 1-based source disjunct; `None` for the one-step base case.
    pub source: Option<usize>,
    pub case_id: u32,
    /// 1-based disjuncts holding on every instance.
    pub targets: Vec<usize>,
    pub instances: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TiCounterexample {
    /// A single step from the box that no disjunct covers.
    Step {
        pre: StateVector,
        choice: String,
        post: StateVector,
    },
    /// A reachable segment whose end is not related to its start.
    Segment { states: Vec<StateVector>, choices: Vec<String> },
}

impl TiCounterexample {
    /// The uncovered `(start, end)` pair.
    pub fn pair(&self) -> (&StateVector, &StateVector) {
        match self {
            TiCounterexample::Step { pre, post, .. } => (pre, post),
            TiCounterexample::Segment { states, .. } => (&states[0], states.last().unwrap()),
        }
    }
}

impl fmt::Display for TiCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiCounterexample::Step { pre, choice, post } => {
                write!(f, "step {pre} --[{choice}]--> {post} satisfies no disjunct")
            }
            TiCounterexample::Segment { states, .. } => {
                let shown: Vec<String> = states.iter().map(|s| s.to_string()).collect();
                write!(f, "segment {} ends outside the invariant", shown.join(" -> "))
            }
        }
    }
}

/// A source pair related by the invariant whose one-step extension is not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductiveGap {
    pub first: StateVector,
    pub last: StateVector,
    pub choice: String,
    pub next: StateVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiReport {
    pub base_steps: u64,
    pub starts_checked: u64,
    pub states_explored: u64,
    pub counterexample: Option<TiCounterexample>,
    /// Case split over all box pairs, base rows first; `None` when the box
    /// is over budget or the base check failed.
    pub case_split: Option<Vec<CaseSplitRow>>,
    /// First failure of `T ∘ R ⊆ T` over box pairs (not all of which need
    /// be reachable), if any.
    pub inductive_gap: Option<InductiveGap>,
}

impl TiReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Base: every step from a guarded box state is covered. Segments: from
/// every guarded start in the box, every state reachable while staying in
/// the box (plus one step out) is related to the start. The case split
/// over arbitrary box pairs is reported alongside.
pub fn check_transition_invariant(
    p: &Program,
    c: &InvariantCandidate,
    bx: &StateBox,
    input_cap: i64,
) -> TiReport {
    let mut report = TiReport {
        base_steps: 0,
        starts_checked: 0,
        states_explored: 0,
        counterexample: None,
        case_split: None,
        inductive_gap: None,
    };
    let ncases = p.cases.len();
    let k = c.disjuncts.len();
    let mut base_rows: Vec<(Vec<bool>, u64)> = vec![(vec![true; k], 0); ncases];
    for s in bx.states() {
        for (choice, t) in transitions(p, &s, input_cap) {
            report.base_steps += 1;
            if !c.holds_any(&s, t.as_slice()) {
                report.counterexample = Some(TiCounterexample::Step {
                    pre: StateVector(s),
                    choice: choice.to_string(),
                    post: t,
                });
                return report;
            }
            let row = &mut base_rows[choice.case_id as usize - 1];
            row.1 += 1;
            for (i, d) in c.disjuncts.iter().enumerate() {
                row.0[i] &= d.holds(&s, t.as_slice());
            }
        }
    }
    for s in bx.states() {
        if !p.guard_holds(&s) {
            continue;
        }
        report.starts_checked += 1;
        match explore_reachable(p, &s, None, Some(bx), input_cap, |end| c.holds_any(&s, end)) {
            Reach::AllHold { explored } => report.states_explored += explored as u64,
            Reach::Violation(t) => {
                report.counterexample = Some(segment_cex(&t));
                return report;
            }
        }
    }
    if bx.len() * bx.len() <= STEP_PAIR_BUDGET {
        let (rows, gap) = case_split(p, c, bx, input_cap);
        let mut table: Vec<CaseSplitRow> = base_rows
            .into_iter()
            .enumerate()
            .map(|(ci, (holds, instances))| CaseSplitRow {
                source: None,
                case_id: ci as u32 + 1,
                targets: indices(&holds),
                instances,
            })
            .collect();
        table.extend(rows);
        report.case_split = Some(table);
        report.inductive_gap = gap;
    }
    report
}

fn indices(flags: &[bool]) -> Vec<usize> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(i, _)| i + 1)
        .collect()
}

fn segment_cex(t: &Trace) -> TiCounterexample {
    TiCounterexample::Segment {
        states: t.states.clone(),
        choices: t.choices.iter().map(|c| c.to_string()).collect(),
    }
}

fn case_split(
    p: &Program,
    c: &InvariantCandidate,
    bx: &StateBox,
    input_cap: i64,
) -> (Vec<CaseSplitRow>, Option<InductiveGap>) {
    let k = c.disjuncts.len();
    let ncases = p.cases.len();
    // table[source][case] = (targets holding on all instances, instances)
    let mut table = vec![vec![(vec![true; k], 0u64); ncases]; k];
    let mut gap = None;
    let states: Vec<Vec<i64>> = bx.states().collect();
    let steps: Vec<Vec<(String, u32, StateVector)>> = states
        .iter()
        .map(|s| {
            transitions(p, s, input_cap)
                .into_iter()
                .map(|(ch, t)| (ch.to_string(), ch.case_id, t))
                .collect()
        })
        .collect();
    for first in &states {
        for (li, last) in states.iter().enumerate() {
            if steps[li].is_empty() {
                continue;
            }
            let sources: Vec<usize> = (0..k).filter(|&i| c.disjuncts[i].holds(first, last)).collect();
            if sources.is_empty() {
                continue;
            }
            for (choice, case_id, next) in &steps[li] {
                let holding: Vec<bool> =
                    c.disjuncts.iter().map(|d| d.holds(first, next.as_slice())).collect();
                if gap.is_none() && !holding.iter().any(|&h| h) {
                    gap = Some(InductiveGap {
                        first: StateVector(first.clone()),
                        last: StateVector(last.clone()),
                        choice: choice.clone(),
                        next: next.clone(),
                    });
                }
                for &src in &sources {
                    let cell = &mut table[src][*case_id as usize - 1];
                    cell.1 += 1;
                    for (flag, h) in cell.0.iter_mut().zip(&holding) {
                        *flag &= h;
                    }
                }
            }
        }
    }
    let rows = table
        .into_iter()
        .enumerate()
        .flat_map(|(src, per_case)| {
            per_case
                .into_iter()
                .enumerate()
                .map(move |(ci, (holds, instances))| CaseSplitRow {
                    source: Some(src + 1),
                    case_id: ci as u32 + 1,
                    targets: indices(&holds),
                    instances,
                })
        })
        .collect();
    (rows, gap)
}

/// Colors edge `(i, j)` of the trace's states by the least disjunct
/// relating state `i` (pre) to state `j` (post); vertices are 1-based.
pub fn segment_coloring(
    c: &InvariantCandidate,
    trace: &Trace,
) -> Result<EdgeColoring, TransInvError> {
    let n = trace.states.len();
    let mut col = EdgeColoring::constant(n, c.disjuncts.len() as u32, 1)
        .expect("disjunct count is positive");
    for i in 0..n {
        for j in i + 1..n {
            let (pre, post) = (&trace.states[i], &trace.states[j]);
            let color = c
                .least_holding(pre.as_slice(), post.as_slice())
                .ok_or_else(|| TransInvError::Uncovered {
                    i: i + 1,
                    j: j + 1,
                    pre: pre.clone(),
                    post: post.clone(),
                })?;
            col.set(i + 1, j + 1, color as u32);
        }
    }
    Ok(col)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_and_prints() {
        let c = InvariantCandidate::parse(corpus::PROG5_INV, &names(&["x", "y"])).unwrap();
        assert_eq!(c.disjuncts.len(), 4);
        let again = InvariantCandidate::parse(&c.to_string(), &c.vars).unwrap();
        assert_eq!(again, c);
        assert!(c.disjuncts[0].holds(&[3, 1], &[2, 3]));
        assert!(!c.disjuncts[0].holds(&[3, 1], &[2, 4]));
    }

    #[test]
    fn stationary_disjunct_fails() {
        let c = InvariantCandidate::parse("disjunct:\n x' <= x\nrank: x\n", &names(&["x"])).unwrap();
        let r = check_dwf(&c, &StateBox::cube(1, -3, 3));
        assert!(!r.passed());
        assert_eq!(r.disjuncts[0].symbolic, Some(false));
    }

    #[test]
    fn difference_fragment_is_decided() {
        let c = InvariantCandidate::parse(corpus::PROG6_INV, &names(&["x", "y"])).unwrap();
        let r = check_dwf(&c, &StateBox::cube(2, -4, 4));
        assert!(r.passed());
        assert!(r.disjuncts.iter().all(|d| d.symbolic == Some(true)));
    }

    #[test]
    fn rejects_missing_rank() {
        let err = InvariantCandidate::parse("disjunct:\n x' < x\n", &names(&["x"]));
        assert!(err.is_err());
        let err = InvariantCandidate::parse("disjunct:\n 1 < 2\nrank: x\n", &names(&["x"]));
        assert!(matches!(err, Err(TransInvError::Semantic { .. })));
    }
}
