//! Bounded execution: single runs under a user strategy, exhaustive
//! enumeration of computational segments, and the segment-decrease oracle.
//!
//! A computational segment is any finite sequence of states related by
//! single loop iterations. It need not start in an initial state nor end in
//! a terminal one. Inputs are unbounded, so every search here truncates
//! them: a bounded input ranges over `[lower, lower + input_cap]`, an
//! unrestricted one over `[-input_cap, input_cap]`. Verdicts derived from
//! these searches hold for the searched space only.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::affine::Affine;
use crate::program::{Case, EvalError, Program, StateVector};

pub const DEFAULT_INPUT_CAP: i64 = 3;

/// One resolved user decision: the case and the values for its inputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Choice {
    pub case_id: u32,
    pub inputs: Vec<i64>,
}

impl Choice {
    pub fn new(case_id: u32, inputs: Vec<i64>) -> Self {
        Choice { case_id, inputs }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.case_id)?;
        for v in &self.inputs {
            write!(f, ":{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum Strategy {
    Scripted(Vec<Choice>),
    /// Uniform case ids; inputs uniform over the capped range.
    SeededRandom { seed: u64, input_cap: i64 },
}

/// Finite integer hyper-rectangle, one inclusive range per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateBox {
    pub ranges: Vec<RangeInclusive<i64>>,
}

impl StateBox {
    pub fn new(ranges: Vec<RangeInclusive<i64>>) -> Self {
        StateBox { ranges }
    }

    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        StateBox {
            ranges: vec![lo..=hi; dim],
        }
    }

    pub fn point(s: &[i64]) -> Self {
        StateBox {
            ranges: s.iter().map(|&v| v..=v).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn contains(&self, s: &[i64]) -> bool {
        s.len() == self.dim() && self.ranges.iter().zip(s).all(|(r, v)| r.contains(v))
    }

    pub fn len(&self) -> u128 {
        self.ranges
            .iter()
            .map(|r| {
                if r.is_empty() {
                    0
                } else {
                    (*r.end() as i128 - *r.start() as i128 + 1) as u128
                }
            })
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All states, lexicographically ordered (first variable outermost).
    pub fn states(&self) -> BoxStates<'_> {
        let next = if self.is_empty() {
            None
        } else {
            Some(self.ranges.iter().map(|r| *r.start()).collect())
        };
        BoxStates { bx: self, next }
    }
}

impl fmt::Display for StateBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.ranges.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "[{}, {}]", r.start(), r.end())?;
        }
        Ok(())
    }
}

pub struct BoxStates<'a> {
    bx: &'a StateBox,
    next: Option<Vec<i64>>,
}

impl Iterator for BoxStates<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for v in (0..succ.len()).rev() {
            if succ[v] < *self.bx.ranges[v].end() {
                succ[v] += 1;
                self.next = Some(succ);
                return Some(cur);
            }
            succ[v] = *self.bx.ranges[v].start();
        }
        // zero-dimensional boxes hold exactly one (empty) state
        Some(cur)
    }
}

/// A run or segment. `choices[i]` takes `states[i]` to `states[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<StateVector>,
    pub choices: Vec<Choice>,
    /// The final state fails the guard.
    pub terminated: bool,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn last(&self) -> &StateVector {
        self.states.last().expect("traces are nonempty")
    }

    pub fn case_word(&self) -> Vec<u32> {
        self.choices.iter().map(|c| c.case_id).collect()
    }

    /// Re-executes every recorded choice and compares states.
    pub fn is_consistent(&self, p: &Program) -> bool {
        if self.states.len() != self.choices.len() + 1 {
            return false;
        }
        let steps_ok = self
            .states
            .windows(2)
            .zip(&self.choices)
            .all(|(w, c)| p.successor(&w[0], c.case_id, &c.inputs).as_ref() == Ok(&w[1]));
        steps_ok
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.states {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("step {step}: script exhausted while the guard still holds")]
    ScriptExhausted { step: usize },
    #[error("step {step}: invalid choice {choice}: {source}")]
    InvalidChoice {
        step: usize,
        choice: Choice,
        source: EvalError,
    },
    #[error("start state has {got} components, program declares {expected} variables")]
    Arity { expected: usize, got: usize },
}

/// Executes until the guard fails or `max_steps` iterations have run.
pub fn run(
    p: &Program,
    start: &StateVector,
    strategy: &Strategy,
    max_steps: usize,
) -> Result<Trace, RunError> {
    if start.0.len() != p.arity() {
        return Err(RunError::Arity {
            expected: p.arity(),
            got: start.0.len(),
        });
    }
    let mut rng = match strategy {
        Strategy::SeededRandom { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        Strategy::Scripted(_) => None,
    };
    let mut states = vec![start.clone()];
    let mut choices = Vec::new();
    let mut cur = start.clone();
    for step in 0..max_steps {
        if !p.guard_holds(cur.as_slice()) {
            break;
        }
        let choice = match strategy {
            Strategy::Scripted(script) => script
                .get(step)
                .cloned()
                .ok_or(RunError::ScriptExhausted { step })?,
            Strategy::SeededRandom { input_cap, .. } => {
                let rng = rng.as_mut().expect("seeded");
                random_choice(p, cur.as_slice(), *input_cap, rng)
            }
        };
        let next = p
            .successor(&cur, choice.case_id, &choice.inputs)
            .map_err(|source| RunError::InvalidChoice {
                step,
                choice: choice.clone(),
                source,
            })?;
        states.push(next.clone());
        choices.push(choice);
        cur = next;
    }
    let terminated = !p.guard_holds(cur.as_slice());
    Ok(Trace {
        states,
        choices,
        terminated,
    })
}

fn random_choice(p: &Program, s: &[i64], cap: i64, rng: &mut ChaCha8Rng) -> Choice {
    let idx = rng.random_range(0..p.cases.len());
    let case = &p.cases[idx];
    let inputs = p
        .input_ranges(case, s, cap)
        .into_iter()
        .map(|(lo, hi)| rng.random_range(lo..=hi))
        .collect();
    Choice::new(case.id, inputs)
}

/// Every one-step transition from a guarded state `s`, inputs capped.
/// Empty when the guard fails.
pub fn transitions(p: &Program, s: &[i64], input_cap: i64) -> Vec<(Choice, StateVector)> {
    let mut out = Vec::new();
    for case in &p.cases {
        out.extend(case_transitions(p, case, s, input_cap));
    }
    out
}

/// The transitions of one case from `s`, one per capped input combination.
pub fn case_transitions(
    p: &Program,
    case: &Case,
    s: &[i64],
    input_cap: i64,
) -> Vec<(Choice, StateVector)> {
    let mut out = Vec::new();
    if !p.guard_holds(s) {
        return out;
    }
    let sv = StateVector(s.to_vec());
    let ranges = p.input_ranges(case, s, input_cap);
    let mut inputs: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'combos: loop {
        if let Ok(t) = p.successor(&sv, case.id, &inputs) {
            out.push((Choice::new(case.id, inputs.clone()), t));
        }
        for k in (0..inputs.len()).rev() {
            if inputs[k] < ranges[k].1 {
                inputs[k] += 1;
                continue 'combos;
            }
            inputs[k] = ranges[k].0;
        }
        return out;
    }
}

/// Maximal computational segments starting in `bx`: each has between 2 and
/// `max_len` states and either has exactly `max_len` states or ends in a
/// state failing the guard. Every shorter segment is a prefix of exactly
/// the maximal segments extending it, so iterating prefixes of the output
/// visits every segment of length `<= max_len`.
pub fn enumerate_segments<'a>(
    p: &'a Program,
    bx: &'a StateBox,
    max_len: usize,
    input_cap: i64,
) -> Segments<'a> {
    Segments {
        p,
        starts: bx.states(),
        max_len,
        input_cap,
        states: Vec::new(),
        choices: Vec::new(),
        stack: Vec::new(),
    }
}

pub struct Segments<'a> {
    p: &'a Program,
    starts: BoxStates<'a>,
    max_len: usize,
    input_cap: i64,
    states: Vec<StateVector>,
    choices: Vec<Choice>,
    /// `stack[i]`: unexplored transitions out of `states[i]`, reversed.
    stack: Vec<Vec<(Choice, StateVector)>>,
}

impl Segments<'_> {
    fn pending(&self, s: &StateVector) -> Vec<(Choice, StateVector)> {
        let mut t = transitions(self.p, s.as_slice(), self.input_cap);
        t.reverse();
        t
    }
}

impl Iterator for Segments<'_> {
    type Item = Trace;

    fn next(&mut self) -> Option<Trace> {
        if self.max_len < 2 {
            return None;
        }
        loop {
            let Some(top) = self.stack.last_mut() else {
                let start = StateVector(self.starts.next()?);
                if !self.p.guard_holds(start.as_slice()) {
                    continue;
                }
                let pending = self.pending(&start);
                self.states = vec![start];
                self.choices.clear();
                self.stack.push(pending);
                continue;
            };
            match top.pop() {
                None => {
                    self.stack.pop();
                    self.states.pop();
                    self.choices.pop();
                }
                Some((choice, next)) => {
                    let terminal = !self.p.guard_holds(next.as_slice());
                    if terminal || self.states.len() + 1 == self.max_len {
                        let mut states = self.states.clone();
                        states.push(next);
                        let mut choices = self.choices.clone();
                        choices.push(choice);
                        return Some(Trace {
                            states,
                            choices,
                            terminated: terminal,
                        });
                    }
                    let pending = self.pending(&next);
                    self.states.push(next);
                    self.choices.push(choice);
                    self.stack.push(pending);
                }
            }
        }
    }
}

/// Outcome of exploring the states reachable from one start.
pub enum Reach {
    /// Every reached state satisfied the check; `explored` states in total.
    AllHold { explored: usize },
    /// A segment from the start to the first state that failed the check.
    Violation(Trace),
}

/// Breadth-first search over the states reachable from `start` in at most
/// `max_steps` iterations (unbounded when `None`). When `expand_within` is
/// given, only states inside it are expanded; states reached outside it are
/// still checked. `check` sees every state reached in one or more steps.
///
/// Checking the set of reached states is equivalent to checking the end of
/// every segment from `start` within the bounds, since a state first
/// reached at depth `d` has every continuation available from depth `d`.
pub fn explore_reachable<F>(
    p: &Program,
    start: &[i64],
    max_steps: Option<usize>,
    expand_within: Option<&StateBox>,
    input_cap: i64,
    mut check: F,
) -> Reach
where
    F: FnMut(&[i64]) -> bool,
{
    assert!(
        max_steps.is_some() || expand_within.is_some(),
        "reachability search needs a depth bound or an expansion box"
    );
    struct Node {
        state: Vec<i64>,
        parent: usize,
        choice: Option<Choice>,
        depth: usize,
    }
    let mut nodes = vec![Node {
        state: start.to_vec(),
        parent: usize::MAX,
        choice: None,
        depth: 0,
    }];
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    seen.insert(start.to_vec(), 0);
    let mut head = 0;
    while head < nodes.len() {
        let idx = head;
        head += 1;
        let depth = nodes[idx].depth;
        if max_steps.is_some_and(|m| depth >= m) {
            continue;
        }
        if idx > 0 && expand_within.is_some_and(|b| !b.contains(&nodes[idx].state)) {
            continue;
        }
        for (choice, next) in transitions(p, &nodes[idx].state, input_cap) {
            let reached_start = next.0 == start;
            if seen.contains_key(&next.0) && !reached_start {
                continue;
            }
            let ok = check(next.as_slice());
            if reached_start && ok {
                // the start is only ever expanded once
                continue;
            }
            nodes.push(Node {
                state: next.0.clone(),
                parent: idx,
                choice: Some(choice),
                depth: depth + 1,
            });
            if !ok {
                let mut at = nodes.len() - 1;
                let mut states = Vec::new();
                let mut choices = Vec::new();
                while at != usize::MAX {
                    states.push(StateVector(nodes[at].state.clone()));
                    if let Some(c) = &nodes[at].choice {
                        choices.push(c.clone());
                    }
                    at = nodes[at].parent;
                }
                states.reverse();
                choices.reverse();
                let terminated = !p.guard_holds(states.last().expect("nonempty").as_slice());
                return Reach::Violation(Trace {
                    states,
                    choices,
                    terminated,
                });
            }
            seen.insert(next.0, nodes.len() - 1);
        }
    }
    Reach::AllHold {
        explored: nodes.len(),
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    /// First failing segment in lexicographic start order, if any.
    pub counterexample: Option<Trace>,
    pub starts_checked: usize,
    pub states_explored: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// For every segment of at most `max_len` states starting in `bx`, some
/// measure is strictly smaller at the end than at the start.
pub fn check_segment_decrease(
    p: &Program,
    measures: &[Affine],
    bx: &StateBox,
    max_len: usize,
    input_cap: i64,
) -> CheckReport {
    check_segments(p, bx, max_len, input_cap, |start, end| {
        measures
            .iter()
            .any(|f| f.eval_small(end) < f.eval_small(start))
    })
}

/// Shared driver: `holds(start, end)` must be true for the end state of
/// every segment of 2..=max_len states starting at a guarded state in `bx`.
pub fn check_segments<F>(
    p: &Program,
    bx: &StateBox,
    max_len: usize,
    input_cap: i64,
    holds: F,
) -> CheckReport
where
    F: Fn(&[i64], &[i64]) -> bool,
{
    let mut report = CheckReport {
        counterexample: None,
        starts_checked: 0,
        states_explored: 0,
    };
    if max_len < 2 {
        return report;
    }
    for start in bx.states() {
        if !p.guard_holds(&start) {
            continue;
        }
        report.starts_checked += 1;
        match explore_reachable(p, &start, Some(max_len - 1), None, input_cap, |end| {
            holds(&start, end)
        }) {
            Reach::AllHold { explored } => report.states_explored += explored,
            Reach::Violation(t) => {
                report.counterexample = Some(t);
                return report;
            }
        }
    }
    report
}
