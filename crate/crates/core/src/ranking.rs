//! Lexicographic ranking functions: tuples of affine forms ordered
//! lexicographically, with every non-guarded state mapped to a bottom
//! element below all tuples.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::affine::Affine;
use crate::interp::{check_segments, CheckReport, StateBox};
use crate::program::Program;
use crate::sct::{inf_over_guard, post_exact_form, post_upper_form, sup_over_guard, SctError};
use crate::syntax::{parse_affine_list, SyntaxError};
use crate::tropical::{Finite, Infinite};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankingError {
    #[error("ranking spec needs at least one component")]
    Empty,
    #[error("ranking components: {0}")]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Analysis(#[from] SctError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingSpec {
    components: Vec<Affine>,
    labels: Vec<String>,
}

impl RankingSpec {
    pub fn new(p: &Program, components: Vec<Affine>) -> Result<RankingSpec, RankingError> {
        if components.is_empty() {
            return Err(RankingError::Empty);
        }
        let labels = components
            .iter()
            .map(|c| c.display(&p.vars).to_string())
            .collect();
        Ok(RankingSpec { components, labels })
    }

    /// Comma-separated affine expressions, e.g. `w, x, y, z`.
    pub fn parse(p: &Program, text: &str) -> Result<RankingSpec, RankingError> {
        RankingSpec::new(p, parse_affine_list(text, &p.vars)?)
    }

    pub fn components(&self) -> &[Affine] {
        &self.components
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Rank of `s`; `None` is the bottom element (the guard fails).
    pub fn rank_of(&self, p: &Program, s: &[i64]) -> Option<Vec<i64>> {
        p.guard_holds(s)
            .then(|| self.components.iter().map(|c| c.eval_small(s)).collect())
    }
}

impl fmt::Display for RankingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.labels.join(", "))
    }
}

/// Strict order with bottom below every tuple.
pub fn lex_less(a: &Option<Vec<i64>>, b: &Option<Vec<i64>>) -> bool {
    match (a, b) {
        (None, Some(_)) => true,
        (Some(a), Some(b)) => a.cmp(b) == Ordering::Less,
        _ => false,
    }
}

/// How one component changes across a single step of one case, uniformly
/// over guarded pre-states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ComponentChange {
    Unchanged,
    /// The change is at most `-by` everywhere, `by >= 1`.
    StrictlyDecreasing { by: i64 },
    Unknown,
}

impl fmt::Display for ComponentChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentChange::Unchanged => f.write_str("unchanged"),
            ComponentChange::StrictlyDecreasing { by } => write!(f, "decreases by >= {by}"),
            ComponentChange::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseJustification {
    pub case_id: u32,
    pub changes: Vec<ComponentChange>,
    /// 1-based component that decreases after an unchanged prefix.
    pub decreasing: Option<usize>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankingOutcome {
    pub verdict: Verdict,
    pub cases: Vec<CaseJustification>,
    /// Least value of each component over the guard region.
    pub lower_bounds: Vec<Option<i64>>,
}

pub fn classify(
    p: &Program,
    case_id: u32,
    component: &Affine,
) -> Result<ComponentChange, SctError> {
    if let Some(exact) = post_exact_form(p, case_id, component)? {
        let delta = exact.sub(component);
        if delta.is_constant() && delta.constant == 0 {
            return Ok(ComponentChange::Unchanged);
        }
    }
    let Some(upper) = post_upper_form(p, case_id, component)? else {
        return Ok(ComponentChange::Unknown);
    };
    Ok(match sup_over_guard(p, &upper.sub(component)) {
        Finite(d) if d <= -1 => ComponentChange::StrictlyDecreasing { by: -d },
        Finite(_) | Infinite => ComponentChange::Unknown,
    })
}

/// Per case: an unchanged prefix, then a component that strictly
/// decreases and is bounded below by zero under the guard.
pub fn verify_ranking(p: &Program, r: &RankingSpec) -> Result<RankingOutcome, RankingError> {
    let lower_bounds: Vec<_> = r.components.iter().map(|c| inf_over_guard(p, c)).collect();
    let mut cases = Vec::new();
    let mut all_ok = true;
    for case_id in p.case_ids() {
        let changes = r
            .components
            .iter()
            .map(|c| classify(p, case_id, c))
            .collect::<Result<Vec<_>, _>>()?;
        let first_moving = changes.iter().position(|c| *c != ComponentChange::Unchanged);
        let (decreasing, note) = match first_moving {
            None => (None, "no component changes".to_string()),
            Some(i) => match (changes[i], lower_bounds[i]) {
                (ComponentChange::StrictlyDecreasing { .. }, Some(lb)) if lb >= 0 => {
                    (Some(i + 1), format!("component {} ({}) decreases", i + 1, r.labels[i]))
                }
                (ComponentChange::StrictlyDecreasing { .. }, _) => (
                    None,
                    format!(
                        "component {} ({}) decreases but is not bounded below by 0",
                        i + 1,
                        r.labels[i]
                    ),
                ),
                _ => (
                    None,
                    format!(
                        "first changing component {} ({}) is not shown to decrease",
                        i + 1,
                        r.labels[i]
                    ),
                ),
            },
        };
        all_ok &= decreasing.is_some();
        cases.push(CaseJustification {
            case_id,
            changes,
            decreasing,
            note,
        });
    }
    Ok(RankingOutcome {
        verdict: if all_ok {
            Verdict::Terminates
        } else {
            Verdict::Unknown
        },
        cases,
        lower_bounds,
    })
}

/// Every bounded segment from `bx` ends strictly below where it started.
pub fn check_lex_decrease(
    p: &Program,
    r: &RankingSpec,
    bx: &StateBox,
    max_len: usize,
    input_cap: i64,
) -> CheckReport {
    check_segments(p, bx, max_len, input_cap, |start, end| {
        lex_less(&r.rank_of(p, end), &r.rank_of(p, start))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn verdict(prog: &str, rank: &str) -> Verdict {
        let p = Program::parse(prog).unwrap();
        let r = RankingSpec::parse(&p, rank).unwrap();
        verify_ranking(&p, &r).unwrap().verdict
    }

    #[test]
    fn sum_ranks_program3() {
        assert_eq!(verdict(corpus::PROG3, "x + y + z"), Verdict::Terminates);
    }

    #[test]
    fn lex_ranks_program4() {
        assert_eq!(verdict(corpus::PROG4, "w, x, y, z"), Verdict::Terminates);
        assert_eq!(verdict(corpus::PROG4, "x, y, z, w"), Verdict::Unknown);
    }

    #[test]
    fn input_fed_component_is_unknown() {
        let p = Program::parse(corpus::PROG4).unwrap();
        let x = Affine::var(4, 1);
        assert_eq!(classify(&p, 1, &x).unwrap(), ComponentChange::Unknown);
        assert_eq!(classify(&p, 2, &x).unwrap(), ComponentChange::StrictlyDecreasing { by: 1 });
        assert_eq!(classify(&p, 3, &x).unwrap(), ComponentChange::Unchanged);
    }

    #[test]
    fn halving_decreases() {
        let p = Program::parse(corpus::NOT_TRANSITIVE).unwrap();
        let x = Affine::var(1, 0);
        assert_eq!(classify(&p, 1, &x).unwrap(), ComponentChange::StrictlyDecreasing { by: 1 });
    }

    #[test]
    fn bottom_is_least() {
        assert!(lex_less(&None, &Some(vec![0])));
        assert!(!lex_less(&None, &None));
        assert!(lex_less(&Some(vec![1, 5]), &Some(vec![2, 0])));
        assert!(!lex_less(&Some(vec![2, 0]), &Some(vec![2, 0])));
    }
}
