//! Size-change analysis: matrix extraction, empirical audit, clamped
//! closure and the diagonal criteria.
//!
//! Entry `(i, j)` of a case matrix is the tightest `L` such that
//! `f_j(post) <= f_i(pre) + L` on every guarded transition of the case, so
//! left-to-right products follow execution order.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::affine::Affine;
use crate::interp::{case_transitions, StateBox};
use crate::program::{Program, StateVector, UpdateRhs};
use crate::syntax::{parse_affine_list, SyntaxError};
use crate::tropical::{ClampBound, Entry, Finite, Infinite, TropicalError, TropicalMatrix};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SctError {
    #[error("invalid measure basis: {0}")]
    InvalidBasis(String),
    #[error("measure list: {0}")]
    Syntax(#[from] SyntaxError),
    #[error("program has no case {0}")]
    NoSuchCase(u32),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

/// Measures `f_1 .. f_m`: nonnegative combinations of guarded variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureBasis {
    functions: Vec<Affine>,
    labels: Vec<String>,
}

impl MeasureBasis {
    /// Validates `functions` against the guard of `p`.
    pub fn new(p: &Program, functions: Vec<Affine>) -> Result<MeasureBasis, SctError> {
        let invalid = |m: String| Err(SctError::InvalidBasis(m));
        if functions.is_empty() {
            return invalid("no measures given".into());
        }
        for f in &functions {
            let shown = f.display(&p.vars).to_string();
            if f.arity() != p.arity() {
                return invalid(format!("`{shown}` has the wrong arity"));
            }
            if f.constant != 0 {
                return invalid(format!("`{shown}` has a nonzero constant"));
            }
            if f.is_constant() {
                return invalid(format!("`{shown}` uses no variable"));
            }
            if f.coeffs.iter().any(|&c| c < 0) {
                return invalid(format!("`{shown}` has a negative coefficient"));
            }
            for v in f.support() {
                if p.guard_lower_bound(v).is_none_or(|lb| lb < 1) {
                    return invalid(format!(
                        "`{shown}` uses `{}`, which the guard does not force positive",
                        p.vars[v]
                    ));
                }
            }
        }
        let labels = functions
            .iter()
            .map(|f| f.display(&p.vars).to_string())
            .collect();
        Ok(MeasureBasis { functions, labels })
    }

    /// Parses a comma-separated list such as `x, y, x + y`.
    pub fn parse(p: &Program, text: &str) -> Result<MeasureBasis, SctError> {
        let functions = parse_affine_list(text, &p.vars)?;
        MeasureBasis::new(p, functions)
    }

    /// One measure per variable the guard forces positive, in declaration order.
    pub fn guarded_vars(p: &Program) -> Result<MeasureBasis, SctError> {
        let functions = (0..p.arity())
            .filter(|&v| p.guard_lower_bound(v).is_some_and(|lb| lb >= 1))
            .map(|v| Affine::var(p.arity(), v))
            .collect();
        MeasureBasis::new(p, functions)
    }

    pub fn functions(&self) -> &[Affine] {
        &self.functions
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn eval(&self, s: &[i64]) -> Vec<i64> {
        self.functions.iter().map(|f| f.eval_small(s)).collect()
    }
}

impl fmt::Display for MeasureBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels.join(", "))
    }
}

/// An affine upper bound on `f(post)` over the pre-state of a guarded
/// transition of the case, or `None` when `f(post)` is unbounded above.
pub fn post_upper_form(p: &Program, case_id: u32, f: &Affine) -> Result<Option<Affine>, SctError> {
    let case = p.case(case_id).ok_or(SctError::NoSuchCase(case_id))?;
    let n = p.arity();
    let mut out = Affine::constant(n, f.constant);
    for (v, &c) in f.coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        match case.update_of(v) {
            None => out.add_scaled(&Affine::var(n, v), c),
            Some(UpdateRhs::Affine(a)) => out.add_scaled(a, c),
            Some(UpdateRhs::InputAtLeast(lower)) if c < 0 => out.add_scaled(lower, c),
            Some(UpdateRhs::InputAny | UpdateRhs::InputAtLeast(_)) => return Ok(None),
            Some(UpdateRhs::DivByConst { var, .. }) => {
                let lb = p.guard_lower_bound(*var);
                if c > 0 && lb.is_some_and(|lb| lb >= 1) {
                    // x div d <= x - 1 whenever x >= 1
                    let mut bound = Affine::var(n, *var);
                    bound.constant = -1;
                    out.add_scaled(&bound, c);
                } else if c < 0 && lb.is_some_and(|lb| lb >= 0) {
                    // x div d >= 0, so c * (x div d) <= 0
                } else {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(out))
}

/// `f(post)` as an exact affine form over the pre-state, or `None` when an
/// input or division feeds it.
pub fn post_exact_form(p: &Program, case_id: u32, f: &Affine) -> Result<Option<Affine>, SctError> {
    let case = p.case(case_id).ok_or(SctError::NoSuchCase(case_id))?;
    let n = p.arity();
    let mut out = Affine::constant(n, f.constant);
    for (v, &c) in f.coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        match case.update_of(v) {
            None => out.add_scaled(&Affine::var(n, v), c),
            Some(UpdateRhs::Affine(a)) => out.add_scaled(a, c),
            Some(_) => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Supremum of an affine form over the guard region.
pub fn sup_over_guard(p: &Program, form: &Affine) -> Entry {
    let mut acc = Some(form.constant);
    for (v, &c) in form.coeffs.iter().enumerate() {
        if c > 0 {
            return Infinite;
        }
        if c < 0 {
            let Some(lb) = p.guard_lower_bound(v) else {
                return Infinite;
            };
            acc = acc.and_then(|a| c.checked_mul(lb).and_then(|t| a.checked_add(t)));
        }
    }
    // overflow only loosens the bound
    acc.map_or(Infinite, Finite)
}

/// Infimum of an affine form over the guard region; `None` when unbounded below.
pub fn inf_over_guard(p: &Program, form: &Affine) -> Option<i64> {
    match sup_over_guard(p, &form.scaled(-1)) {
        Finite(v) => v.checked_neg(),
        Infinite => None,
    }
}

/// Tightest sound size-change matrix of one case.
pub fn extract_matrix(
    p: &Program,
    case_id: u32,
    basis: &MeasureBasis,
) -> Result<TropicalMatrix, SctError> {
    let m = basis.len();
    let mut out = TropicalMatrix::filled(m, Infinite);
    for (j, fj) in basis.functions().iter().enumerate() {
        let Some(post) = post_upper_form(p, case_id, fj)? else {
            continue;
        };
        for (i, fi) in basis.functions().iter().enumerate() {
            out.set(i, j, sup_over_guard(p, &post.sub(fi)));
        }
    }
    Ok(out)
}

/// One generator per case, in case order.
pub fn extract_generators(
    p: &Program,
    basis: &MeasureBasis,
) -> Result<Vec<TropicalMatrix>, SctError> {
    p.case_ids().map(|c| extract_matrix(p, c, basis)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditViolation {
    pub state: StateVector,
    pub choice: String,
    pub post: StateVector,
    /// 1-based matrix position.
    pub row: usize,
    pub col: usize,
    pub entry: i64,
    /// `f_col(post)`
    pub lhs: i64,
    /// `f_row(pre) + entry`
    pub rhs: i64,
}

impl fmt::Display for AuditViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "state {} --[{}]--> {}: entry ({},{}) = {}, f{}(post) = {} > f{}(pre) + {} = {}",
            self.state,
            self.choice,
            self.post,
            self.row,
            self.col,
            self.entry,
            self.col,
            self.lhs,
            self.row,
            self.entry,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditOutcome {
    Pass { transitions_checked: u64 },
    Violation(AuditViolation),
}

impl AuditOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AuditOutcome::Pass { .. })
    }
}

/// Checks every finite entry of `m` against all capped one-step
/// transitions of the case from guarded states of `bx`. Reports the first
/// violation in state order, then choice order, then row-major entry order.
pub fn audit_matrix(
    p: &Program,
    case_id: u32,
    basis: &MeasureBasis,
    m: &TropicalMatrix,
    bx: &StateBox,
    input_cap: i64,
) -> Result<AuditOutcome, SctError> {
    if m.dim() != basis.len() {
        return Err(TropicalError::DimensionMismatch(m.dim(), basis.len()).into());
    }
    let case = p.case(case_id).ok_or(SctError::NoSuchCase(case_id))?;
    let mut checked = 0u64;
    for s in bx.states() {
        if !p.guard_holds(&s) {
            continue;
        }
        let pre = basis.eval(&s);
        for (choice, t) in case_transitions(p, case, &s, input_cap) {
            checked += 1;
            let post = basis.eval(t.as_slice());
            if let Some(v) = first_violation(m, &pre, &post) {
                let (row, col, entry) = v;
                return Ok(AuditOutcome::Violation(AuditViolation {
                    state: StateVector(s),
                    choice: choice.to_string(),
                    post: t,
                    row: row + 1,
                    col: col + 1,
                    entry,
                    lhs: post[col],
                    rhs: pre[row] + entry,
                }));
            }
        }
    }
    Ok(AuditOutcome::Pass {
        transitions_checked: checked,
    })
}

fn first_violation(m: &TropicalMatrix, pre: &[i64], post: &[i64]) -> Option<(usize, usize, i64)> {
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            if let Finite(l) = m.get(i, j) {
                if post[j] > pre[i] + l {
                    return Some((i, j, l));
                }
            }
        }
    }
    None
}

/// Exact product of generators along a case word (ids are 1-based).
pub fn product_along(
    generators: &[TropicalMatrix],
    word: &[u32],
) -> Result<TropicalMatrix, TropicalError> {
    let dim = generators.first().map_or(0, TropicalMatrix::dim);
    let mut acc = TropicalMatrix::identity(dim);
    for &c in word {
        acc = acc.mul(&generators[c as usize - 1])?;
    }
    Ok(acc)
}

/// A closure element with the shortest-found case word producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureElement {
    pub matrix: TropicalMatrix,
    pub word: Vec<u32>,
}

/// Least set containing the clamped generators and closed under clamped
/// product. Elements come back in discovery order: generators first, then
/// products breadth-first. Generator `g` gets the word `[g + 1]`.
pub fn closure(
    generators: &[TropicalMatrix],
    k: ClampBound,
) -> Result<Vec<ClosureElement>, TropicalError> {
    let mut elements: Vec<ClosureElement> = Vec::new();
    let mut index: BTreeMap<TropicalMatrix, usize> = BTreeMap::new();
    let mut work = VecDeque::new();
    let mut insert = |m: TropicalMatrix,
                      word: Vec<u32>,
                      elements: &mut Vec<ClosureElement>,
                      work: &mut VecDeque<usize>| {
        if !index.contains_key(&m) {
            index.insert(m.clone(), elements.len());
            work.push_back(elements.len());
            elements.push(ClosureElement { matrix: m, word });
        }
    };
    if let Some(g) = generators.first() {
        if let Some(bad) = generators.iter().find(|h| h.dim() != g.dim()) {
            return Err(TropicalError::DimensionMismatch(g.dim(), bad.dim()));
        }
    }
    for (g, m) in generators.iter().enumerate() {
        insert(m.clamped(k), vec![g as u32 + 1], &mut elements, &mut work);
    }
    while let Some(a) = work.pop_front() {
        // pair `a` with everything known so far, itself included; later
        // arrivals pair with `a` when they are popped
        for b in 0..=a {
            for (l, r) in [(a, b), (b, a)] {
                let prod = elements[l].matrix.mul_clamped(&elements[r].matrix, k)?;
                let mut word = elements[l].word.clone();
                word.extend_from_slice(&elements[r].word);
                insert(prod, word, &mut elements, &mut work);
            }
        }
    }
    Ok(elements)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Criterion {
    /// Every closure element has a negative diagonal entry.
    A,
    /// Every closure element has a clamped power with a negative diagonal entry.
    B,
}

impl FromStr for Criterion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(Criterion::A),
            "B" | "b" => Ok(Criterion::B),
            _ => Err(format!("unknown criterion `{s}` (expected A or B)")),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::A => "A",
            Criterion::B => "B",
        })
    }
}

/// Why one closure element satisfies the criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// 1-based index of a negative diagonal entry.
    NegativeDiagonal(usize),
    /// Least exponent whose clamped power has a negative diagonal.
    Power(u32),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NegativeDiagonal(i) => write!(f, "diagonal {i} negative"),
            Witness::Power(p) => write!(f, "power {p} has a negative diagonal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SctCertificate {
    pub basis: MeasureBasis,
    /// Exact extracted matrices, one per case.
    pub generators: Vec<TropicalMatrix>,
    pub clamp: ClampBound,
    pub closure: Vec<ClosureElement>,
    pub criterion: Criterion,
    /// Parallel to `closure`; `None` marks an element failing the criterion.
    pub witnesses: Vec<Option<Witness>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SctOutcome {
    pub verdict: Verdict,
    pub certificate: SctCertificate,
    /// Index into `certificate.closure` of the first failing element.
    pub failing: Option<usize>,
    pub diagnostics: Vec<String>,
}

pub fn witness(m: &TropicalMatrix, criterion: Criterion, k: ClampBound) -> Option<Witness> {
    match criterion {
        Criterion::A => m.negative_diagonal_index().map(|i| Witness::NegativeDiagonal(i + 1)),
        Criterion::B => m.power_diag_negative(k).map(Witness::Power),
    }
}

/// Extracts generators, closes them under clamped product and applies the
/// criterion to every element.
pub fn decide(
    p: &Program,
    basis: &MeasureBasis,
    k: ClampBound,
    criterion: Criterion,
) -> Result<SctOutcome, SctError> {
    let generators = extract_generators(p, basis)?;
    let mut diagnostics = Vec::new();
    for (g, m) in generators.iter().enumerate() {
        if m.exceeds(k) {
            diagnostics.push(format!(
                "case {} matrix has entries beyond +-{k}; clamped before closure",
                g + 1
            ));
        }
        if !m.column_condition() {
            diagnostics.push(format!(
                "case {} matrix has a column with two finite entries",
                g + 1
            ));
        }
    }
    let elements = closure(&generators, k)?;
    let witnesses: Vec<_> = elements
        .iter()
        .map(|e| witness(&e.matrix, criterion, k))
        .collect();
    let failing = witnesses.iter().position(Option::is_none);
    if let Some(f) = failing {
        let word: Vec<String> = elements[f].word.iter().map(u32::to_string).collect();
        diagnostics.push(format!(
            "closure element {} (case word {}) fails criterion {criterion}",
            f + 1,
            word.join(".")
        ));
    }
    let verdict = if failing.is_none() {
        Verdict::Terminates
    } else {
        Verdict::Unknown
    };
    Ok(SctOutcome {
        verdict,
        certificate: SctCertificate {
            basis: basis.clone(),
            generators,
            clamp: k,
            closure: elements,
            criterion,
            witnesses,
        },
        failing,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::tropical::matrix;

    fn prog(text: &str) -> Program {
        Program::parse(text).unwrap()
    }

    #[test]
    fn program5_case2_pair_basis() {
        let p = prog(corpus::PROG5);
        let b = MeasureBasis::parse(&p, "x, y").unwrap();
        let m = extract_matrix(&p, 2, &b).unwrap();
        assert_eq!(m, matrix(&[&[None, Some(1)], &[Some(-2), None]]));
    }

    #[test]
    fn program5_case1_triple_basis() {
        let p = prog(corpus::PROG5);
        let b = MeasureBasis::parse(&p, "x, y, x + y").unwrap();
        let m = extract_matrix(&p, 1, &b).unwrap();
        assert_eq!(
            m,
            matrix(&[
                &[Some(-1), Some(0), None],
                &[None, None, None],
                &[Some(-2), Some(-1), None],
            ])
        );
    }

    #[test]
    fn basis_validation() {
        let p = prog(corpus::PROG5);
        assert!(MeasureBasis::parse(&p, "x - y").is_err());
        assert!(MeasureBasis::parse(&p, "x + 1").is_err());
        assert!(MeasureBasis::parse(&p, "0").is_err());
        let q = prog(corpus::PROG6);
        // y is only bounded below by zero there
        if q.guard_lower_bound(1).is_none_or(|lb| lb < 1) {
            assert!(MeasureBasis::parse(&q, "y").is_err());
        }
    }

    #[test]
    fn closure_of_shift_saturates() {
        let z = matrix(&[&[Some(-1), None], &[None, Some(-1)]]);
        let k = ClampBound::new(3).unwrap();
        let c = closure(&[z], k).unwrap();
        assert_eq!(c.len(), 3);
        let diags: Vec<_> = c.iter().map(|e| e.matrix.get(0, 0)).collect();
        assert_eq!(diags, vec![Finite(-1), Finite(-2), Finite(-3)]);
    }

    #[test]
    fn closure_of_idempotent() {
        let c = closure(&[matrix(&[&[Some(0)]])], ClampBound::default()).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn closure_words_reproduce_elements() {
        let p = prog(corpus::PROG4);
        let b = MeasureBasis::guarded_vars(&p).unwrap();
        let gens = extract_generators(&p, &b).unwrap();
        let k = ClampBound::new(2).unwrap();
        for e in closure(&gens, k).unwrap() {
            assert_eq!(product_along(&gens, &e.word).unwrap().clamped(k), e.matrix);
        }
    }

    #[test]
    fn audit_flags_loosened_entry() {
        let p = prog(corpus::PROG5);
        let b = MeasureBasis::parse(&p, "x, y").unwrap();
        let mut m = extract_matrix(&p, 2, &b).unwrap();
        let bx = StateBox::cube(2, 1, 6);
        assert!(audit_matrix(&p, 2, &b, &m, &bx, 3).unwrap().passed());
        m.set(0, 1, Finite(0));
        match audit_matrix(&p, 2, &b, &m, &bx, 3).unwrap() {
            AuditOutcome::Violation(v) => {
                assert_eq!((v.row, v.col), (1, 2));
                assert_eq!(v.state, StateVector(vec![1, 1]));
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }
}
