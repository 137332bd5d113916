//! Guarded integer loops with user-selected cases.
//!
//! A program is a single `while` loop over integer variables. Each
//! iteration the user picks one case; the case then updates the variables
//! simultaneously (every right-hand side reads the pre-state). Updates may
//! read a value from the user, optionally bounded below by an affine
//! expression of the pre-state.
//!
//! ```text
//! program prog5
//! vars x y : int
//! while x > 0 and y > 0
//! case 1:
//!   x := x - 1
//!   y := x
//! case 2:
//!   x := y - 2
//!   y := x + 1
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::affine::Affine;
use crate::syntax::{parse_affine, tokenize, Cursor, SyntaxError, Tok, Token, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("semantic error at {line}:{col}: {message}")]
    Semantic {
        line: usize,
        col: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("state has {got} components, program declares {expected} variables")]
    Arity { expected: usize, got: usize },
    #[error("guard does not hold in state {0}")]
    GuardViolated(StateVector),
    #[error("no case {0}")]
    NoSuchCase(u32),
    #[error("case {case} reads {expected} inputs, {got} supplied")]
    InputCount {
        case: u32,
        expected: usize,
        got: usize,
    },
    #[error("input for `{var}` is {value}, below its lower bound {lower}")]
    InputBelowBound { var: String, value: i64, lower: i64 },
    #[error("integer overflow")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardCmp {
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardAtom {
    pub var: usize,
    pub cmp: GuardCmp,
    pub bound: i64,
}

impl GuardAtom {
    #[inline]
    pub fn holds(&self, s: &[i64]) -> bool {
        match self.cmp {
            GuardCmp::Gt => s[self.var] > self.bound,
            GuardCmp::Ge => s[self.var] >= self.bound,
        }
    }

    /// Least integer value of the variable admitted by this atom.
    pub fn lower(&self) -> i64 {
        match self.cmp {
            GuardCmp::Gt => self.bound + 1,
            GuardCmp::Ge => self.bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UpdateRhs {
    Affine(Affine),
    /// Any integer the user chooses.
    InputAny,
    /// Any integer at least the given affine bound of the pre-state.
    InputAtLeast(Affine),
    /// Floor division of a variable by a constant `>= 2`.
    DivByConst { var: usize, divisor: i64 },
}

impl UpdateRhs {
    pub fn is_input(&self) -> bool {
        matches!(self, UpdateRhs::InputAny | UpdateRhs::InputAtLeast(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Case {
    pub id: u32,
    /// `(target variable, rhs)` in source order; unlisted variables keep
    /// their value.
    pub updates: Vec<(usize, UpdateRhs)>,
}

impl Case {
    pub fn update_of(&self, var: usize) -> Option<&UpdateRhs> {
        self.updates
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, rhs)| rhs)
    }

    /// Input-reading updates in source order; `input_choices` line up with these.
    pub fn input_updates(&self) -> impl Iterator<Item = (usize, &UpdateRhs)> {
        self.updates
            .iter()
            .filter(|(_, rhs)| rhs.is_input())
            .map(|(v, rhs)| (*v, rhs))
    }

    pub fn input_count(&self) -> usize {
        self.input_updates().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct StateVector(pub Vec<i64>);

impl StateVector {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for StateVector {
    fn from(v: Vec<i64>) -> Self {
        StateVector(v)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    pub name: String,
    pub vars: Vec<String>,
    pub guard: Vec<GuardAtom>,
    pub cases: Vec<Case>,
}

impl Program {
    pub fn parse(text: &str) -> Result<Program, ParseError> {
        Parser::new(text)?.program()
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn case(&self, id: u32) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }

    pub fn case_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.cases.iter().map(|c| c.id)
    }

    #[inline]
    pub fn guard_holds(&self, s: &[i64]) -> bool {
        self.guard.iter().all(|a| a.holds(s))
    }

    /// Strongest lower bound the guard places on `var`, if any.
    pub fn guard_lower_bound(&self, var: usize) -> Option<i64> {
        self.guard
            .iter()
            .filter(|a| a.var == var)
            .map(GuardAtom::lower)
            .max()
    }

    /// One resolved transition: the post-state of `case_id` from `s` with
    /// the given input values, one per input-reading update in source order.
    pub fn successor(
        &self,
        s: &StateVector,
        case_id: u32,
        input_choices: &[i64],
    ) -> Result<StateVector, EvalError> {
        let pre = s.as_slice();
        if pre.len() != self.arity() {
            return Err(EvalError::Arity {
                expected: self.arity(),
                got: pre.len(),
            });
        }
        if !self.guard_holds(pre) {
            return Err(EvalError::GuardViolated(s.clone()));
        }
        let case = self.case(case_id).ok_or(EvalError::NoSuchCase(case_id))?;
        let expected = case.input_count();
        if input_choices.len() != expected {
            return Err(EvalError::InputCount {
                case: case_id,
                expected,
                got: input_choices.len(),
            });
        }
        let mut post = pre.to_vec();
        let mut inputs = input_choices.iter();
        for (var, rhs) in &case.updates {
            post[*var] = match rhs {
                UpdateRhs::Affine(a) => a.eval(pre)?,
                UpdateRhs::InputAny => *inputs.next().expect("input count checked"),
                UpdateRhs::InputAtLeast(lower) => {
                    let value = *inputs.next().expect("input count checked");
                    let lower = lower.eval(pre)?;
                    if value < lower {
                        return Err(EvalError::InputBelowBound {
                            var: self.vars[*var].clone(),
                            value,
                            lower,
                        });
                    }
                    value
                }
                UpdateRhs::DivByConst { var: src, divisor } => pre[*src].div_euclid(*divisor),
            };
        }
        Ok(StateVector(post))
    }

    /// Admissible input ranges for one case at `s`: `[lower, lower + cap]`
    /// for bounded inputs, `[-cap, cap]` for unrestricted ones.
    pub fn input_ranges(&self, case: &Case, s: &[i64], cap: i64) -> Vec<(i64, i64)> {
        case.input_updates()
            .map(|(_, rhs)| match rhs {
                UpdateRhs::InputAtLeast(lower) => {
                    let lo = lower.eval_small(s);
                    (lo, lo + cap)
                }
                _ => (-cap, cap),
            })
            .collect()
    }
}

impl FromStr for Program {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Program::parse(s)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "program {}", self.name)?;
        writeln!(f, "vars {} : int", self.vars.join(" "))?;
        f.write_str("while ")?;
        for (i, a) in self.guard.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            let op = match a.cmp {
                GuardCmp::Gt => ">",
                GuardCmp::Ge => ">=",
            };
            write!(f, "{} {op} {}", self.vars[a.var], a.bound)?;
        }
        writeln!(f)?;
        for case in &self.cases {
            writeln!(f, "case {}:", case.id)?;
            for (var, rhs) in &case.updates {
                write!(f, "  {} := ", self.vars[*var])?;
                match rhs {
                    UpdateRhs::Affine(a) => write!(f, "{}", a.display(&self.vars))?,
                    UpdateRhs::InputAny => f.write_str("input")?,
                    UpdateRhs::InputAtLeast(a) => {
                        write!(f, "input(>= {})", a.display(&self.vars))?
                    }
                    UpdateRhs::DivByConst { var, divisor } => {
                        write!(f, "{} div {divisor}", self.vars[*var])?
                    }
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

struct Parser {
    cur: Cursor,
}

fn semantic(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        line,
        col,
        message: message.into(),
    }
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        if !text.is_ascii() {
            return Err(SyntaxError::new(1, 1, "program text must be ASCII").into());
        }
        Ok(Parser {
            cur: Cursor::new(tokenize(text)?),
        })
    }

    fn end_of_line(&mut self) -> Result<(), ParseError> {
        self.cur.expect(&Tok::Newline, "end of line")?;
        Ok(())
    }

    fn program(mut self) -> Result<Program, ParseError> {
        self.cur.skip_newlines();
        self.cur.expect_keyword("program")?;
        let (name, _) = self.cur.expect_ident()?;
        self.end_of_line()?;

        self.cur.expect_keyword("vars")?;
        let mut vars: Vec<String> = Vec::new();
        while self.cur.peek().tok != Tok::Colon {
            let (v, t) = self.cur.expect_ident()?;
            if vars.contains(&v) {
                return Err(semantic(t.line, t.col, format!("duplicate variable `{v}`")));
            }
            vars.push(v);
        }
        if vars.is_empty() {
            return Err(self.cur.error("expected at least one variable").into());
        }
        self.cur.expect(&Tok::Colon, "`:`")?;
        self.cur.expect_keyword("int")?;
        self.end_of_line()?;

        self.cur.expect_keyword("while")?;
        let mut guard = vec![self.guard_atom(&vars)?];
        while self.cur.at_keyword("and") {
            self.cur.next();
            guard.push(self.guard_atom(&vars)?);
        }
        self.end_of_line()?;

        let mut cases: Vec<Case> = Vec::new();
        if self.cur.at_keyword("case") {
            while self.cur.at_keyword("case") {
                let kw = self.cur.next();
                let id = self.cur.expect_int()?;
                let expected = cases.len() as i64 + 1;
                if cases.iter().any(|c| c.id as i64 == id) {
                    return Err(semantic(kw.line, kw.col, format!("duplicate case id {id}")));
                }
                if id != expected {
                    return Err(semantic(
                        kw.line,
                        kw.col,
                        format!("case ids must be 1..m in order; expected {expected}, found {id}"),
                    ));
                }
                self.cur.expect(&Tok::Colon, "`:`")?;
                self.end_of_line()?;
                let updates = self.updates(&vars)?;
                cases.push(Case {
                    id: id as u32,
                    updates,
                });
            }
        } else {
            // single case without a control read
            let updates = self.updates(&vars)?;
            cases.push(Case { id: 1, updates });
        }
        self.cur.skip_newlines();
        if self.cur.peek().tok != Tok::Eof {
            return Err(self
                .cur
                .error(format!("unexpected {}", self.cur.peek().tok))
                .into());
        }
        Ok(Program {
            name,
            vars,
            guard,
            cases,
        })
    }

    fn var_ref(&mut self, vars: &[String]) -> Result<usize, ParseError> {
        let (v, t) = self.cur.expect_ident()?;
        vars.iter()
            .position(|x| *x == v)
            .ok_or_else(|| semantic(t.line, t.col, format!("undeclared variable `{v}`")))
    }

    fn guard_atom(&mut self, vars: &[String]) -> Result<GuardAtom, ParseError> {
        let var = self.var_ref(vars)?;
        let cmp = match self.cur.next() {
            Token {
                tok: Tok::Gt, ..
            } => GuardCmp::Gt,
            Token {
                tok: Tok::Ge, ..
            } => GuardCmp::Ge,
            t => {
                return Err(SyntaxError::new(
                    t.line,
                    t.col,
                    format!("expected `>` or `>=`, found {}", t.tok),
                )
                .into())
            }
        };
        let bound = self.cur.expect_int()?;
        Ok(GuardAtom { var, cmp, bound })
    }

    fn updates(&mut self, vars: &[String]) -> Result<Vec<(usize, UpdateRhs)>, ParseError> {
        let mut updates: Vec<(usize, UpdateRhs)> = Vec::new();
        loop {
            let is_update = matches!(self.cur.peek().tok, Tok::Ident { .. })
                && self.cur.peek_at(1) == &Tok::Assign;
            if !is_update {
                break;
            }
            let line_tok = self.cur.peek().clone();
            let var = self.var_ref(vars)?;
            if updates.iter().any(|(v, _)| *v == var) {
                return Err(semantic(
                    line_tok.line,
                    line_tok.col,
                    format!("`{}` updated twice in one case", vars[var]),
                ));
            }
            self.cur.expect(&Tok::Assign, "`:=`")?;
            let rhs = self.rhs(vars)?;
            self.end_of_line()?;
            updates.push((var, rhs));
        }
        if updates.is_empty() {
            return Err(self.cur.error("expected at least one update `var := rhs`").into());
        }
        Ok(updates)
    }

    fn rhs(&mut self, vars: &[String]) -> Result<UpdateRhs, ParseError> {
        if self.cur.at_keyword("input") {
            self.cur.next();
            if self.cur.eat(&Tok::LParen) {
                self.cur.expect(&Tok::Ge, "`>=`")?;
                let lower = parse_affine(&mut self.cur, &Vars(vars)).map_err(self.undeclared())?;
                self.cur.expect(&Tok::RParen, "`)`")?;
                return Ok(UpdateRhs::InputAtLeast(lower));
            }
            return Ok(UpdateRhs::InputAny);
        }
        let is_div = matches!(self.cur.peek().tok, Tok::Ident { .. })
            && matches!(self.cur.peek_at(1), Tok::Ident { name, primed: false } if name == "div");
        if is_div {
            let var = self.var_ref(vars)?;
            let kw = self.cur.next();
            let divisor = self.cur.expect_int()?;
            if divisor < 2 {
                return Err(semantic(
                    kw.line,
                    kw.col,
                    format!("divisor must be at least 2, found {divisor}"),
                ));
            }
            return Ok(UpdateRhs::DivByConst { var, divisor });
        }
        let a = parse_affine(&mut self.cur, &Vars(vars)).map_err(self.undeclared())?;
        Ok(UpdateRhs::Affine(a))
    }

    /// Undeclared names inside expressions are semantic, not syntax, errors.
    fn undeclared(&self) -> impl Fn(SyntaxError) -> ParseError {
        |e: SyntaxError| {
            if e.message.starts_with("undeclared variable") {
                semantic(e.line, e.col, e.message)
            } else {
                ParseError::Syntax(e)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn parses_program4() {
        let p = Program::parse(corpus::PROG4).unwrap();
        assert_eq!(p.vars, ["w", "x", "y", "z"]);
        assert_eq!(p.guard.len(), 4);
        assert_eq!(p.cases.len(), 3);
        assert!(matches!(
            p.case(1).unwrap().update_of(1),
            Some(UpdateRhs::InputAtLeast(_))
        ));
    }

    #[test]
    fn parses_headerless_single_case() {
        let p = Program::parse(corpus::PROG6).unwrap();
        assert_eq!(p.cases.len(), 1);
        assert_eq!(p.cases[0].id, 1);
        let nt = Program::parse(corpus::NOT_TRANSITIVE).unwrap();
        assert_eq!(
            nt.cases[0].updates[0].1,
            UpdateRhs::DivByConst { var: 0, divisor: 2 }
        );
    }

    #[test]
    fn undeclared_variable_is_semantic_error() {
        let text = "program p\nvars x : int\nwhile x > 0\ncase 1:\n  x := q + 1\n";
        match Program::parse(text) {
            Err(ParseError::Semantic { line, col, message }) => {
                assert_eq!((line, col), (5, 8));
                assert!(message.contains("q"));
            }
            other => panic!("expected semantic error, got {other:?}"),
        }
        let text = "program p\nvars x : int\nwhile q > 0\n  x := x\n";
        assert!(matches!(Program::parse(text), Err(ParseError::Semantic { .. })));
    }

    #[test]
    fn duplicate_and_gapped_case_ids() {
        let dup = "program p\nvars x : int\nwhile x > 0\ncase 1:\n x := x - 1\ncase 1:\n x := x\n";
        let err = Program::parse(dup).unwrap_err();
        assert!(err.to_string().contains("duplicate case id"), "{err}");
        let gap = "program p\nvars x : int\nwhile x > 0\ncase 2:\n x := x - 1\n";
        assert!(matches!(Program::parse(gap), Err(ParseError::Semantic { .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let bad = "program p\nvars x : int\nwhile x < 0\n x := x\n";
        match Program::parse(bad) {
            Err(ParseError::Syntax(e)) => assert_eq!((e.line, e.col), (3, 9)),
            other => panic!("{other:?}"),
        }
        let bad_div = "program p\nvars x : int\nwhile x > 0\n x := x div 1\n";
        assert!(matches!(Program::parse(bad_div), Err(ParseError::Semantic { .. })));
        let twice = "program p\nvars x : int\nwhile x > 0\n x := x\n x := 1\n";
        assert!(matches!(Program::parse(twice), Err(ParseError::Semantic { .. })));
    }

    #[test]
    fn guard_examples() {
        let p3 = Program::parse(corpus::PROG3).unwrap();
        assert!(p3.guard_holds(&[1, 1, 1]));
        assert!(!p3.guard_holds(&[0, 5, 5]));
        let p6 = Program::parse(corpus::PROG6).unwrap();
        assert!(p6.guard_holds(&[3, -100]));
    }

    #[test]
    fn successor_examples() {
        let p5 = Program::parse(corpus::PROG5).unwrap();
        let s = StateVector(vec![4, 7]);
        assert_eq!(p5.successor(&s, 1, &[]).unwrap().0, vec![3, 4]);
        assert_eq!(p5.successor(&s, 2, &[]).unwrap().0, vec![5, 5]);
        let p2 = Program::parse(corpus::PROG2).unwrap();
        assert_eq!(
            p2.successor(&StateVector(vec![1, 1]), 1, &[]).unwrap().0,
            vec![11, 0]
        );
    }

    #[test]
    fn successor_errors() {
        let p4 = Program::parse(corpus::PROG4).unwrap();
        let s = StateVector(vec![1, 1, 1, 1]);
        assert!(matches!(
            p4.successor(&s, 2, &[1]),
            Err(EvalError::InputBelowBound { lower: 2, .. })
        ));
        assert!(matches!(
            p4.successor(&s, 2, &[]),
            Err(EvalError::InputCount { .. })
        ));
        assert!(matches!(p4.successor(&s, 4, &[]), Err(EvalError::NoSuchCase(4))));
        let dead = StateVector(vec![0, 1, 1, 1]);
        assert!(matches!(
            p4.successor(&dead, 1, &[5]),
            Err(EvalError::GuardViolated(_))
        ));
        assert_eq!(p4.successor(&s, 2, &[2]).unwrap().0, vec![1, 0, 2, 1]);
    }

    #[test]
    fn floor_division_rounds_down() {
        let p = Program::parse(
            "program d\nvars x : int\nwhile x >= -10\n x := x div 2\n",
        )
        .unwrap();
        assert_eq!(p.successor(&StateVector(vec![-3]), 1, &[]).unwrap().0, vec![-2]);
        assert_eq!(p.successor(&StateVector(vec![5]), 1, &[]).unwrap().0, vec![2]);
    }

    #[test]
    fn corpus_round_trips() {
        for (_, text) in corpus::PROGRAMS {
            let p = Program::parse(text).unwrap();
            let printed = p.to_string();
            assert_eq!(Program::parse(&printed).unwrap(), p, "{printed}");
        }
    }
}
