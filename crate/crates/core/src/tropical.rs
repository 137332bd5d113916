//! Min-plus matrices over the integers extended with `+inf`.
//!
//! Entry `(i, j)` of a size-change matrix bounds how measure `j` after a
//! step relates to measure `i` before it; the min-plus product composes two
//! steps in execution order. Products are exact (checked `i64`); `clamp`
//! coarsens a matrix into a finite domain so that closures and power
//! sequences must cycle.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropicalError {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("integer overflow in min-plus product")]
    Overflow,
    #[error("matrix text, line {line}: {message}")]
    Format { line: usize, message: String },
}

/// An integer or `+inf`. `Finite(_) < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Finite(i64),
    Infinite,
}

pub use Entry::{Finite, Infinite};

impl Entry {
    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Finite(v) => Some(v),
            Infinite => None,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Finite(v) if v < 0)
    }

    pub fn checked_add(self, rhs: Entry) -> Result<Entry, TropicalError> {
        match (self, rhs) {
            (Finite(a), Finite(b)) => a.checked_add(b).map(Finite).ok_or(TropicalError::Overflow),
            _ => Ok(Infinite),
        }
    }
}

impl Add for Entry {
    type Output = Entry;

    /// Panics on `i64` overflow; use [`Entry::checked_add`] where inputs are
    /// unbounded.
    fn add(self, rhs: Entry) -> Entry {
        self.checked_add(rhs).expect("tropical entry overflow")
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(v) => write!(f, "{v}"),
            Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Entry {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "+inf" | "∞" => Ok(Infinite),
            _ => s
                .parse::<i64>()
                .map(Finite)
                .map_err(|_| format!("bad entry `{s}`")),
        }
    }
}

/// Clamp parameter `K > 0`: finite entries below `-K` become `-K`, entries
/// above `K` become `inf`. Both moves only weaken a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClampBound(i64);

impl ClampBound {
    pub const DEFAULT: ClampBound = ClampBound(8);

    pub fn new(k: i64) -> Option<ClampBound> {
        (k > 0).then_some(ClampBound(k))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn apply(self, e: Entry) -> Entry {
        match e {
            Finite(v) if v > self.0 => Infinite,
            Finite(v) if v < -self.0 => Finite(-self.0),
            other => other,
        }
    }
}

impl Default for ClampBound {
    fn default() -> Self {
        ClampBound::DEFAULT
    }
}

impl fmt::Display for ClampBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Square min-plus matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropicalMatrix {
    dim: usize,
    entries: Vec<Entry>,
}

impl TropicalMatrix {
    pub fn filled(dim: usize, e: Entry) -> Self {
        assert!(dim >= 1, "matrices are at least 1x1");
        TropicalMatrix {
            dim,
            entries: vec![e; dim * dim],
        }
    }

    /// The multiplicative identity: 0 on the diagonal, `inf` elsewhere.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::filled(dim, Infinite);
        for i in 0..dim {
            m.set(i, i, Finite(0));
        }
        m
    }

    /// `value` on the diagonal, `inf` elsewhere. `diagonal(n, -1)` is the
    /// one-step shift that commutes with every matrix.
    pub fn diagonal(dim: usize, value: i64) -> Self {
        let mut m = Self::filled(dim, Infinite);
        for i in 0..dim {
            m.set(i, i, Finite(value));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Entry>>) -> Self {
        let dim = rows.len();
        assert!(dim >= 1, "matrices are at least 1x1");
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        TropicalMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Entry {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, e: Entry) {
        self.entries[i * self.dim + j] = e;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Entry]> {
        self.entries.chunks(self.dim)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Exact min-plus product `self · rhs`.
    pub fn mul(&self, rhs: &TropicalMatrix) -> Result<TropicalMatrix, TropicalError> {
        if self.dim != rhs.dim {
            return Err(TropicalError::DimensionMismatch(self.dim, rhs.dim));
        }
        let n = self.dim;
        let mut out = Self::filled(n, Infinite);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Infinite {
                    continue;
                }
                for j in 0..n {
                    let s = a.checked_add(rhs.get(k, j))?;
                    if s < out.get(i, j) {
                        out.set(i, j, s);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `clamp(self · rhs)`.
    pub fn mul_clamped(
        &self,
        rhs: &TropicalMatrix,
        k: ClampBound,
    ) -> Result<TropicalMatrix, TropicalError> {
        Ok(self.mul(rhs)?.clamped(k))
    }

    pub fn clamped(&self, k: ClampBound) -> TropicalMatrix {
        TropicalMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&e| k.apply(e)).collect(),
        }
    }

    /// True when clamping at `k` would change some entry.
    pub fn exceeds(&self, k: ClampBound) -> bool {
        self.entries.iter().any(|&e| k.apply(e) != e)
    }

    /// Entrywise `self <= other`.
    pub fn le(&self, other: &TropicalMatrix) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.cmp(b) != Ordering::Greater)
    }

    /// Least index with a negative diagonal entry.
    pub fn negative_diagonal_index(&self) -> Option<usize> {
        (0..self.dim).find(|&i| self.get(i, i).is_negative())
    }

    pub fn has_negative_diagonal(&self) -> bool {
        self.negative_diagonal_index().is_some()
    }

    /// Every column holds at most one finite entry.
    pub fn column_condition(&self) -> bool {
        (0..self.dim).all(|j| (0..self.dim).filter(|&i| self.get(i, j).is_finite()).count() <= 1)
    }

    /// Least `p >= 1` whose clamped power `clamp(A)^p` has a negative
    /// diagonal entry, or `None` when the (necessarily periodic) sequence
    /// of clamped powers never produces one.
    pub fn power_diag_negative(&self, k: ClampBound) -> Option<u32> {
        let base = self.clamped(k);
        let mut seen = BTreeSet::new();
        let mut power = base.clone();
        let mut p = 1u32;
        loop {
            if power.has_negative_diagonal() {
                return Some(p);
            }
            if !seen.insert(power.clone()) {
                return None;
            }
            // entries stay within [-K, K] or inf, so the product cannot overflow
            power = power.mul_clamped(&base, k).expect("clamped product");
            p += 1;
        }
    }

    /// Parses the text format: a line with `n`, then `n` rows of `n`
    /// whitespace-separated tokens, each an integer or `inf`. Blank lines
    /// and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<TropicalMatrix, TropicalError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let fmt_err = |line: usize, message: String| TropicalError::Format { line, message };
        let (line, header) = lines
            .next()
            .ok_or_else(|| fmt_err(1, "empty matrix text".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| fmt_err(line, format!("expected dimension, found `{header}`")))?;
        if n == 0 {
            return Err(fmt_err(line, "dimension must be at least 1".into()));
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, row) = lines
                .next()
                .ok_or_else(|| fmt_err(line, format!("expected {n} rows")))?;
            let entries: Vec<Entry> = row
                .split_whitespace()
                .map(|t| t.parse::<Entry>().map_err(|m| fmt_err(line, m)))
                .collect::<Result<_, _>>()?;
            if entries.len() != n {
                return Err(fmt_err(
                    line,
                    format!("expected {n} entries, found {}", entries.len()),
                ));
            }
            rows.push(entries);
        }
        if let Some((line, extra)) = lines.next() {
            return Err(fmt_err(line, format!("trailing content `{extra}`")));
        }
        Ok(TropicalMatrix::from_rows(rows))
    }
}

impl FromStr for TropicalMatrix {
    type Err = TropicalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TropicalMatrix::parse(s)
    }
}

/// Renders in the text format accepted by [`TropicalMatrix::parse`].
impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(Entry::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Shorthand for tests and fixtures: `m(&[&[Some(-1), None], ...])`.
pub fn matrix(rows: &[&[Option<i64>]]) -> TropicalMatrix {
    TropicalMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|e| e.map_or(Infinite, Finite)).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Option<i64> = None;

    #[test]
    fn entry_order_and_sum() {
        assert!(Finite(100) < Infinite);
        assert!(Finite(-3) < Finite(2));
        assert_eq!(Finite(2) + Infinite, Infinite);
        assert_eq!(Infinite + Infinite, Infinite);
        assert_eq!(Finite(2) + Finite(-5), Finite(-3));
        assert_eq!(
            Finite(i64::MAX).checked_add(Finite(1)),
            Err(TropicalError::Overflow)
        );
    }

    #[test]
    fn product_examples() {
        let c2 = matrix(&[&[I, Some(-2)], &[Some(1), I]]);
        assert_eq!(c2.mul(&c2).unwrap(), TropicalMatrix::diagonal(2, -1));
        let a = matrix(&[&[Some(3), Some(-1)], &[I, Some(0)]]);
        assert_eq!(TropicalMatrix::identity(2).mul(&a).unwrap(), a);
        assert_eq!(
            a.mul(&TropicalMatrix::identity(3)),
            Err(TropicalError::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn clamp_examples() {
        let k2 = ClampBound::new(2).unwrap();
        let a = matrix(&[&[Some(-5), Some(3)], &[Some(1), I]]);
        assert_eq!(a.clamped(k2), matrix(&[&[Some(-2), I], &[Some(1), I]]));
        let inside = matrix(&[&[Some(-2), Some(2)], &[Some(0), I]]);
        assert_eq!(inside.clamped(k2), inside);
        assert_eq!(a.clamped(k2).clamped(k2), a.clamped(k2));
        assert!(ClampBound::new(0).is_none());
    }

    #[test]
    fn power_search() {
        let k = ClampBound::new(4).unwrap();
        assert_eq!(TropicalMatrix::diagonal(2, -1).power_diag_negative(k), Some(1));
        let c2 = matrix(&[&[I, Some(-2)], &[Some(1), I]]);
        assert_eq!(c2.power_diag_negative(k), Some(2));
        assert_eq!(matrix(&[&[Some(0)]]).power_diag_negative(k), None);
        assert_eq!(TropicalMatrix::filled(3, Infinite).power_diag_negative(k), None);
    }

    #[test]
    fn scans() {
        let c1 = matrix(&[
            &[Some(-1), I, I, I],
            &[I, I, I, I],
            &[I, I, Some(0), I],
            &[I, I, I, Some(0)],
        ]);
        assert!(c1.has_negative_diagonal());
        assert_eq!(c1.negative_diagonal_index(), Some(0));
        assert!(!matrix(&[&[I, Some(-2)], &[Some(1), I]]).has_negative_diagonal());
        assert!(TropicalMatrix::filled(3, Infinite).column_condition());
        assert!(!matrix(&[&[Some(0), I], &[Some(1), I]]).column_condition());
    }

    #[test]
    fn text_format() {
        let text = "2\n-1 0\ninf inf\n";
        let m = TropicalMatrix::parse(text).unwrap();
        assert_eq!(m.to_string(), text);
        assert!(matches!(
            TropicalMatrix::parse("2\n1 2\n3\n"),
            Err(TropicalError::Format { line: 3, .. })
        ));
        assert!(TropicalMatrix::parse("2\n1 x\n0 0\n").is_err());
        assert!(TropicalMatrix::parse("0\n").is_err());
    }
}
