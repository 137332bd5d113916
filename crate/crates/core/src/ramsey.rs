//! Finite Ramsey machinery: edge colorings of complete graphs on vertices
//! `1..=n`, transitive colorings, monochromatic increasing paths (MIPs),
//! the exact transitive Ramsey numbers with their extremal colorings,
//! exhaustive homogeneous-set search and monotone subsequences.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Upper limit on `C(n, k) * C(k, 2)` for `find_homogeneous`.
pub const HOMOGENEOUS_BUDGET: u128 = 100_000_000;
/// Largest vertex count `build_extremal` will materialize.
pub const MAX_EXTREMAL_VERTICES: u128 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("edge ({i},{j}) has color {color}, outside 1..={colors}")]
    ColorOutOfRange {
        i: usize,
        j: usize,
        color: u32,
        colors: u32,
    },
    #[error("coloring text, line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("search needs {needed} steps, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("sequence repeats the value {0}")]
    DuplicateElement(i64),
    #[error("value does not fit in 128 bits")]
    Overflow,
}

/// A coloring of the edges of `K_n` with colors `1..=c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    n: usize,
    c: u32,
    /// Pair `i < j` lives at `(j-1)(j-2)/2 + (i-1)`.
    colors: Vec<u32>,
}

fn slot(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    (j - 1) * (j - 2) / 2 + (i - 1)
}

fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl EdgeColoring {
    pub fn constant(n: usize, c: u32, color: u32) -> Result<EdgeColoring, RamseyError> {
        EdgeColoring::from_fn(n, c, |_, _| color)
    }

    /// Colors each pair `i < j` with `f(i, j)`.
    pub fn from_fn(
        n: usize,
        c: u32,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Result<EdgeColoring, RamseyError> {
        if c == 0 {
            return Err(RamseyError::InvalidParams("need at least one color".into()));
        }
        let mut colors = vec![0; pairs(n)];
        for j in 2..=n {
            for i in 1..j {
                let color = f(i, j);
                if color == 0 || color > c {
                    return Err(RamseyError::ColorOutOfRange {
                        i,
                        j,
                        color,
                        colors: c,
                    });
                }
                colors[slot(i, j)] = color;
            }
        }
        Ok(EdgeColoring { n, c, colors })
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> u32 {
        self.c
    }

    /// Color of the edge `{i, j}`, `i != j`, both in `1..=n`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        debug_assert!(i != j && i >= 1 && j >= 1 && i.max(j) <= self.n);
        self.colors[slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, color: u32) {
        assert!(color >= 1 && color <= self.c, "color out of range");
        let s = slot(i, j);
        self.colors[s] = color;
    }

    /// Least triple `i < j < k` (lexicographically) with
    /// `COL(i,j) = COL(j,k) != COL(i,k)`.
    pub fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                let a = self.get(i, j);
                for k in j + 1..=self.n {
                    if self.get(j, k) == a && self.get(i, k) != a {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_witness().is_none()
    }

    /// Is every edge inside `set` the same color?
    pub fn is_homogeneous(&self, set: &[usize]) -> bool {
        let mut color = None;
        for (a, &u) in set.iter().enumerate() {
            for &v in &set[a + 1..] {
                let c = self.get(u, v);
                if *color.get_or_insert(c) != c {
                    return false;
                }
            }
        }
        true
    }

    /// Parses `n c` followed by one `i j color` line per pair.
    pub fn parse(text: &str) -> Result<EdgeColoring, RamseyError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line, message: String| RamseyError::Format { line, message };
        let (line, header) = lines.next().ok_or_else(|| err(1, "empty coloring".into()))?;
        let nums = |line: usize, l: &str| -> Result<Vec<u64>, RamseyError> {
            l.split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| err(line, format!("bad number `{t}`"))))
                .collect()
        };
        let head = nums(line, header)?;
        let [n, c] = head[..] else {
            return Err(err(line, "header must be `n c`".into()));
        };
        let (n, c) = (n as usize, c as u32);
        if c == 0 {
            return Err(err(line, "need at least one color".into()));
        }
        let mut colors = vec![0u32; pairs(n)];
        for (line, l) in lines {
            let v = nums(line, l)?;
            let [i, j, color] = v[..] else {
                return Err(err(line, "expected `i j color`".into()));
            };
            let (i, j, color) = (i as usize, j as usize, color as u32);
            if i == j || i == 0 || j == 0 || i.max(j) > n {
                return Err(err(line, format!("no edge ({i},{j}) in K_{n}")));
            }
            if color == 0 || color > c {
                return Err(RamseyError::ColorOutOfRange { i, j, color, colors: c });
            }
            if colors[slot(i, j)] != 0 {
                return Err(err(line, format!("edge ({i},{j}) colored twice")));
            }
            colors[slot(i, j)] = color;
        }
        if let Some(missing) = colors.iter().position(|&x| x == 0) {
            let (mut i, mut j) = (1, 2);
            while slot(i, j) != missing {
                i += 1;
                if i == j {
                    j += 1;
                    i = 1;
                }
            }
            return Err(err(text.lines().count(), format!("edge ({i},{j}) has no color")));
        }
        Ok(EdgeColoring { n, c, colors })
    }
}

impl FromStr for EdgeColoring {
    type Err = RamseyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EdgeColoring::parse(s)
    }
}

impl fmt::Display for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.c)?;
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                writeln!(f, "{i} {j} {}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// A longest monochromatic increasing path and the length vectors behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MipResult {
    pub path: Vec<usize>,
    pub color: u32,
    /// `vectors[v-1][q-1]`: length of the longest MIP of color `q` ending at `v`.
    pub vectors: Vec<Vec<usize>>,
}

impl MipResult {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }
}

/// Dynamic program over vertices in increasing order. Ties go to the
/// least end vertex, then the least color, then the least predecessor.
pub fn longest_mip(col: &EdgeColoring) -> MipResult {
    let (n, c) = (col.n, col.c as usize);
    let mut len = vec![vec![1usize; c]; n + 1];
    let mut pred = vec![vec![0usize; c]; n + 1];
    for v in 1..=n {
        for u in 1..v {
            let q = col.get(u, v) as usize - 1;
            if len[u][q] + 1 > len[v][q] {
                len[v][q] = len[u][q] + 1;
                pred[v][q] = u;
            }
        }
    }
    let mut best: Option<(usize, usize, usize)> = None;
    for v in 1..=n {
        for q in 0..c {
            if best.is_none_or(|(l, _, _)| len[v][q] > l) {
                best = Some((len[v][q], v, q));
            }
        }
    }
    let vectors = len[1..].to_vec();
    let Some((_, end, q)) = best else {
        return MipResult {
            path: Vec::new(),
            color: 1,
            vectors,
        };
    };
    let mut path = vec![end];
    let mut v = end;
    while pred[v][q] != 0 {
        v = pred[v][q];
        path.push(v);
    }
    path.reverse();
    MipResult {
        path,
        color: q as u32 + 1,
        vectors,
    }
}

fn check_kc(k: u32, c: u32) -> Result<(), RamseyError> {
    if k < 2 || c < 1 {
        return Err(RamseyError::InvalidParams(format!(
            "need k >= 2 and c >= 1, got k = {k}, c = {c}"
        )));
    }
    Ok(())
}

/// Least `n` such that every transitive `c`-coloring of `K_n` has a MIP
/// of length `k`: `(k-1)^c + 1`.
pub fn trt_size(k: u32, c: u32) -> Result<u128, RamseyError> {
    check_kc(k, c)?;
    (k as u128 - 1)
        .checked_pow(c)
        .and_then(|p| p.checked_add(1))
        .ok_or(RamseyError::Overflow)
}

/// A transitive `c`-coloring of `K_{(k-1)^c}` with no MIP of length `k`.
/// With one color it is `K_{k-1}` in color 1; each further level replaces
/// every vertex by a `K_{k-1}` in the new color `c`, and edges between
/// copies keep the color of the edge between the vertices they replaced.
pub fn build_extremal(k: u32, c: u32) -> Result<EdgeColoring, RamseyError> {
    let size = trt_size(k, c)? - 1;
    if size > MAX_EXTREMAL_VERTICES {
        return Err(RamseyError::InvalidParams(format!(
            "{size} vertices exceeds the limit of {MAX_EXTREMAL_VERTICES}"
        )));
    }
    let group = k as usize - 1;
    let mut col = EdgeColoring::constant(group, c, 1)?;
    for level in 2..=c {
        let outer = col;
        col = EdgeColoring::from_fn(outer.n * group, c, |i, j| {
            let (a, b) = ((i - 1) / group + 1, (j - 1) / group + 1);
            if a == b {
                level
            } else {
                outer.get(a, b)
            }
        })?;
    }
    Ok(col)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Lexicographically least homogeneous `k`-set, by exhaustive search.
pub fn find_homogeneous(col: &EdgeColoring, k: usize) -> Result<Option<Vec<usize>>, RamseyError> {
    let needed = binomial(col.n as u128, k as u128).saturating_mul(binomial(k as u128, 2).max(1));
    if needed > HOMOGENEOUS_BUDGET {
        return Err(RamseyError::BudgetExceeded {
            needed,
            budget: HOMOGENEOUS_BUDGET,
        });
    }
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut chosen = Vec::with_capacity(k);
    Ok(extend_homogeneous(col, k, 1, None, &mut chosen).then_some(chosen))
}

fn extend_homogeneous(
    col: &EdgeColoring,
    k: usize,
    from: usize,
    color: Option<u32>,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    // not enough vertices left
    if col.n + 1 < from + (k - chosen.len()) {
        return false;
    }
    for v in from..=col.n {
        let edge = chosen.first().map(|&u| col.get(u, v));
        let target = color.or(edge);
        if chosen.iter().all(|&u| Some(col.get(u, v)) == target) {
            chosen.push(v);
            if extend_homogeneous(col, k, v + 1, target, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Every `c`-coloring of `K_n`, in odometer order over the pair table.
pub fn all_colorings(n: usize, c: u32) -> AllColorings {
    AllColorings {
        n,
        c,
        next: Some(vec![1; pairs(n)]),
    }
}

pub struct AllColorings {
    n: usize,
    c: u32,
    next: Option<Vec<u32>>,
}

impl Iterator for AllColorings {
    type Item = EdgeColoring;

    fn next(&mut self) -> Option<EdgeColoring> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut advanced = false;
        for x in succ.iter_mut() {
            if *x < self.c {
                *x += 1;
                advanced = true;
                break;
            }
            *x = 1;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(EdgeColoring {
            n: self.n,
            c: self.c,
            colors: cur,
        })
    }
}

/// A classical Ramsey number found by brute force, with a coloring of
/// `K_{value-1}` that has no homogeneous `k`-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseyValue {
    pub value: usize,
    pub colorings_checked: u128,
    pub witness: EdgeColoring,
}

/// Least `n <= max_n` where every `c`-coloring of `K_n` has a homogeneous
/// `k`-set; `None` when no such `n` exists up to `max_n`.
pub fn classical_ramsey(k: usize, c: u32, max_n: usize) -> Result<Option<RamseyValue>, RamseyError> {
    if k < 2 || c < 1 {
        return Err(RamseyError::InvalidParams(format!(
            "need k >= 2 and c >= 1, got k = {k}, c = {c}"
        )));
    }
    let mut witness = EdgeColoring::constant(k - 1, c, 1)?;
    let mut checked = 0u128;
    for n in k..=max_n {
        let total = (c as u128)
            .checked_pow(pairs(n) as u32)
            .ok_or(RamseyError::Overflow)?;
        if total > HOMOGENEOUS_BUDGET {
            return Err(RamseyError::BudgetExceeded {
                needed: total,
                budget: HOMOGENEOUS_BUDGET,
            });
        }
        let mut avoiding = None;
        for col in all_colorings(n, c) {
            checked += 1;
            if find_homogeneous(&col, k)?.is_none() {
                avoiding = Some(col);
                break;
            }
        }
        match avoiding {
            Some(col) => witness = col,
            None => {
                return Ok(Some(RamseyValue {
                    value: n,
                    colorings_checked: checked,
                    witness,
                }))
            }
        }
    }
    Ok(None)
}

/// The sandwich `c^(k/2) <= R(k, c) <= c^(ck - c + 1)` as floating bounds.
pub fn ramsey_bounds(k: u32, c: u32) -> (f64, f64) {
    let (k, c) = (k as f64, c as f64);
    (c.powf(k / 2.0), c.powf(c * k - c + 1.0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Monotone {
    /// 0-based positions in the input.
    pub positions: Vec<usize>,
    pub values: Vec<i64>,
    pub increasing: bool,
}

/// A monotone subsequence of length `k` when one exists along the longest
/// MIP of the ascending/descending coloring, else the longest found.
pub fn monotone_subsequence(seq: &[i64], k: usize) -> Result<Monotone, RamseyError> {
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(RamseyError::DuplicateElement(w[0]));
    }
    let col = EdgeColoring::from_fn(seq.len(), 2, |i, j| {
        if seq[i - 1] < seq[j - 1] {
            1
        } else {
            2
        }
    })?;
    let mip = longest_mip(&col);
    let mut positions: Vec<usize> = mip.path.iter().map(|v| v - 1).collect();
    positions.truncate(k);
    Ok(Monotone {
        values: positions.iter().map(|&i| seq[i]).collect(),
        increasing: mip.color == 1,
        positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn triangular_layout() {
        let col = EdgeColoring::from_fn(4, 3, |i, j| ((i + j) % 3) as u32 + 1).unwrap();
        for i in 1..=4 {
            for j in i + 1..=4 {
                assert_eq!(col.get(i, j), ((i + j) % 3) as u32 + 1);
                assert_eq!(col.get(j, i), col.get(i, j));
            }
        }
        assert_eq!(EdgeColoring::parse(&col.to_string()).unwrap(), col);
    }

    #[test]
    fn parse_rejects_gaps() {
        assert!(EdgeColoring::parse("3 2\n1 2 1\n1 3 1\n").is_err());
        assert!(EdgeColoring::parse("2 2\n1 2 3\n").is_err());
        assert!(EdgeColoring::parse("2 2\n1 2 1\n2 1 1\n").is_err());
    }

    #[test]
    fn pentagon_has_no_triangle() {
        let col = EdgeColoring::parse(corpus::PENTAGON_COL).unwrap();
        assert_eq!(find_homogeneous(&col, 3).unwrap(), None);
    }

    #[test]
    fn mip_small_cases() {
        let red = EdgeColoring::constant(4, 2, 1).unwrap();
        assert_eq!(longest_mip(&red).path, vec![1, 2, 3, 4]);
        let single = EdgeColoring::constant(1, 2, 1).unwrap();
        assert_eq!(longest_mip(&single).len(), 1);
        assert_eq!(longest_mip(&build_extremal(3, 2).unwrap()).len(), 2);
    }

    #[test]
    fn trt_formula() {
        assert_eq!(trt_size(3, 2).unwrap(), 5);
        for c in 1..6 {
            assert_eq!(trt_size(2, c).unwrap(), 2);
        }
        assert!(trt_size(1, 2).is_err());
        assert!(trt_size(3, 0).is_err());
    }

    #[test]
    fn extremal_shape() {
        let col = build_extremal(4, 2).unwrap();
        assert_eq!(col.vertices(), 9);
        assert!(col.is_transitive());
        assert_eq!(longest_mip(&col).len(), 3);
    }

    #[test]
    fn monotone_examples() {
        let m = monotone_subsequence(&[2, 1, 4, 3, 5], 3).unwrap();
        assert_eq!(m.values.len(), 3);
        assert!(m.increasing);
        assert!(m.values.windows(2).all(|w| w[0] < w[1]));
        let d = monotone_subsequence(&[3, 2, 1], 3).unwrap();
        assert_eq!((d.values, d.increasing), (vec![3, 2, 1], false));
        assert_eq!(monotone_subsequence(&[2, 1, 4, 3], 3).unwrap().values.len(), 2);
        assert_eq!(
            monotone_subsequence(&[1, 2, 1], 2),
            Err(RamseyError::DuplicateElement(1))
        );
    }

    #[test]
    fn colorings_are_enumerated_once() {
        let all: Vec<_> = all_colorings(4, 2).collect();
        assert_eq!(all.len(), 64);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 64);
    }
}
