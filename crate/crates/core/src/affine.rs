//! Integer affine forms over a fixed, ordered variable set.

use std::fmt;

use crate::program::EvalError;

/// `constant + Σ coeffs[v] * var[v]`, with one coefficient slot per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

impl Affine {
    pub fn zero(arity: usize) -> Self {
        Affine {
            coeffs: vec![0; arity],
            constant: 0,
        }
    }

    pub fn constant(arity: usize, c: i64) -> Self {
        Affine {
            coeffs: vec![0; arity],
            constant: c,
        }
    }

    pub fn var(arity: usize, v: usize) -> Self {
        let mut a = Affine::zero(arity);
        a.coeffs[v] = 1;
        a
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Indices with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, _)| v)
    }

    pub fn add_scaled(&mut self, other: &Affine, k: i64) {
        debug_assert_eq!(self.arity(), other.arity());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += k * b;
        }
        self.constant += k * other.constant;
    }

    pub fn scaled(&self, k: i64) -> Affine {
        Affine {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            constant: self.constant * k,
        }
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.add_scaled(other, -1);
        out
    }

    /// Checked evaluation at an integer point.
    pub fn eval(&self, point: &[i64]) -> Result<i64, EvalError> {
        debug_assert_eq!(point.len(), self.arity());
        let mut acc = self.constant;
        for (&c, &x) in self.coeffs.iter().zip(point) {
            if c == 0 {
                continue;
            }
            acc = c
                .checked_mul(x)
                .and_then(|t| acc.checked_add(t))
                .ok_or(EvalError::Overflow)?;
        }
        Ok(acc)
    }

    /// Unchecked evaluation for the hot loops of the bounded searches,
    /// which only ever see small box coordinates.
    #[inline]
    pub fn eval_small(&self, point: &[i64]) -> i64 {
        self.constant
            + self
                .coeffs
                .iter()
                .zip(point)
                .map(|(c, x)| c * x)
                .sum::<i64>()
    }

    /// Embeds a form over `n` variables into a form over `offset + n + ...`
    /// variables, placing the original slots at `offset..offset + n`.
    pub fn embed(&self, arity: usize, offset: usize) -> Affine {
        let mut out = Affine::constant(arity, self.constant);
        out.coeffs[offset..offset + self.arity()].copy_from_slice(&self.coeffs);
        out
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> AffineDisplay<'a, S> {
        AffineDisplay { form: self, names }
    }
}

pub struct AffineDisplay<'a, S> {
    form: &'a Affine,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for AffineDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &c) in self.form.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = self.names[v].as_ref();
            let mag = c.unsigned_abs();
            match (first, c < 0) {
                (true, false) => {}
                (true, true) => f.write_str("-")?,
                (false, false) => f.write_str(" + ")?,
                (false, true) => f.write_str(" - ")?,
            }
            if mag == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
            first = false;
        }
        let k = self.form.constant;
        if first {
            write!(f, "{k}")
        } else if k > 0 {
            write!(f, " + {k}")
        } else if k < 0 {
            write!(f, " - {}", k.unsigned_abs())
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        let names = ["x", "y"];
        let a = Affine {
            coeffs: vec![1, -2],
            constant: -3,
        };
        assert_eq!(a.display(&names).to_string(), "x - 2*y - 3");
        let b = Affine {
            coeffs: vec![-1, 0],
            constant: 0,
        };
        assert_eq!(b.display(&names).to_string(), "-x");
        assert_eq!(Affine::constant(2, -4).display(&names).to_string(), "-4");
    }

    #[test]
    fn eval_overflow_is_reported() {
        let a = Affine {
            coeffs: vec![i64::MAX],
            constant: 1,
        };
        assert_eq!(a.eval(&[1]), Err(EvalError::Overflow));
        assert_eq!(a.eval(&[0]), Ok(1));
    }
}
