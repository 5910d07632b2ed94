//! Sparse multivectors over `∧*ℝⁿ` and their text format.
//!
//! Text format: `3 + 2*e1 - 1/2*e13`. Blade suffixes list ascending 1-based
//! indices as digits; when any index is 10 or more the list form
//! `e{1,3,11}` is used instead.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 12;

pub fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// An element of `∧*ℝⁿ` with coefficients in `T`. Zero coefficients are never
/// stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Debug)]
pub struct Multivector<T> {
    dim: usize,
    terms: BTreeMap<Blade, T>,
}

pub type RationalMultivector = Multivector<Rational>;

impl<T: Scalar> Multivector<T> {
    /// # Panics
    /// If `dim` is outside `2..=12`.
    pub fn zero(dim: usize) -> Self {
        check_dim(dim).expect("invalid dimension");
        Multivector {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: T) -> Self {
        Self::from_blade(dim, Blade::SCALAR, value)
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, T::one())
    }

    /// The basis vector `e_i` (1-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index >= 1 && index <= dim, "basis index out of range");
        Self::from_blade(dim, Blade::vector(index), T::one())
    }

    /// `e_{i1} ∧ ... ∧ e_{ik}` for indices in any order; zero if one repeats.
    pub fn blade(dim: usize, indices: &[usize]) -> Self {
        assert!(indices.iter().all(|&i| i >= 1 && i <= dim), "blade index out of range");
        match Blade::from_indices(indices) {
            Some((sign, b)) => Self::from_blade(dim, b, T::from_int(sign as i64)),
            None => Self::zero(dim),
        }
    }

    pub fn pseudoscalar(dim: usize) -> Self {
        Self::from_blade(dim, Blade::pseudoscalar(dim), T::one())
    }

    pub fn from_blade(dim: usize, blade: Blade, value: T) -> Self {
        let mut out = Self::zero(dim);
        assert!(blade.fits(dim), "blade does not fit dimension");
        out.add_term(blade, value);
        out
    }

    /// Builds a multivector from `(blade, coefficient)` pairs, summing repeats.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Blade, T)>) -> Result<Self> {
        check_dim(dim)?;
        let mut out = Multivector {
            dim,
            terms: BTreeMap::new(),
        };
        for (b, v) in terms {
            if !b.fits(dim) {
                let index = b.indices().last().copied().unwrap_or(0);
                return Err(Error::IndexOutOfRange { index, dim });
            }
            out.add_term(b, v);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &T)> + '_ {
        self.terms.iter().map(|(b, v)| (*b, v))
    }

    pub fn coeff(&self, blade: Blade) -> T {
        self.terms.get(&blade).cloned().unwrap_or_else(T::zero)
    }

    /// Adds `value` to the coefficient of `blade`, dropping it if it cancels.
    pub fn add_term(&mut self, blade: Blade, value: T) {
        if value.is_zero() {
            return;
        }
        match self.terms.remove(&blade) {
            Some(old) => {
                let s = old + value;
                if !s.is_zero() {
                    self.terms.insert(blade, s);
                }
            }
            None => {
                self.terms.insert(blade, value);
            }
        }
    }

    /// The single grade of a nonzero homogeneous multivector.
    pub fn grade(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let k = it.next()?.grade();
        it.all(|b| b.grade() == k).then_some(k)
    }

    /// True if every term has grade `k` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    /// Grades carrying at least one nonzero coefficient, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = Self::zero(self.dim);
        for (b, v) in self.terms() {
            out.add_term(b, v.clone() * factor.clone());
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Multivector<U> {
        let mut out = Multivector::<U>::zero(self.dim);
        for (b, v) in self.terms() {
            out.add_term(b, f(v));
        }
        out
    }

    pub fn to_f64(&self) -> Multivector<f64> {
        self.map(|v| v.to_float())
    }

    pub(crate) fn ensure_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        let mut out = self.clone();
        for (b, v) in other.terms() {
            out.add_term(b, v.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_dim(other)?;
        let mut out = self.clone();
        for (b, v) in other.terms() {
            out.add_term(b, -v.clone());
        }
        Ok(out)
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|v| v.to_float().abs()).fold(0.0, f64::max)
    }

    /// Parses the text format into a multivector of dimension `dim`.
    pub fn parse(dim: usize, text: &str) -> Result<Self> {
        check_dim(dim)?;
        parse_terms(dim, text)
    }
}

impl Multivector<f64> {
    /// `‖a − b‖∞ ≤ tol · max(1, ‖a‖∞, ‖b‖∞)`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let diff = self.checked_sub(other).expect("same dim").max_abs();
        diff <= tol * 1f64.max(self.max_abs()).max(other.max_abs())
    }
}

impl<T: Scalar> Add for &Multivector<T> {
    type Output = Multivector<T>;
    /// # Panics
    /// On dimension mismatch; use [`Multivector::checked_add`] to get an error.
    fn add(self, rhs: Self) -> Multivector<T> {
        self.checked_add(rhs).expect("dimension mismatch")
    }
}

impl<T: Scalar> Sub for &Multivector<T> {
    type Output = Multivector<T>;
    fn sub(self, rhs: Self) -> Multivector<T> {
        self.checked_sub(rhs).expect("dimension mismatch")
    }
}

impl<T: Scalar> Add for Multivector<T> {
    type Output = Multivector<T>;
    fn add(self, rhs: Self) -> Multivector<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Multivector<T> {
    type Output = Multivector<T>;
    fn sub(self, rhs: Self) -> Multivector<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for &Multivector<T> {
    type Output = Multivector<T>;
    fn neg(self) -> Multivector<T> {
        self.map(|v| -v.clone())
    }
}

impl<T: Scalar> Neg for Multivector<T> {
    type Output = Multivector<T>;
    fn neg(self) -> Multivector<T> {
        -&self
    }
}

impl<T: Scalar> Mul<&Multivector<T>> for &Multivector<T> {
    type Output = Multivector<T>;
    /// Clifford product with the Euclidean inner product.
    fn mul(self, rhs: &Multivector<T>) -> Multivector<T> {
        self.clifford(rhs).expect("dimension mismatch")
    }
}

impl<T: Scalar> fmt::Display for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut sorted: Vec<(Blade, &T)> = self.terms().collect();
        sorted.sort_by_key(|(b, _)| b.display_key());
        for (pos, (blade, value)) in sorted.into_iter().enumerate() {
            let negative = value.is_negative();
            match (pos, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let magnitude = value.abs();
            if blade == Blade::SCALAR {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{blade}")?;
            } else {
                write!(f, "{magnitude}*{blade}")?;
            }
        }
        Ok(())
    }
}

fn parse_terms<T: Scalar>(dim: usize, text: &str) -> Result<Multivector<T>> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut out = Multivector::<T>::zero(dim);
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            if first {
                return Err(Error::parse(pos, "empty multivector"));
            }
            break;
        }
        let mut negative = false;
        if !first {
            match chars[pos] {
                '+' => pos += 1,
                '-' => {
                    negative = true;
                    pos += 1
                }
                c => return Err(Error::parse(pos, format!("expected '+' or '-', found '{c}'"))),
            }
            skip_ws(&mut pos);
        } else if pos < chars.len() && chars[pos] == '-' {
            negative = true;
            pos += 1;
            skip_ws(&mut pos);
        }
        first = false;

        let start = pos;
        let coeff = if pos < chars.len() && chars[pos] == 'e' {
            T::one()
        } else {
            let lit_end = scan_literal(&chars, pos);
            if lit_end == pos {
                return Err(Error::parse(pos, "expected a coefficient or blade"));
            }
            let lit: String = chars[pos..lit_end].iter().collect();
            let v = T::parse_literal(&lit)
                .ok_or_else(|| Error::parse(start, format!("invalid coefficient '{lit}'")))?;
            pos = lit_end;
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                skip_ws(&mut pos);
                if pos >= chars.len() || chars[pos] != 'e' {
                    return Err(Error::parse(pos, "expected a blade after '*'"));
                }
            } else {
                out.add_term(Blade::SCALAR, if negative { -v } else { v });
                continue;
            }
            v
        };
        let (blade_pos, indices) = (pos, scan_blade(&chars, &mut pos)?);
        for &i in &indices {
            if i == 0 || i > dim {
                return Err(Error::parse(blade_pos, format!("index {i} out of range for dimension {dim}")));
            }
        }
        let (sign, blade) = Blade::from_indices(&indices)
            .ok_or_else(|| Error::parse(blade_pos, "repeated index in blade"))?;
        let mut v = if sign < 0 { -coeff } else { coeff };
        if negative {
            v = -v;
        }
        out.add_term(blade, v);
    }
    Ok(out)
}

fn scan_literal(chars: &[char], mut pos: usize) -> usize {
    let is_digitish = |c: char| c.is_ascii_digit() || c == '.';
    while pos < chars.len() {
        let c = chars[pos];
        if is_digitish(c) || c == '/' {
            pos += 1;
        } else if (c == 'e' || c == 'E')
            && pos > 0
            && is_digitish(chars[pos - 1])
            && chars.get(pos + 1).is_some_and(|&n| n.is_ascii_digit() || n == '-' || n == '+')
        {
            // float exponent, e.g. 1.5e-3
            pos += 2;
        } else {
            break;
        }
    }
    pos
}

fn scan_blade(chars: &[char], pos: &mut usize) -> Result<Vec<usize>> {
    debug_assert_eq!(chars[*pos], 'e');
    *pos += 1;
    if *pos < chars.len() && chars[*pos] == '{' {
        let open = *pos;
        let close = chars[open..]
            .iter()
            .position(|&c| c == '}')
            .map(|o| open + o)
            .ok_or_else(|| Error::parse(open, "unterminated index list"))?;
        let body: String = chars[open + 1..close].iter().collect();
        *pos = close + 1;
        return body
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::parse(open + 1, format!("bad index '{}'", s.trim()))))
            .collect();
    }
    let start = *pos;
    let mut out = Vec::new();
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        out.push(chars[*pos].to_digit(10).unwrap() as usize);
        *pos += 1;
    }
    if out.is_empty() {
        return Err(Error::parse(start, "blade needs at least one index"));
    }
    Ok(out)
}
