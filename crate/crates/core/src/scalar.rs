//! Coefficient types.
//!
//! Exact mode uses arbitrary-precision rationals and is the canonical mode for
//! everything that feeds an obstruction verdict. `f64` is only used where a
//! square root or fractional power is unavoidable.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is closed and rounding-free.
    const EXACT: bool;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 is representable")
    }

    fn to_float(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses a coefficient literal (`3`, `-1/2`, and for floats also `0.25`).
    fn parse_literal(text: &str) -> Option<Self>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn parse_literal(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().ok()?;
                let den: BigInt = den.trim().parse().ok()?;
                if den == BigInt::from(0) {
                    return None;
                }
                Some(Rational::new(num, den))
            }
            None => Some(Rational::from_integer(text.parse().ok()?)),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn parse_literal(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((num, den)) => Some(num.trim().parse::<f64>().ok()? / den.trim().parse::<f64>().ok()?),
            None => text.parse().ok(),
        }
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact conversion of a finite float to a rational.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Unsupported(format!("non-finite value {v}")))
}
