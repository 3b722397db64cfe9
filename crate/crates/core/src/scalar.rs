//! Exact ordered-field scalars.
//!
//! Every algorithm in this crate is written against [`Scalar`]. The trait is
//! implemented for `num_rational::Ratio<T>` over any signed integer type that
//! converts from `i64`, so `BigRational` (the default used throughout the
//! crate root aliases), `Ratio<i128>` and `Ratio<i64>` all work. Floating point
//! types are deliberately not admitted: every decision made downstream is an
//! emptiness or equality test.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarParseError {
    #[error("`{0}` is not an exact rational (expected \"p/q\" or \"p\")")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
}

pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Num + Signed + Send + Sync + 'static
{
    /// `n / d`. Panics when `d == 0`.
    fn from_frac(n: i64, d: i64) -> Self;

    /// Canonical `"p/q"` text, always with an explicit denominator.
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Result<Self, ScalarParseError>;

    fn from_int(n: i64) -> Self {
        Self::from_frac(n, 1)
    }

    fn half() -> Self {
        Self::from_frac(1, 2)
    }

    /// Arithmetic mean of `a` and `b`.
    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()) * Self::half()
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Hash + Signed + Display + Debug + FromStr + From<i64> + Send + Sync + 'static,
{
    fn from_frac(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Ratio::new(T::from(n), T::from(d))
    }

    fn to_text(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_text(s: &str) -> Result<Self, ScalarParseError> {
        let s = s.trim();
        let malformed = || ScalarParseError::Malformed(s.to_string());
        let int = |part: &str| -> Result<T, ScalarParseError> {
            let part = part.trim();
            let digits = part.strip_prefix('-').unwrap_or(part);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            part.parse::<T>().map_err(|_| malformed())
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let (p, q) = (int(p)?, int(q)?);
                if q.is_zero() {
                    return Err(ScalarParseError::ZeroDenominator(s.to_string()));
                }
                Ok(Ratio::new(p, q))
            }
            None => Ok(Ratio::from_integer(int(s)?)),
        }
    }
}

/// Shorthand for [`Scalar::from_frac`].
pub fn q<S: Scalar>(n: i64, d: i64) -> S {
    S::from_frac(n, d)
}

pub(crate) fn in_unit<S: Scalar>(x: &S) -> bool {
    !x.is_negative() && *x <= S::one()
}
