//! Rationals and rationals extended by a single positive infinity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// Builds `p/q` as an exact rational.
pub fn rat(p: i64, q: i64) -> ExactRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Builds the integer `n` as an exact rational.
pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Prints `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(q: &ExactRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Option<ExactRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Nearest double, for diagnostics only.
pub fn to_f64(q: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Largest integer not above `q`.
pub fn floor(q: &ExactRational) -> BigInt {
    q.floor().to_integer()
}

/// Least common multiple of denominators of the given rationals.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a ExactRational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// A rational or `+inf`; infinity dominates every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(ExactRational),
    Infinity,
}

impl ExtendedRational {
    pub fn finite(q: ExactRational) -> Self {
        ExtendedRational::Finite(q)
    }

    pub fn from_int(n: i64) -> Self {
        ExtendedRational::Finite(int(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedRational::Infinity)
    }

    pub fn as_finite(&self) -> Option<&ExactRational> {
        match self {
            ExtendedRational::Finite(q) => Some(q),
            ExtendedRational::Infinity => None,
        }
    }

    pub fn into_finite(self) -> Option<ExactRational> {
        match self {
            ExtendedRational::Finite(q) => Some(q),
            ExtendedRational::Infinity => None,
        }
    }

    /// Parses a rational or the literal `inf`.
    pub fn parse(text: &str) -> Option<Self> {
        if text.trim() == "inf" {
            Some(ExtendedRational::Infinity)
        } else {
            parse_rational(text).map(ExtendedRational::Finite)
        }
    }

    /// Multiplies by a nonnegative rational; `inf * 0` is taken as `0`.
    pub fn scale(&self, k: &ExactRational) -> Self {
        debug_assert!(!k.is_negative());
        match self {
            ExtendedRational::Finite(q) => ExtendedRational::Finite(q * k),
            ExtendedRational::Infinity if k.is_zero() => ExtendedRational::Finite(int(0)),
            ExtendedRational::Infinity => ExtendedRational::Infinity,
        }
    }
}

impl From<ExactRational> for ExtendedRational {
    fn from(q: ExactRational) -> Self {
        ExtendedRational::Finite(q)
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl Add for &ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, rhs: &ExtendedRational) -> ExtendedRational {
        match (self, rhs) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => {
                ExtendedRational::Finite(a + b)
            }
            _ => ExtendedRational::Infinity,
        }
    }
}

impl Add for ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, rhs: ExtendedRational) -> ExtendedRational {
        &self + &rhs
    }
}

impl Add<&ExactRational> for &ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, rhs: &ExactRational) -> ExtendedRational {
        match self {
            ExtendedRational::Finite(a) => ExtendedRational::Finite(a + rhs),
            ExtendedRational::Infinity => ExtendedRational::Infinity,
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(q) => f.write_str(&fmt_rational(q)),
            ExtendedRational::Infinity => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_dominates() {
        let big = ExtendedRational::from_int(1_000_000);
        assert!(ExtendedRational::Infinity > big);
        assert_eq!(std::cmp::min(ExtendedRational::Infinity, big.clone()), big);
    }

    #[test]
    fn printing_is_lowest_terms() {
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&rat(-8, 4)), "-2");
        assert_eq!(ExtendedRational::Infinity.to_string(), "inf");
        assert_eq!(parse_rational("10/-4"), Some(rat(-5, 2)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
