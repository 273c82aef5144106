//! Truncated Puiseux series with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};

use super::field::Scalar;
use super::poly2::Polynomial2;
use super::rational::{fmt_rational, int, ExactRational, ExtendedRational};
use super::upoly::Coefficient;
use crate::error::{Error, Result};

/// Binary series operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
}

/// `sum c_e t^e` over exponents `e < truncation`; terms at or beyond the
/// truncation are unknown.
#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries {
    terms: BTreeMap<ExactRational, Scalar>,
    truncation: ExtendedRational,
}

impl PuiseuxSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        PuiseuxSeries {
            terms: BTreeMap::new(),
            truncation: ExtendedRational::Infinity,
        }
    }

    pub fn one() -> Self {
        Self::monomial(Scalar::one(), int(0))
    }

    /// Exact single term `c t^e`.
    pub fn monomial(c: Scalar, e: ExactRational) -> Self {
        let mut s = Self::zero();
        s.add_term(e, c);
        s
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, int(0))
    }

    /// Exact finite sum of terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (ExactRational, Scalar)>) -> Self {
        let mut s = Self::zero();
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Keeps only terms below `truncation`.
    pub fn with_truncation(mut self, truncation: ExtendedRational) -> Self {
        if let ExtendedRational::Finite(t) = &truncation {
            self.terms.retain(|e, _| e < t);
        }
        if truncation < self.truncation {
            self.truncation = truncation;
        }
        self
    }

    fn add_term(&mut self, e: ExactRational, c: Scalar) {
        if c.is_zero() {
            return;
        }
        if let ExtendedRational::Finite(t) = &self.truncation {
            if &e >= t {
                return;
            }
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Scalar::zero);
        *slot = slot.plus(&c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExactRational, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExactRational) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn truncation(&self) -> &ExtendedRational {
        &self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_infinite()
    }

    /// True when no terms are known (zero if exact, undetermined otherwise).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least common denominator of the stored exponents.
    pub fn ramification(&self) -> BigInt {
        super::rational::common_denominator(self.terms.keys())
    }

    pub fn leading(&self) -> Option<(&ExactRational, &Scalar)> {
        self.terms.iter().next()
    }

    /// Least stored exponent, `inf` for the exact zero series.
    pub fn order(&self) -> Result<ExtendedRational> {
        match self.terms.keys().next() {
            Some(e) => Ok(ExtendedRational::Finite(e.clone())),
            None if self.is_exact() => Ok(ExtendedRational::Infinity),
            None => Err(Error::IndeterminateOrder {
                truncation: self.truncation.clone(),
            }),
        }
    }

    /// Lower bound for the order, valid even when the order is undetermined.
    pub fn order_bound(&self) -> ExtendedRational {
        match self.terms.keys().next() {
            Some(e) => ExtendedRational::Finite(e.clone()),
            None => self.truncation.clone(),
        }
    }

    pub fn negated(&self) -> Self {
        PuiseuxSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.negated()))
                .collect(),
            truncation: self.truncation.clone(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return PuiseuxSeries {
                terms: BTreeMap::new(),
                truncation: self.truncation.clone(),
            };
        }
        PuiseuxSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.times(k)))
                .collect(),
            truncation: self.truncation.clone(),
        }
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: &ExactRational) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            truncation: &self.truncation + e,
        }
    }

    /// Substitutes `t -> t^k` for a positive rational `k`.
    pub fn stretch(&self, k: &ExactRational) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(x, c)| (x * k, c.clone())).collect(),
            truncation: self.truncation.scale(k),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = PuiseuxSeries {
            terms: BTreeMap::new(),
            truncation: self.truncation.clone(),
        };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let truncation = std::cmp::min(self.truncation.clone(), other.truncation.clone());
        let mut out = PuiseuxSeries {
            terms: BTreeMap::new(),
            truncation,
        };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn times(&self, other: &Self) -> Self {
        let ta = &self.order_bound() + &other.truncation;
        let tb = &other.order_bound() + &self.truncation;
        let truncation = std::cmp::min(ta, tb);
        let mut out = PuiseuxSeries {
            terms: BTreeMap::new(),
            truncation,
        };
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                out.add_term(e + f, c.times(d));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = PuiseuxSeries::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.times(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.times(&base);
            }
        }
        result
    }

    /// Sign of the leading coefficient, if known.
    pub fn leading_sign(&self) -> Option<std::cmp::Ordering> {
        use super::upoly::RealCoefficient;
        self.leading().map(|(_, c)| c.sign())
    }

    /// Inverse of a series with known leading term, truncated at relative precision `precision`.
    pub fn inverse(&self, precision: &ExactRational) -> Result<Self> {
        let (e0, c0) = self.leading().map(|(e, c)| (e.clone(), c.clone())).ok_or(
            Error::TruncationTooShort {
                reached: self.truncation.to_string(),
            },
        )?;
        // self = c0 t^e0 (1 + w), w of positive order.
        let unit = self.shift(&-e0.clone()).scale(&c0.inverse());
        let w = unit.minus(&PuiseuxSeries::one());
        if w.is_exact() && w.is_empty() {
            return Ok(PuiseuxSeries::monomial(c0.inverse(), -e0));
        }
        let target = match &unit.truncation {
            ExtendedRational::Finite(t) => std::cmp::min(t.clone(), precision.clone()),
            ExtendedRational::Infinity => precision.clone(),
        };
        let w = w.with_truncation(ExtendedRational::Finite(target.clone()));
        let mut sum =
            PuiseuxSeries::one().with_truncation(ExtendedRational::Finite(target.clone()));
        let mut power = sum.clone();
        if let Some(step) = w.leading().map(|(e, _)| e.clone()) {
            let mut reached = int(0);
            while reached < target {
                power = power.times(&w.negated());
                sum = sum.plus(&power);
                reached += &step;
            }
        }
        Ok(sum.scale(&c0.inverse()).shift(&-e0))
    }

    /// `(1 + w)^q` for a rational `q` and `w` of positive order, to relative precision.
    pub fn binomial_power(w: &Self, q: &ExactRational, precision: &ExactRational) -> Self {
        let target = match w.truncation() {
            ExtendedRational::Finite(t) => std::cmp::min(t.clone(), precision.clone()),
            ExtendedRational::Infinity => precision.clone(),
        };
        let trunc = ExtendedRational::Finite(target.clone());
        let w = w.clone().with_truncation(trunc.clone());
        let mut sum = PuiseuxSeries::one().with_truncation(trunc.clone());
        let Some(step) = w.leading().map(|(e, _)| e.clone()) else {
            return sum;
        };
        let mut power = sum.clone();
        let mut binom = int(1);
        let mut k = 0i64;
        let mut reached = int(0);
        while reached < target {
            binom = binom * (q - int(k)) / int(k + 1);
            k += 1;
            power = power.times(&w);
            sum = sum.plus(&power.scale(&Scalar::Rat(binom.clone())));
            reached += &step;
        }
        sum
    }
}

/// Free-function form of [`PuiseuxSeries::order`].
pub fn series_order(s: &PuiseuxSeries) -> Result<ExtendedRational> {
    s.order()
}

/// Sum or product with the tightest sound truncation.
pub fn series_combine(a: &PuiseuxSeries, b: &PuiseuxSeries, op: SeriesOp) -> PuiseuxSeries {
    match op {
        SeriesOp::Add => a.plus(b),
        SeriesOp::Mul => a.times(b),
    }
}

/// Composite `f(x(t), y(t))` with certified leading term.
///
/// Exact inputs give an exact result. Truncated inputs fail with
/// `TruncationTooShort` when every known term cancels.
pub fn substitute(f: &Polynomial2, x: &PuiseuxSeries, y: &PuiseuxSeries) -> Result<PuiseuxSeries> {
    let dx = f.degree_x().unwrap_or(0);
    let dy = f.degree_y().unwrap_or(0);
    let xp = powers(x, dx);
    let yp = powers(y, dy);
    let mut out = PuiseuxSeries::zero();
    for (&(i, j), c) in f.terms() {
        let term = xp[i as usize]
            .times(&yp[j as usize])
            .scale(&Scalar::Rat(c.clone()));
        out = out.plus(&term);
    }
    if out.is_empty() && !out.is_exact() {
        return Err(Error::TruncationTooShort {
            reached: out.truncation.to_string(),
        });
    }
    Ok(out)
}

fn powers(s: &PuiseuxSeries, n: u32) -> Vec<PuiseuxSeries> {
    let mut out = vec![PuiseuxSeries::one()];
    for k in 1..=n as usize {
        let next = out[k - 1].times(s);
        out.push(next);
    }
    out
}

fn fmt_exponent(e: &ExactRational) -> String {
    if e.denom().is_one() {
        e.numer().to_string()
    } else {
        format!("({})", fmt_rational(e))
    }
}

/// Renders `c*t^e` terms in the given variable.
pub fn format_series(s: &PuiseuxSeries, var: &str) -> String {
    let mut out = String::new();
    for (n, (e, c)) in s.terms().enumerate() {
        let (neg, mag) = match c {
            Scalar::Rat(q) => (q.is_negative(), Scalar::Rat(q.abs())),
            Scalar::Alg(..) => (false, c.clone()),
        };
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = if Zero::is_zero(e) {
            None
        } else if One::is_one(e) {
            Some(var.to_string())
        } else {
            Some(format!("{var}^{}", fmt_exponent(e)))
        };
        let coeff = match &mag {
            Scalar::Rat(q) if One::is_one(q) && mono.is_some() => None,
            Scalar::Rat(q) => Some(fmt_rational(q)),
            Scalar::Alg(..) => Some(format!("[{mag}]")),
        };
        let body: Vec<String> = coeff.into_iter().chain(mono).collect();
        out.push_str(&body.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    if let ExtendedRational::Finite(t) = &s.truncation {
        out.push_str(&format!(" + O({var}^{})", fmt_exponent(t)));
    }
    out
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_series(self, "t"))
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_series(self, "t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn s(terms: &[(i64, i64, i64)]) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            terms
                .iter()
                .map(|&(c, p, q)| (rat(p, q), Scalar::from_int(c))),
        )
    }

    fn cusp() -> Polynomial2 {
        Polynomial2::from_terms([((0, 2), int(1)), ((3, 0), int(-1))])
    }

    #[test]
    fn orders() {
        assert_eq!(
            s(&[(1, 3, 2), (-2, 2, 1)]).order().unwrap(),
            ExtendedRational::Finite(rat(3, 2))
        );
        assert_eq!(
            PuiseuxSeries::zero().order().unwrap(),
            ExtendedRational::Infinity
        );
        assert_eq!(
            s(&[(5, 1, 1)]).order().unwrap(),
            ExtendedRational::from_int(1)
        );
    }

    #[test]
    fn combine() {
        let t = s(&[(1, 1, 1)]);
        assert_eq!(series_combine(&t, &t, SeriesOp::Add), s(&[(2, 1, 1)]));
        let h = s(&[(1, 1, 2)]);
        assert_eq!(series_combine(&h, &h, SeriesOp::Mul), t);
        let a = s(&[(1, 3, 2)]).with_truncation(ExtendedRational::from_int(3));
        let b = s(&[(-1, 3, 2)]).with_truncation(ExtendedRational::from_int(3));
        let sum = series_combine(&a, &b, SeriesOp::Add);
        assert!(sum.is_empty());
        assert_eq!(sum.truncation(), &ExtendedRational::from_int(3));
        assert!(matches!(sum.order(), Err(Error::IndeterminateOrder { .. })));
    }

    #[test]
    fn substitution() {
        let t = s(&[(1, 1, 1)]);
        let r = substitute(&cusp(), &t, &PuiseuxSeries::zero()).unwrap();
        assert_eq!(r, s(&[(-1, 3, 1)]));
        let r = substitute(&cusp(), &t, &s(&[(1, 3, 2)])).unwrap();
        assert_eq!(r.order().unwrap(), ExtendedRational::Infinity);
        let xy = Polynomial2::from_terms([((1, 1), int(1))]);
        assert_eq!(
            substitute(&xy, &t, &s(&[(1, 2, 1)])).unwrap(),
            s(&[(1, 3, 1)])
        );
    }

    #[test]
    fn inverse_and_binomial() {
        let u = s(&[(1, 0, 1), (1, 1, 1)]);
        let inv = u.inverse(&int(5)).unwrap();
        let prod = u.times(&inv).with_truncation(ExtendedRational::from_int(5));
        assert_eq!(
            prod,
            PuiseuxSeries::one().with_truncation(ExtendedRational::from_int(5))
        );
        let w = s(&[(1, 1, 1)]);
        let root = PuiseuxSeries::binomial_power(&w, &rat(1, 2), &int(6));
        let sq = root
            .times(&root)
            .with_truncation(ExtendedRational::from_int(6));
        assert_eq!(
            sq,
            s(&[(1, 0, 1), (1, 1, 1)]).with_truncation(ExtendedRational::from_int(6))
        );
    }
}
