//! Dense univariate polynomials over an exact coefficient field.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact field arithmetic required by the polynomial routines.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse; callers never pass zero.
    fn inverse(&self) -> Self;
    fn as_rational(&self) -> Option<BigRational>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Coefficients living inside the real numbers, with decidable signs.
pub trait RealCoefficient: Coefficient {
    fn sign(&self) -> Ordering;
    /// A rational bound `B >= |self|`.
    fn abs_upper_bound(&self) -> BigRational;
    /// A positive rational bound `0 < b <= |self|` for nonzero values.
    fn abs_lower_bound(&self) -> BigRational;
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

impl RealCoefficient for BigRational {
    fn sign(&self) -> Ordering {
        self.cmp(&<BigRational as Zero>::zero())
    }
    fn abs_upper_bound(&self) -> BigRational {
        self.abs()
    }
    fn abs_lower_bound(&self) -> BigRational {
        self.abs()
    }
}

/// Polynomial with coefficients stored from the constant term upwards.
#[derive(Clone, PartialEq)]
pub struct UPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> UPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        UPoly::new(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k];
        coeffs.push(c);
        UPoly::new(coeffs)
    }

    /// The identity polynomial `t`.
    pub fn variable() -> Self {
        UPoly::monomial(C::one(), 1)
    }

    pub fn from_rationals(values: &[BigRational]) -> Self {
        UPoly::new(values.iter().map(C::from_rational).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new(
            (0..n)
                .map(|i| self.coeff(i).plus(&other.coeff(i)))
                .collect(),
        )
    }

    pub fn minus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new(
            (0..n)
                .map(|i| self.coeff(i).minus(&other.coeff(i)))
                .collect(),
        )
    }

    pub fn negated(&self) -> Self {
        UPoly::new(self.coeffs.iter().map(C::negated).collect())
    }

    pub fn scale(&self, k: &C) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.times(k)).collect())
    }

    pub fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(UPoly::one(), |acc, _| acc.times(self))
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = divisor.lc().inverse();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![C::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].times(&inv);
            if !c.is_zero() {
                let shift = top - dd;
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].minus(&c.times(d));
                }
                quo[shift] = c;
            }
            rem.pop();
        }
        (UPoly::new(quo), UPoly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&self.lc().inverse())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `s * self = g (mod other)` and `g = gcd` monic.
    pub fn gcd_cofactor(&self, other: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.minus(&q.times(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let inv = r0.lc().inverse();
        (r0.scale(&inv), s0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.times(&C::from_rational(&BigRational::from_integer(i.into()))))
                .collect(),
        )
    }

    pub fn eval(&self, at: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.times(at).plus(c))
    }

    /// Substitutes a polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(UPoly::zero(), |acc, c| {
            acc.times(inner).plus(&UPoly::constant(c.clone()))
        })
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> UPoly<D> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Yun's square-free decomposition: monic `(factor, multiplicity)` pairs.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.exact_div(&a0);
        let mut c = d.exact_div(&a0);
        let mut i = 1;
        loop {
            let bd = b.derivative();
            let cd = c.minus(&bd);
            if cd.is_zero() {
                if b.degree().unwrap_or(0) > 0 {
                    out.push((b.monic(), i));
                }
                break;
            }
            let a = b.gcd(&cd);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            c = cd.exact_div(&a);
            i += 1;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        out
    }

    /// Square-free part, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return UPoly::one();
        }
        self.exact_div(&self.gcd(&self.derivative())).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

impl UPoly<BigRational> {
    /// Primitive integer polynomial with positive leading coefficient.
    pub fn to_primitive_integer(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.lc().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter()
            .map(|c| sign.clone() * c / g.clone())
            .collect()
    }

    pub fn from_integers(values: &[BigInt]) -> Self {
        UPoly::new(
            values
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        )
    }
}

impl<C: Coefficient> fmt::Debug for UPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.coeffs)
    }
}
