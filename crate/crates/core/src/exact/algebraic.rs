//! Real algebraic numbers given by a minimal polynomial and an isolating interval.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::{fmt_rational, int};
use super::roots::{
    count_roots_in, eval_interval, isolate_real_roots, refine_once, sign_at, Interval, IsolatedRoot,
};
use super::upoly::UPoly;

/// Irreducible monic factors over the rationals, each with its multiplicity.
pub fn factor_rational(p: &UPoly<BigRational>) -> Vec<(UPoly<BigRational>, usize)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let ints = p.to_primitive_integer();
    let poly: algebraics::polynomial::Polynomial<BigInt> = ints.into();
    let factors = poly.factor();
    let mut out: Vec<(UPoly<BigRational>, usize)> = factors
        .polynomial_factors
        .into_iter()
        .map(|f| {
            let coeffs: Vec<BigInt> = f.polynomial.into_coefficients();
            (UPoly::from_integers(&coeffs).monic(), f.power)
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| format!("{:?}", a.0).cmp(&format!("{:?}", b.0)))
    });
    out
}

/// Determinant by fraction-based Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Resultant of two polynomials whose formal degrees are given.
pub fn resultant_formal(
    a: &UPoly<BigRational>,
    da: usize,
    b: &UPoly<BigRational>,
    db: usize,
) -> BigRational {
    let n = da + db;
    if n == 0 {
        return BigRational::one();
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..db {
        let mut row = vec![BigRational::zero(); n];
        for j in 0..=da {
            row[i + j] = a.coeff(da - j);
        }
        rows.push(row);
    }
    for i in 0..da {
        let mut row = vec![BigRational::zero(); n];
        for j in 0..=db {
            row[i + j] = b.coeff(db - j);
        }
        rows.push(row);
    }
    determinant(rows)
}

/// Newton interpolation through the points `(i, values[i])`.
pub fn interpolate(values: &[BigRational]) -> UPoly<BigRational> {
    let n = values.len();
    let mut dd: Vec<BigRational> = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / int(level as i64);
        }
    }
    let mut poly = UPoly::zero();
    for i in (0..n).rev() {
        let shift = UPoly::new(vec![int(-(i as i64)), int(1)]);
        poly = poly.times(&shift).plus(&UPoly::constant(dd[i].clone()));
    }
    poly
}

/// A real algebraic number: primitive irreducible integer polynomial and a root
/// isolated in an open rational interval (or given exactly when rational).
pub struct AlgebraicNumber {
    minimal_polynomial: Vec<BigInt>,
    monic: UPoly<BigRational>,
    root: Mutex<IsolatedRoot>,
}

impl AlgebraicNumber {
    /// Wraps an irreducible polynomial and an isolated root of it.
    pub fn new(irreducible: &UPoly<BigRational>, root: IsolatedRoot) -> Self {
        let monic = irreducible.monic();
        let root = if monic.degree() == Some(1) {
            IsolatedRoot::exact(-monic.coeff(0))
        } else {
            root
        };
        AlgebraicNumber {
            minimal_polynomial: monic.to_primitive_integer(),
            monic,
            root: Mutex::new(root),
        }
    }

    pub fn rational(q: BigRational) -> Self {
        let p = UPoly::new(vec![-q.clone(), BigRational::one()]);
        AlgebraicNumber::new(&p, IsolatedRoot::exact(q))
    }

    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.minimal_polynomial
    }

    pub fn monic_polynomial(&self) -> &UPoly<BigRational> {
        &self.monic
    }

    pub fn degree(&self) -> usize {
        self.monic.degree().unwrap_or(0)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        let r = self.isolating();
        r.exact.then_some(r.lo)
    }

    /// Current isolating interval.
    pub fn isolating(&self) -> IsolatedRoot {
        self.root.lock().expect("poisoned interval").clone()
    }

    pub fn interval(&self) -> Interval {
        self.isolating().interval()
    }

    /// Shrinks the interval below `width`; earlier sign decisions stay valid
    /// because the new interval is always inside the old one.
    pub fn refine_to(&self, width: &BigRational) {
        let mut guard = self.root.lock().expect("poisoned interval");
        while !guard.exact && &(&guard.hi - &guard.lo) >= width {
            refine_once(&self.monic, &mut guard);
        }
    }

    pub fn refine_once(&self) {
        let mut guard = self.root.lock().expect("poisoned interval");
        refine_once(&self.monic, &mut guard);
    }

    /// Sign of `q(self)` for a rational polynomial `q`.
    pub fn sign_of(&self, q: &UPoly<BigRational>) -> Ordering {
        if q.is_zero() {
            return Ordering::Equal;
        }
        if let Some(x) = self.as_rational() {
            return sign_at(q, &x);
        }
        if q.rem(&self.monic).is_zero() {
            return Ordering::Equal;
        }
        loop {
            let val = eval_interval(q, &self.interval());
            if let Some(s) = val.sign() {
                if s != Ordering::Equal {
                    return s;
                }
            }
            self.refine_once();
        }
    }

    /// Interval enclosure of `q(self)` of width below `width`.
    pub fn enclose(&self, q: &UPoly<BigRational>, width: &BigRational) -> Interval {
        loop {
            let val = eval_interval(q, &self.interval());
            if &val.width() < width || self.as_rational().is_some() {
                return val;
            }
            self.refine_once();
        }
    }

    pub fn to_f64(&self) -> f64 {
        let iv = self.enclose(
            &UPoly::variable(),
            &BigRational::new(1.into(), BigInt::from(1u64 << 50)),
        );
        let mid = (iv.lo + iv.hi) / int(2);
        crate::exact::rational::to_f64(&mid)
    }

    /// Real roots of a rational polynomial as algebraic numbers, sorted.
    pub fn real_roots_of(p: &UPoly<BigRational>) -> Vec<AlgebraicNumber> {
        let mut out: Vec<AlgebraicNumber> = Vec::new();
        for (factor, _) in factor_rational(p) {
            for root in isolate_real_roots(&factor) {
                out.push(AlgebraicNumber::new(&factor, root));
            }
        }
        out.sort_by(|a, b| a.cmp_value(b));
        out
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn cmp_value(&self, other: &AlgebraicNumber) -> Ordering {
        if self.same_value(other) {
            return Ordering::Equal;
        }
        loop {
            let (a, b) = (self.interval(), other.interval());
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            self.refine_once();
            other.refine_once();
        }
    }

    fn same_value(&self, other: &AlgebraicNumber) -> bool {
        if self.monic != other.monic {
            return false;
        }
        let (a, b) = (self.isolating(), other.isolating());
        if a.exact || b.exact {
            return a.lo == b.lo;
        }
        let lo = a.lo.clone().max(b.lo.clone());
        let hi = a.hi.clone().min(b.hi.clone());
        lo < hi
            && count_roots_in(&self.monic, &lo, &hi) == 1
            && sign_at(&self.monic, &hi) != Ordering::Equal
    }
}

impl Clone for AlgebraicNumber {
    fn clone(&self) -> Self {
        AlgebraicNumber {
            minimal_polynomial: self.minimal_polynomial.clone(),
            monic: self.monic.clone(),
            root: Mutex::new(self.isolating()),
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.same_value(other)
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return f.write_str(&fmt_rational(&q));
        }
        let r = self.isolating();
        write!(
            f,
            "root({}, {}, {})",
            fmt_int_poly(&self.minimal_polynomial),
            fmt_rational(&r.lo),
            fmt_rational(&r.hi)
        )
    }
}

/// Prints an integer polynomial in the variable `c`.
pub fn fmt_int_poly(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigInt::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let body = match i {
            0 => mag.to_string(),
            _ => {
                let mono = if i == 1 {
                    "c".to_string()
                } else {
                    format!("c^{i}")
                };
                if mag.is_one() {
                    mono
                } else {
                    format!("{mag}*{mono}")
                }
            }
        };
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> UPoly<BigRational> {
        UPoly::new(v.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn factors_over_rationals() {
        let f = p(&[-2, 0, 1]).times(&p(&[1, 1])).times(&p(&[1, 1]));
        let fac = factor_rational(&f);
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0], (p(&[1, 1]), 2));
        assert_eq!(fac[1], (p(&[-2, 0, 1]), 1));
    }

    #[test]
    fn resultant_of_linear_forms() {
        let r = resultant_formal(&p(&[-2, 1]), 1, &p(&[-5, 1]), 1);
        assert_eq!(r, int(-3));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, -1, 0, 2]);
        let vals: Vec<BigRational> = (0..4).map(|i| f.eval(&int(i))).collect();
        assert_eq!(interpolate(&vals), f);
    }

    #[test]
    fn compares_roots() {
        let roots = AlgebraicNumber::real_roots_of(&p(&[-2, 0, 1]).times(&p(&[-3, 0, 1])));
        assert_eq!(roots.len(), 4);
        assert!(roots[0].to_f64() < -1.7 && roots[3].to_f64() > 1.7);
        assert_eq!(roots[2].clone(), roots[2]);
        assert_ne!(roots[2], roots[3]);
    }
}
