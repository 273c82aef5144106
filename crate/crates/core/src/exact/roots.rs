//! Rational intervals, Sturm sequences and real root isolation.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::int;
use super::upoly::{RealCoefficient, UPoly};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn plus(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn times(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(BigRational::zero);
        let hi = products
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero);
        Interval::new(lo, hi)
    }

    pub fn scale(&self, k: &BigRational) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    /// Sign of every point when the interval excludes zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn abs_max(&self) -> BigRational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn abs_min(&self) -> BigRational {
        if self.sign().is_none() {
            BigRational::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }
}

/// Horner evaluation of a rational polynomial over an interval.
pub fn eval_interval(p: &UPoly<BigRational>, x: &Interval) -> Interval {
    p.coeffs()
        .iter()
        .rev()
        .fold(Interval::point(BigRational::zero()), |acc, c| {
            acc.times(x).plus(&Interval::point(c.clone()))
        })
}

/// A real root of a square-free polynomial: either exact or inside the open
/// interval `(lo, hi)` with the polynomial nonzero at `hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact: bool,
}

impl IsolatedRoot {
    pub fn exact(x: BigRational) -> Self {
        IsolatedRoot {
            lo: x.clone(),
            hi: x,
            exact: true,
        }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / int(2)
    }
}

/// Sign of `p(x)` at a rational point.
pub fn sign_at<C: RealCoefficient>(p: &UPoly<C>, x: &BigRational) -> Ordering {
    p.eval(&C::from_rational(x)).sign()
}

fn sturm_sequence<C: RealCoefficient>(p: &UPoly<C>) -> Vec<UPoly<C>> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]).negated();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn variations<C: RealCoefficient>(seq: &[UPoly<C>], x: &BigRational) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in seq {
        let sg = sign_at(s, x);
        if sg == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && sg != last {
            count += 1;
        }
        last = sg;
    }
    count
}

/// A power of two strictly larger than the modulus of every complex root.
pub fn root_bound<C: RealCoefficient>(p: &UPoly<C>) -> BigRational {
    let lead = p.lc().abs_lower_bound();
    let d = p.degree().unwrap_or(0);
    let mut m = BigRational::zero();
    for i in 0..d {
        let q = p.coeff(i).abs_upper_bound() / &lead;
        if q > m {
            m = q;
        }
    }
    let target = m + BigRational::one();
    let mut b = BigRational::one();
    while b <= target {
        b *= int(2);
    }
    b
}

/// Isolates all real roots of a square-free polynomial, sorted increasingly.
pub fn isolate_real_roots<C: RealCoefficient>(p: &UPoly<C>) -> Vec<IsolatedRoot> {
    let mut out = Vec::new();
    match p.degree() {
        None | Some(0) => return out,
        _ => {}
    }
    let seq = sturm_sequence(p);
    let b = root_bound(p);
    let lo = -b.clone();
    let vlo = variations(&seq, &lo);
    let vhi = variations(&seq, &b);
    bisect(p, &seq, lo, b, vlo, vhi, &mut out);
    out
}

fn bisect<C: RealCoefficient>(
    p: &UPoly<C>,
    seq: &[UPoly<C>],
    lo: BigRational,
    hi: BigRational,
    vlo: usize,
    vhi: usize,
    out: &mut Vec<IsolatedRoot>,
) {
    let count = vlo.saturating_sub(vhi);
    if count == 0 {
        return;
    }
    if count == 1 {
        if sign_at(p, &hi) == Ordering::Equal {
            out.push(IsolatedRoot::exact(hi));
        } else {
            out.push(IsolatedRoot {
                lo,
                hi,
                exact: false,
            });
        }
        return;
    }
    let mid = (&lo + &hi) / int(2);
    let vmid = variations(seq, &mid);
    bisect(p, seq, lo, mid.clone(), vlo, vmid, out);
    bisect(p, seq, mid, hi, vmid, vhi, out);
}

/// Halves the isolating interval of `root` (a root of square-free `p`).
pub fn refine_once<C: RealCoefficient>(p: &UPoly<C>, root: &mut IsolatedRoot) {
    if root.exact {
        return;
    }
    let mid = root.midpoint();
    let sm = sign_at(p, &mid);
    if sm == Ordering::Equal {
        *root = IsolatedRoot::exact(mid);
        return;
    }
    if sm == sign_at(p, &root.hi) {
        root.hi = mid;
    } else {
        root.lo = mid;
    }
}

/// Refines until the interval is narrower than `width`.
pub fn refine_to<C: RealCoefficient>(p: &UPoly<C>, root: &mut IsolatedRoot, width: &BigRational) {
    while !root.exact && &(&root.hi - &root.lo) >= width {
        refine_once(p, root);
    }
}

/// Number of roots of square-free `p` in the half-open interval `(lo, hi]`.
pub fn count_roots_in<C: RealCoefficient>(
    p: &UPoly<C>,
    lo: &BigRational,
    hi: &BigRational,
) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(p);
    variations(&seq, lo).saturating_sub(variations(&seq, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn p(v: &[i64]) -> UPoly<BigRational> {
        UPoly::new(v.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn isolates_sqrt_two_pair() {
        let roots = isolate_real_roots(&p(&[-2, 0, 1]));
        assert_eq!(roots.len(), 2);
        let mut r = roots[1].clone();
        refine_to(&p(&[-2, 0, 1]), &mut r, &rat(1, 1000));
        assert!(r.lo < rat(1415, 1000) && r.hi > rat(1414, 1000));
    }

    #[test]
    fn finds_exact_rational_roots() {
        let roots = isolate_real_roots(&p(&[0, -1, 0, 1]));
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().any(|r| r.exact && r.lo == int(0)));
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[1, 0, 1])).is_empty());
    }
}
