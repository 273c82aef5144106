//! Polynomials in `z` whose coefficients are exact finite Puiseux series in `s`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exact::{
    Embedding, ExactRational, ExtendedRational, Polynomial2, PuiseuxSeries, Scalar, UPoly,
};

use super::Side;

/// `sum_k a_k(s) z^k` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPoly {
    coeffs: Vec<PuiseuxSeries>,
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<PuiseuxSeries>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_empty()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    /// The germ seen from one side: `z` is the graph coordinate, `s > 0` the parameter.
    pub fn from_side(f: &Polynomial2, side: Side) -> Self {
        let (g, swap) = match side {
            Side::XPlus => (f.clone(), false),
            Side::XMinus => (f.reflect(true, false), false),
            Side::YPlus => (f.clone(), true),
            Side::YMinus => (f.reflect(false, true), true),
        };
        let g = if swap { g.swap_xy() } else { g };
        let n = g.degree_y().map(|d| d as usize + 1).unwrap_or(0);
        let mut coeffs = vec![PuiseuxSeries::zero(); n];
        for (&(i, j), c) in g.terms() {
            let term = PuiseuxSeries::monomial(
                Scalar::Rat(c.clone()),
                BigRational::from_integer(i.into()),
            );
            coeffs[j as usize] = coeffs[j as usize].plus(&term);
        }
        ZPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[PuiseuxSeries] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> PuiseuxSeries {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(PuiseuxSeries::zero)
    }

    /// Order of `a_k`, `None` when `a_k = 0`.
    pub fn order(&self, k: usize) -> Option<ExactRational> {
        self.coeffs
            .get(k)
            .and_then(|c| c.leading().map(|(e, _)| e.clone()))
    }

    /// Substitutes `z -> shift + z`.
    pub fn shift(&self, shift: &PuiseuxSeries) -> Self {
        if shift.is_empty() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut powers = vec![PuiseuxSeries::one()];
        for j in 1..n {
            let next = powers[j - 1].times(shift);
            powers.push(next);
        }
        let out = (0..n)
            .map(|k| {
                (k..n).fold(PuiseuxSeries::zero(), |acc, j| {
                    let b = Scalar::Rat(BigRational::from_integer(binomial(j, k)));
                    acc.plus(&self.coeffs[j].times(&powers[j - k]).scale(&b))
                })
            })
            .collect();
        ZPoly::new(out)
    }

    /// Evaluates at `z = value`.
    pub fn eval(&self, value: &PuiseuxSeries) -> PuiseuxSeries {
        self.coeffs
            .iter()
            .rev()
            .fold(PuiseuxSeries::zero(), |acc, c| acc.times(value).plus(c))
    }

    pub fn lift(&self, embedding: &Embedding) -> Self {
        if embedding.is_identity() {
            return self.clone();
        }
        ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| c.map_coefficients(|x| embedding.lift(x)))
                .collect(),
        )
    }

    /// `min_k (ord a_k + k beta)`.
    pub fn tropical(&self, beta: &ExtendedRational) -> ExtendedRational {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.leading().map(|(e, _)| (k, e.clone())))
            .map(|(k, e)| {
                if k == 0 {
                    ExtendedRational::Finite(e)
                } else {
                    &beta.scale(&BigRational::from_integer(k.into())) + &e
                }
            })
            .min()
            .unwrap_or(ExtendedRational::Infinity)
    }

    /// Smallest and largest `k` attaining the minimum of `ord a_k + k beta`.
    pub fn minimizers(&self, beta: &ExactRational) -> Option<(usize, usize)> {
        let values: Vec<(usize, ExactRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(k, c)| {
                c.leading()
                    .map(|(e, _)| (k, e + beta * BigRational::from_integer(k.into())))
            })
            .collect();
        let min = values.iter().map(|(_, v)| v.clone()).min()?;
        let ks: Vec<usize> = values
            .iter()
            .filter(|(_, v)| *v == min)
            .map(|(k, _)| *k)
            .collect();
        Some((ks[0], ks[ks.len() - 1]))
    }

    /// The last lower-hull edge ending at `k_end` among points `k <= k_end`:
    /// returns its left end and slope, or `None` when no point lies left of `k_end`.
    pub fn last_edge(&self, k_end: usize) -> Option<(usize, ExactRational)> {
        let o_end = self.order(k_end)?;
        (0..k_end)
            .filter_map(|k| {
                self.order(k).map(|o| {
                    (
                        k,
                        (o - &o_end) / BigRational::from_integer((k_end - k).into()),
                    )
                })
            })
            .fold(
                None,
                |best: Option<(usize, ExactRational)>, (k, slope)| match best {
                    None => Some((k, slope)),
                    Some((bk, bs)) => {
                        if slope < bs || (slope == bs && k < bk) {
                            Some((k, slope))
                        } else {
                            Some((bk, bs))
                        }
                    }
                },
            )
    }

    /// `sum_k [s^{N - k gamma}] a_k c^k` over the support line of slope `gamma`.
    pub fn edge_polynomial(&self, gamma: &ExactRational) -> UPoly<Scalar> {
        let height = self.tropical(&ExtendedRational::Finite(gamma.clone()));
        let ExtendedRational::Finite(height) = height else {
            return UPoly::zero();
        };
        let coeffs: Vec<Scalar> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.coefficient(&(&height - gamma * BigRational::from_integer(k.into()))))
            .collect();
        UPoly::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Coefficient};

    fn cusp() -> Polynomial2 {
        Polynomial2::from_terms([((0, 2), int(1)), ((3, 0), int(-1))])
    }

    #[test]
    fn sides_of_the_cusp() {
        let xp = ZPoly::from_side(&cusp(), Side::XPlus);
        assert_eq!(xp.order(0), Some(int(3)));
        assert_eq!(xp.order(2), Some(int(0)));
        assert_eq!(xp.last_edge(2), Some((0, rat(3, 2))));
        let phi = xp.edge_polynomial(&rat(3, 2));
        assert_eq!(
            phi,
            UPoly::new(vec![Scalar::from_int(-1), Scalar::zero(), Scalar::one()])
        );
        let ym = ZPoly::from_side(&cusp(), Side::YMinus);
        assert_eq!(ym.order(0), Some(int(2)));
        assert_eq!(
            ym.coeff(3).leading().map(|(_, c)| c.clone()),
            Some(Scalar::from_int(-1))
        );
    }

    #[test]
    fn shift_is_taylor() {
        let xp = ZPoly::from_side(&cusp(), Side::XPlus);
        let m = PuiseuxSeries::monomial(Scalar::one(), rat(3, 2));
        let shifted = xp.shift(&m);
        assert!(shifted.coeff(0).is_empty());
        assert_eq!(shifted.order(1), Some(rat(3, 2)));
        assert_eq!(xp.eval(&m), PuiseuxSeries::zero());
    }
}
