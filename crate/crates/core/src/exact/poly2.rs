//! Sparse bivariate polynomials and exact bivariate gcd over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::rational::{fmt_rational, int};
use super::upoly::{Coefficient, UPoly};

/// Sparse polynomial in `x` and `y`; exponent pairs map to nonzero coefficients.
#[derive(Clone, PartialEq)]
pub struct Poly2<C: Coefficient> {
    terms: BTreeMap<(u32, u32), C>,
}

/// Bivariate polynomial with rational coefficients.
pub type Polynomial2 = Poly2<BigRational>;

impl<C: Coefficient> Default for Poly2<C> {
    fn default() -> Self {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coefficient> Poly2<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: C, i: u32, j: u32) -> Self {
        let mut p = Self::default();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(C::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), C)>) -> Self {
        let mut p = Self::default();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(C::zero);
        *slot = slot.plus(&c);
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
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

    /// Least total degree of a stored term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|(_, j)| *j).max()
    }

    /// Largest power of `x` dividing the polynomial.
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).min()
    }

    pub fn y_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|(_, j)| *j).min()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn negated(&self) -> Self {
        self.map(|c| c.negated())
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn scale(&self, k: &C) -> Self {
        self.map(|c| c.times(k))
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term(i + k, j + l, a.times(b));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(C::one()), |acc, _| acc.times(self))
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly2<D> {
        Poly2::from_terms(self.terms.iter().map(|(&k, c)| (k, f(c))))
    }

    /// Divides by `x^a y^b`; every term must be divisible.
    pub fn shift_down(&self, a: u32, b: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| {
            assert!(i >= a && j >= b, "monomial division is not exact");
            ((i - a, j - b), c.clone())
        }))
    }

    pub fn swap_xy(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    /// `p(-x, y)` when `flip_x`, `p(x, -y)` when `flip_y`.
    pub fn reflect(&self, flip_x: bool, flip_y: bool) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| {
            let odd = (flip_x && i % 2 == 1) ^ (flip_y && j % 2 == 1);
            ((i, j), if odd { c.negated() } else { c.clone() })
        }))
    }

    /// Substitutes `x -> px`, `y -> py`.
    pub fn compose(&self, px: &Self, py: &Self) -> Self {
        let mut xp: Vec<Self> = vec![Self::constant(C::one())];
        let mut yp: Vec<Self> = vec![Self::constant(C::one())];
        let dx = self.degree_x().unwrap_or(0) as usize;
        let dy = self.degree_y().unwrap_or(0) as usize;
        while xp.len() <= dx {
            let next = xp[xp.len() - 1].times(px);
            xp.push(next);
        }
        while yp.len() <= dy {
            let next = yp[yp.len() - 1].times(py);
            yp.push(next);
        }
        let mut out = Self::default();
        for (&(i, j), c) in &self.terms {
            out = out.plus(&xp[i as usize].times(&yp[j as usize]).scale(c));
        }
        out
    }

    /// Monomial substitution `x -> x^a y^b`, `y -> x^c y^d`.
    pub fn monomial_substitution(&self, a: u32, b: u32, c: u32, d: u32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(&(i, j), k)| ((a * i + c * j, b * i + d * j), k.clone())),
        )
    }

    /// `p(x, y + t)` for a constant `t`.
    pub fn translate_y(&self, t: &C) -> Self {
        let py = Self::y().plus(&Self::constant(t.clone()));
        self.compose(&Self::x(), &py)
    }

    /// Coefficient of `y^j` as a polynomial in `x`.
    pub fn coefficient_in_y(&self, j: u32) -> UPoly<C> {
        let n = self
            .terms
            .keys()
            .filter(|(_, jj)| *jj == j)
            .map(|(i, _)| *i as usize + 1)
            .max()
            .unwrap_or(0);
        let mut v = vec![C::zero(); n];
        for (&(i, jj), c) in &self.terms {
            if jj == j {
                v[i as usize] = c.clone();
            }
        }
        UPoly::new(v)
    }

    /// Restriction to `x = 0` as a polynomial in `y`.
    pub fn at_x_zero(&self) -> UPoly<C> {
        self.swap_xy().coefficient_in_y(0)
    }

    /// Restriction to `y = 0` as a polynomial in `x`.
    pub fn at_y_zero(&self) -> UPoly<C> {
        self.coefficient_in_y(0)
    }

    /// Rows indexed by the power of `y`, each a polynomial in `x`.
    pub fn as_y_rows(&self) -> Vec<UPoly<C>> {
        let d = self.degree_y().map(|d| d as usize + 1).unwrap_or(0);
        (0..d).map(|j| self.coefficient_in_y(j as u32)).collect()
    }

    pub fn from_y_rows(rows: &[UPoly<C>]) -> Self {
        let mut out = Self::default();
        for (j, row) in rows.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, c.clone());
            }
        }
        out
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| {
                    (
                        (i - 1, j),
                        c.times(&C::from_rational(&BigRational::from_integer(i.into()))),
                    )
                }),
        )
    }

    pub fn partial_y(&self) -> Self {
        self.swap_xy().partial_x().swap_xy()
    }

    /// Value at a point.
    pub fn eval(&self, x: &C, y: &C) -> C {
        self.terms.iter().fold(C::zero(), |acc, (&(i, j), c)| {
            let mut t = c.clone();
            for _ in 0..i {
                t = t.times(x);
            }
            for _ in 0..j {
                t = t.times(y);
            }
            acc.plus(&t)
        })
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, j), _)| i + j == d)
                .map(|(&k, c)| (k, c.clone())),
        )
    }
}

impl Polynomial2 {
    /// Germ multiplicity: least total degree of a term.
    pub fn multiplicity(&self) -> Option<u32> {
        self.order()
    }

    /// Square-free part: product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Polynomial2 {
        if self.is_zero() {
            return Polynomial2::zero();
        }
        let rows = self.as_y_rows();
        let content = content(&rows);
        let primitive: Vec<UPoly<BigRational>> =
            rows.iter().map(|r| r.exact_div(&content)).collect();
        let primitive = Polynomial2::from_y_rows(&primitive);
        let content_red = content.squarefree_part();
        let prim_red = if primitive.degree_y().unwrap_or(0) == 0 {
            Polynomial2::constant(int(1))
        } else if squarefree_by_specialization(&primitive.as_y_rows()) {
            primitive
        } else {
            let g = gcd(&primitive, &primitive.partial_y());
            exact_quotient(&primitive, &g)
        };
        let out = Polynomial2::from_y_rows(&[content_red]).times(&prim_red);
        out.normalized()
    }

    /// Scales so that the leading term (largest exponent pair) has coefficient 1.
    pub fn normalized(&self) -> Polynomial2 {
        match self.terms.values().next_back() {
            Some(lead) => self.scale(&lead.recip()),
            None => Polynomial2::zero(),
        }
    }

    /// Human-readable form, e.g. `y^2 - x^3`; terms by descending total degree.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| (b.0 + b.1).cmp(&(a.0 + a.1)).then(b.0.cmp(&a.0)));
        let mut out = String::new();
        for (n, &&(i, j)) in keys.iter().enumerate() {
            let c = &self.terms[&(i, j)];
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !One::is_one(&mag) || (i == 0 && j == 0) {
                factors.push(fmt_rational(&mag));
            }
            for (var, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl<C: Coefficient> fmt::Debug for Poly2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j), c)| format!("{c:?}*x^{i}*y^{j}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Display for Polynomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

type Row = UPoly<BigRational>;

fn content(rows: &[Row]) -> Row {
    rows.iter()
        .filter(|r| !r.is_zero())
        .fold(Row::zero(), |acc, r| {
            if acc.is_zero() {
                r.monic()
            } else {
                acc.gcd(r)
            }
        })
}

fn primitive_rows(rows: &[Row]) -> Vec<Row> {
    let c = content(rows);
    if c.is_zero() {
        return rows.to_vec();
    }
    trim(rows.iter().map(|r| r.exact_div(&c)).collect())
}

fn trim(mut rows: Vec<Row>) -> Vec<Row> {
    while rows.last().is_some_and(|r| r.is_zero()) {
        rows.pop();
    }
    rows
}

/// True when some integer specialization `x = a` keeps the `y`-degree and is
/// square-free in `y`; that certifies the primitive part is square-free.
fn squarefree_by_specialization(rows: &[Row]) -> bool {
    let rows = trim(rows.to_vec());
    let Some(lead) = rows.last() else {
        return false;
    };
    (1..=8i64)
        .map(|a| BigRational::from_integer(a.into()))
        .any(|at| {
            if lead.eval(&at).is_zero() {
                return false;
            }
            let values: Vec<BigRational> = rows.iter().map(|r| r.eval(&at)).collect();
            Row::new(values).is_squarefree()
        })
}

/// Pseudo-remainder of `a` by `b` as polynomials in `y` over `Q[x]`.
fn pseudo_remainder(a: &[Row], b: &[Row]) -> Vec<Row> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let lr = r[top].clone();
        let shift = top - db;
        for row in r.iter_mut() {
            *row = row.times(&lb);
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].minus(&bj.times(&lr));
        }
        r = trim(r);
        if r.len() > top {
            r.truncate(top);
        }
    }
    r
}

/// Greatest common divisor in `Q[x, y]`, normalized.
pub fn gcd(a: &Polynomial2, b: &Polynomial2) -> Polynomial2 {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let (ra, rb) = (trim(a.as_y_rows()), trim(b.as_y_rows()));
    let cont = content(&ra).gcd(&content(&rb));
    let (mut p, mut q) = (primitive_rows(&ra), primitive_rows(&rb));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while q.len() > 1 {
        let r = pseudo_remainder(&p, &q);
        p = q;
        q = if r.is_empty() {
            Vec::new()
        } else {
            primitive_rows(&r)
        };
        if q.is_empty() {
            break;
        }
    }
    let g = if q.len() == 1 { vec![Row::one()] } else { p };
    Polynomial2::from_y_rows(&g)
        .times(&Polynomial2::from_y_rows(&[cont]))
        .normalized()
}

/// Quotient of an exact division in `Q[x, y]`.
pub fn exact_quotient(a: &Polynomial2, b: &Polynomial2) -> Polynomial2 {
    let b_rows = trim(b.as_y_rows());
    let db = b_rows.len() - 1;
    let lb = b_rows[db].clone();
    let mut r = trim(a.as_y_rows());
    let mut quo = vec![Row::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let top = r.len() - 1;
        let (c, rem) = r[top].divrem(&lb);
        assert!(rem.is_zero(), "inexact bivariate division");
        let shift = top - db;
        for (j, bj) in b_rows.iter().enumerate() {
            r[shift + j] = r[shift + j].minus(&bj.times(&c));
        }
        quo[shift] = c;
        r.pop();
        r = trim(r);
    }
    assert!(
        r.iter().all(|row| row.is_zero()),
        "inexact bivariate division"
    );
    Polynomial2::from_y_rows(&quo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(terms: &[(i64, u32, u32)]) -> Polynomial2 {
        Polynomial2::from_terms(terms.iter().map(|&(c, i, j)| ((i, j), int(c))))
    }

    #[test]
    fn arithmetic_and_order() {
        let cusp = xy(&[(1, 0, 2), (-1, 3, 0)]);
        assert_eq!(cusp.multiplicity(), Some(2));
        assert_eq!(cusp.to_text(), "-x^3 + y^2");
        let sq = cusp.times(&cusp);
        assert_eq!(sq.coeff(3, 2), int(-2));
    }

    #[test]
    fn squarefree_part_drops_repeats() {
        let line = xy(&[(1, 0, 1), (-1, 2, 0)]);
        let f = line
            .times(&line)
            .times(&xy(&[(1, 1, 0)]))
            .times(&xy(&[(1, 1, 0)]));
        let red = f.squarefree_part();
        assert_eq!(red, line.times(&xy(&[(1, 1, 0)])).normalized());
    }

    #[test]
    fn gcd_finds_common_factor() {
        let a = xy(&[(1, 0, 2), (-1, 3, 0)]).times(&xy(&[(1, 1, 0), (1, 0, 1)]));
        let b = xy(&[(1, 0, 2), (-1, 3, 0)]).times(&xy(&[(1, 1, 0), (-1, 0, 1)]));
        assert_eq!(gcd(&a, &b), xy(&[(1, 0, 2), (-1, 3, 0)]).normalized());
    }

    #[test]
    fn compose_shear() {
        let f = xy(&[(1, 0, 2), (-1, 3, 0)]);
        let g = f.compose(&Polynomial2::x(), &xy(&[(1, 0, 1), (1, 2, 0)]));
        assert_eq!(g.coeff(4, 0), int(1));
        assert_eq!(g.coeff(2, 1), int(2));
    }
}
