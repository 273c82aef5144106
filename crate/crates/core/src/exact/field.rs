//! Real number fields `Q(theta)` and the scalar type used for series coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::algebraic::{factor_rational, interpolate, resultant_formal, AlgebraicNumber};
use super::rational::{fmt_rational, int};
use super::roots::{count_roots_in, isolate_real_roots, refine_once, Interval, IsolatedRoot};
use super::upoly::{Coefficient, RealCoefficient, UPoly};

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);
static KNOWN_FIELDS: Mutex<Vec<Arc<NumberField>>> = Mutex::new(Vec::new());

/// `Q(theta)` for a real algebraic `theta` of degree at least two.
pub struct NumberField {
    id: u64,
    generator: AlgebraicNumber,
}

impl NumberField {
    /// The field generated by `generator`; equal generators share one field.
    pub fn new(generator: AlgebraicNumber) -> Arc<Self> {
        debug_assert!(generator.degree() >= 2);
        let mut known = KNOWN_FIELDS.lock().expect("field registry");
        if let Some(k) = known.iter().find(|k| {
            k.generator.monic_polynomial() == generator.monic_polynomial()
                && k.generator.cmp_value(&generator) == Ordering::Equal
        }) {
            return k.clone();
        }
        let field = Arc::new(NumberField {
            id: NEXT_FIELD_ID.fetch_add(1, AtomicOrdering::Relaxed),
            generator,
        });
        known.push(field.clone());
        field
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn generator(&self) -> &AlgebraicNumber {
        &self.generator
    }

    pub fn modulus(&self) -> &UPoly<BigRational> {
        self.generator.monic_polynomial()
    }

    pub fn degree(&self) -> usize {
        self.generator.degree()
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]#{}", self.generator, self.id)
    }
}

/// A real number that is rational or lies in a known number field.
///
/// Arithmetic between elements of two different fields first moves both into
/// a common extension; values are moved along known inclusions with
/// [`Embedding::lift`].
#[derive(Clone)]
pub enum Scalar {
    Rat(BigRational),
    Alg(Arc<NumberField>, UPoly<BigRational>),
}

fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) {
    assert_eq!(a.id, b.id, "mixing scalars from different number fields");
}

impl Scalar {
    pub fn rational(q: BigRational) -> Self {
        Scalar::Rat(q)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(int(n))
    }

    /// Element of `field` given by its representative polynomial in the generator.
    pub fn in_field(field: &Arc<NumberField>, rep: UPoly<BigRational>) -> Self {
        let rep = rep.rem(field.modulus());
        match rep.degree() {
            None => Scalar::Rat(int(0)),
            Some(0) => Scalar::Rat(rep.coeff(0)),
            _ => Scalar::Alg(field.clone(), rep),
        }
    }

    pub fn generator_of(field: &Arc<NumberField>) -> Self {
        Scalar::in_field(field, UPoly::variable())
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Alg(k, _) => Some(k),
        }
    }

    /// Representative polynomial in the generator of the given field.
    fn rep(&self) -> UPoly<BigRational> {
        match self {
            Scalar::Rat(q) => UPoly::constant(q.clone()),
            Scalar::Alg(_, r) => r.clone(),
        }
    }

    fn combine(
        &self,
        other: &Scalar,
        rat_op: impl Fn(&BigRational, &BigRational) -> BigRational,
        poly_op: impl Fn(&UPoly<BigRational>, &UPoly<BigRational>) -> UPoly<BigRational>,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rat_op(a, b)),
            (Scalar::Alg(k, _), Scalar::Rat(_)) | (Scalar::Rat(_), Scalar::Alg(k, _)) => {
                Scalar::in_field(k, poly_op(&self.rep(), &other.rep()))
            }
            (Scalar::Alg(k, a), Scalar::Alg(l, b)) if k.id == l.id => {
                Scalar::in_field(k, poly_op(a, b))
            }
            (Scalar::Alg(k, _), Scalar::Alg(..)) => {
                let (x, y) = common_field(k, self, other);
                x.combine(&y, rat_op, poly_op)
            }
        }
    }

    /// Interval enclosure narrower than `width`.
    pub fn enclose(&self, width: &BigRational) -> Interval {
        match self {
            Scalar::Rat(q) => Interval::point(q.clone()),
            Scalar::Alg(k, r) => k.generator.enclose(r, width),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rat(q) => super::rational::to_f64(q),
            Scalar::Alg(..) => {
                let iv = self.enclose(&BigRational::new(1.into(), (1u64 << 52).into()));
                super::rational::to_f64(&((iv.lo + iv.hi) / int(2)))
            }
        }
    }

    /// Minimal polynomial and isolating interval of this value.
    pub fn to_algebraic(&self) -> AlgebraicNumber {
        match self {
            Scalar::Rat(q) => AlgebraicNumber::rational(q.clone()),
            Scalar::Alg(k, r) => {
                let modulus = k.modulus();
                let dm = modulus.degree().unwrap_or(0);
                let dr = r.degree().unwrap_or(0);
                let values: Vec<BigRational> = (0..=dm as i64)
                    .map(|s| {
                        let shifted = UPoly::constant(int(s)).minus(r);
                        resultant_formal(modulus, dm, &shifted, dr)
                    })
                    .collect();
                let norm = interpolate(&values);
                let candidates = AlgebraicNumber::real_roots_of(&norm);
                select_enclosed(candidates, |w| self.enclose(w))
            }
        }
    }

    /// Total order on real values, valid across fields.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self.field(), other.field()) {
            (Some(k), Some(l)) if k.id != l.id => {
                self.to_algebraic().cmp_value(&other.to_algebraic())
            }
            _ => self.minus(other).sign(),
        }
    }
}

/// Rewrites `a` (in `k`) and `b` (in another field) inside one extension of `k`.
fn common_field(k: &Arc<NumberField>, a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
    let value = b.to_algebraic();
    let minimal = value.monic_polynomial().map(|c| Scalar::Rat(c.clone()));
    let root = adjoin_root(&minimal, value.isolating(), &Some(k.clone()));
    (root.embedding.lift(a), root.value)
}

/// Picks the unique candidate whose value lies in every enclosure produced by
/// `enclose` as the width shrinks.
fn select_enclosed(
    mut candidates: Vec<AlgebraicNumber>,
    mut enclose: impl FnMut(&BigRational) -> Interval,
) -> AlgebraicNumber {
    let mut width = int(1);
    loop {
        let iv = enclose(&width);
        candidates.retain(|c| {
            c.refine_to(&width);
            c.interval().intersects(&iv)
        });
        match candidates.len() {
            0 => panic!("algebraic value lost during root selection"),
            1 => return candidates.pop().expect("one candidate"),
            _ => width /= int(16),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Rat(_), Scalar::Alg(..)) | (Scalar::Alg(..), Scalar::Rat(_)) => false,
            (Scalar::Alg(k, a), Scalar::Alg(l, b)) if k.id == l.id => a == b,
            _ => self.cmp_value(other) == Ordering::Equal,
        }
    }
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Scalar::Rat(int(0))
    }
    fn one() -> Self {
        Scalar::Rat(int(1))
    }
    fn from_rational(q: &BigRational) -> Self {
        Scalar::Rat(q.clone())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(q) if Zero::is_zero(q))
    }
    fn plus(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b, |a, b| a.plus(b))
    }
    fn minus(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b, |a, b| a.minus(b))
    }
    fn times(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b, |a, b| a.times(b))
    }
    fn negated(&self) -> Self {
        match self {
            Scalar::Rat(q) => Scalar::Rat(-q),
            Scalar::Alg(k, r) => Scalar::Alg(k.clone(), r.negated()),
        }
    }
    fn inverse(&self) -> Self {
        match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Alg(k, r) => {
                let (g, s) = r.gcd_cofactor(k.modulus());
                debug_assert_eq!(g.degree(), Some(0));
                Scalar::in_field(k, s)
            }
        }
    }
    fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rat(q) => Some(q.clone()),
            Scalar::Alg(..) => None,
        }
    }
}

impl RealCoefficient for Scalar {
    fn sign(&self) -> Ordering {
        match self {
            Scalar::Rat(q) => q.cmp(&int(0)),
            Scalar::Alg(k, r) => k.generator.sign_of(r),
        }
    }
    fn abs_upper_bound(&self) -> BigRational {
        match self {
            Scalar::Rat(q) => q.abs(),
            Scalar::Alg(..) => self.enclose(&int(1)).abs_max(),
        }
    }
    fn abs_lower_bound(&self) -> BigRational {
        match self {
            Scalar::Rat(q) => q.abs(),
            Scalar::Alg(..) => {
                self.sign();
                let mut width = int(1);
                loop {
                    let iv = self.enclose(&width);
                    if iv.sign().is_some() {
                        return iv.abs_min();
                    }
                    width /= int(4);
                }
            }
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rat(q)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => f.write_str(&fmt_rational(q)),
            Scalar::Alg(..) => write!(f, "{}", self.to_algebraic()),
        }
    }
}

/// Field inclusion `K -> K'` given by the image of the generator of `K`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Option<Arc<NumberField>>,
    pub target: Option<Arc<NumberField>>,
    pub image: Scalar,
}

impl Embedding {
    pub fn identity(field: Option<Arc<NumberField>>) -> Self {
        let image = match &field {
            Some(k) => Scalar::generator_of(k),
            None => Scalar::zero(),
        };
        Embedding {
            source: field.clone(),
            target: field,
            image,
        }
    }

    pub fn is_identity(&self) -> bool {
        match (&self.source, &self.target) {
            (None, None) => true,
            (Some(a), Some(b)) => a.id == b.id,
            _ => false,
        }
    }

    pub fn lift(&self, x: &Scalar) -> Scalar {
        match x {
            Scalar::Rat(_) => x.clone(),
            Scalar::Alg(k, r) => {
                if self.is_identity() {
                    return x.clone();
                }
                let src = self.source.as_ref().expect("embedding source");
                same_field(k, src);
                r.coeffs().iter().rev().fold(Scalar::zero(), |acc, c| {
                    acc.times(&self.image).plus(&Scalar::Rat(c.clone()))
                })
            }
        }
    }

    pub fn lift_poly(&self, p: &UPoly<Scalar>) -> UPoly<Scalar> {
        p.map(|c| self.lift(c))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        Embedding {
            source: self.source.clone(),
            target: next.target.clone(),
            image: if self.source.is_none() {
                Scalar::zero()
            } else {
                next.lift(&self.image)
            },
        }
    }
}

/// A real root `c` of a polynomial over `base`, expressed in a field containing
/// `base`, with the embedding of `base` into that field.
#[derive(Clone, Debug)]
pub struct AdjoinedRoot {
    pub value: Scalar,
    pub embedding: Embedding,
}

impl AdjoinedRoot {
    pub fn field(&self) -> Option<Arc<NumberField>> {
        self.embedding.target.clone()
    }
}

/// Real roots of a polynomial over `base` (coefficients in `base` or rational),
/// sorted increasingly, each realized in an extension of `base`.
pub fn real_roots(p: &UPoly<Scalar>, base: &Option<Arc<NumberField>>) -> Vec<AdjoinedRoot> {
    let sqf = p.squarefree_part();
    isolate_real_roots(&sqf)
        .into_iter()
        .map(|root| adjoin_root(&sqf, root, base))
        .collect()
}

/// Distinct real roots with their multiplicities, sorted increasingly.
pub fn real_roots_with_multiplicity(
    p: &UPoly<Scalar>,
    base: &Option<Arc<NumberField>>,
) -> Vec<(AdjoinedRoot, usize)> {
    let mut isolated: Vec<(UPoly<Scalar>, IsolatedRoot, usize)> = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        for r in isolate_real_roots(&factor) {
            isolated.push((factor.clone(), r, mult));
        }
    }
    let separated = |a: &IsolatedRoot, b: &IsolatedRoot| a.hi <= b.lo || b.hi <= a.lo;
    loop {
        let mut clash = None;
        'scan: for i in 0..isolated.len() {
            for j in i + 1..isolated.len() {
                if !separated(&isolated[i].1, &isolated[j].1) {
                    clash = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = clash else { break };
        for k in [i, j] {
            let (factor, root, _) = &mut isolated[k];
            refine_once(factor, root);
        }
    }
    isolated.sort_by(|a, b| a.1.hi.cmp(&b.1.hi));
    isolated
        .into_iter()
        .map(|(factor, root, mult)| (adjoin_root(&factor, root, base), mult))
        .collect()
}

/// Realizes the root of square-free `p` isolated by `root`.
pub fn adjoin_root(
    p: &UPoly<Scalar>,
    root: IsolatedRoot,
    base: &Option<Arc<NumberField>>,
) -> AdjoinedRoot {
    if root.exact {
        return AdjoinedRoot {
            value: Scalar::Rat(root.lo),
            embedding: Embedding::identity(base.clone()),
        };
    }
    match base {
        None => adjoin_over_rationals(p, root),
        Some(k) => adjoin_over_field(p, root, k),
    }
}

fn adjoin_over_rationals(p: &UPoly<Scalar>, root: IsolatedRoot) -> AdjoinedRoot {
    let rational = p.map(|c| c.as_rational().expect("rational coefficients over Q"));
    for (factor, _) in factor_rational(&rational) {
        if count_roots_in(&factor, &root.lo, &root.hi) != 1 {
            continue;
        }
        if factor.degree() == Some(1) {
            return AdjoinedRoot {
                value: Scalar::Rat(-factor.coeff(0)),
                embedding: Embedding::identity(None),
            };
        }
        let field = NumberField::new(AlgebraicNumber::new(&factor, root.clone()));
        return AdjoinedRoot {
            value: Scalar::generator_of(&field),
            embedding: Embedding {
                source: None,
                target: Some(field),
                image: Scalar::zero(),
            },
        };
    }
    panic!("isolated root belongs to no rational factor");
}

/// `sum_i p_i(t) (s - k t)^i` as a polynomial in `t` for a fixed rational `s`.
fn shifted_norm_argument(
    reps: &[UPoly<BigRational>],
    k: &BigRational,
    s: &BigRational,
) -> UPoly<BigRational> {
    let linear = UPoly::new(vec![s.clone(), -k.clone()]);
    reps.iter().enumerate().fold(UPoly::zero(), |acc, (i, pi)| {
        acc.plus(&pi.times(&linear.pow(i)))
    })
}

fn adjoin_over_field(
    p: &UPoly<Scalar>,
    root: IsolatedRoot,
    field: &Arc<NumberField>,
) -> AdjoinedRoot {
    let reps: Vec<UPoly<BigRational>> = p
        .coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Alg(k, r) => {
                same_field(k, field);
                r.clone()
            }
            Scalar::Rat(q) => UPoly::constant(q.clone()),
        })
        .collect();
    let modulus = field.modulus();
    let dm = modulus.degree().unwrap_or(0);
    let dp = p.degree().unwrap_or(0);
    let formal_t = reps
        .iter()
        .enumerate()
        .map(|(i, r)| r.degree().unwrap_or(0) + i)
        .max()
        .unwrap_or(0);
    let norm_degree = dm * dp;
    for step in 1..=64i64 {
        let k = int(if step % 2 == 1 {
            step.div_euclid(2) + 1
        } else {
            -(step / 2)
        });
        let values: Vec<BigRational> = (0..=norm_degree as i64)
            .map(|s| {
                resultant_formal(
                    modulus,
                    dm,
                    &shifted_norm_argument(&reps, &k, &int(s)),
                    formal_t,
                )
            })
            .collect();
        let norm = interpolate(&values);
        if !norm.is_squarefree() {
            continue;
        }
        let mut c_root = root.clone();
        let candidates = AlgebraicNumber::real_roots_of(&norm);
        let theta = field.generator();
        let primitive = select_enclosed(candidates, |w| {
            let half = w / int(2);
            let scale = k.abs() + int(1);
            let target = &half / &scale;
            while !c_root.exact && (&c_root.hi - &c_root.lo) >= target {
                refine_once(p, &mut c_root);
            }
            theta.refine_to(&target);
            let c_iv = c_root.interval();
            c_iv.plus(&theta.interval().scale(&k))
        });
        if let Some(w) = primitive.as_rational() {
            // c = w - k theta already lies in the base field.
            let value =
                Scalar::Rat(w).minus(&Scalar::generator_of(field).times(&Scalar::Rat(k.clone())));
            return AdjoinedRoot {
                value,
                embedding: Embedding::identity(Some(field.clone())),
            };
        }
        let extended = NumberField::new(primitive);
        let omega = Scalar::generator_of(&extended);
        let kk = Scalar::Rat(k.clone());
        // m(t) and sum_i p_i(t) (omega - k t)^i share exactly the factor t - theta.
        let lin = UPoly::new(vec![omega.clone(), kk.negated()]);
        let lifted_mod = modulus.map(|c| Scalar::Rat(c.clone()));
        let mixed = reps
            .iter()
            .enumerate()
            .fold(UPoly::<Scalar>::zero(), |acc, (i, pi)| {
                acc.plus(&pi.map(|c| Scalar::Rat(c.clone())).times(&lin.pow(i)))
            });
        let g = lifted_mod.gcd(&mixed);
        if g.degree() != Some(1) {
            continue;
        }
        let theta_image = g.coeff(0).negated();
        let value = omega.minus(&kk.times(&theta_image));
        return AdjoinedRoot {
            value,
            embedding: Embedding {
                source: Some(field.clone()),
                target: Some(extended),
                image: theta_image,
            },
        };
    }
    panic!("no separating primitive element found");
}
