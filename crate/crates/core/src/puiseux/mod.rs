//! Newton–Puiseux expansion, real arcs, contact orders and order profiles.

mod tree;
mod zpoly;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc as Shared;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    format_series, int, real_roots, truncation_cap, Coefficient, ExactRational, ExtendedRational,
    Polynomial2, PuiseuxSeries, RealCoefficient, Scalar, UPoly,
};

pub use tree::{ComplexCluster, NodeKind, SideTree, Split, TreeNode};
pub use zpoly::ZPoly;

/// The four half-planes from which arcs leave the origin, in counterclockwise order.
///
/// On `XPlus`/`XMinus` an arc is `y = eta(s)` with `x = +s`/`-s`; on
/// `YPlus`/`YMinus` it is `x = eta(s)` with `y = +s`/`-s`, for `s > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    XPlus,
    YPlus,
    XMinus,
    YMinus,
}

impl Side {
    pub const CIRCLE: [Side; 4] = [Side::XPlus, Side::YPlus, Side::XMinus, Side::YMinus];

    pub fn is_x(self) -> bool {
        matches!(self, Side::XPlus | Side::XMinus)
    }

    /// X sides own the arcs with a non-vertical tangent, Y sides the vertical ones.
    pub(crate) fn owns_level_one(self) -> bool {
        self.is_x()
    }

    /// Whether increasing `eta` moves counterclockwise.
    pub fn increasing_is_ccw(self) -> bool {
        matches!(self, Side::XPlus | Side::YMinus)
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Side::XMinus | Side::YMinus)
    }

    pub fn marker(self) -> &'static str {
        match self {
            Side::XPlus => "x>0",
            Side::YPlus => "y>0",
            Side::XMinus => "x<0",
            Side::YMinus => "y<0",
        }
    }

    pub fn from_marker(text: &str) -> Option<Side> {
        Side::CIRCLE.into_iter().find(|s| s.marker() == text)
    }

    /// Graph variable and parameter variable names.
    pub fn variables(self) -> (&'static str, &'static str) {
        if self.is_x() {
            ("y", "x")
        } else {
            ("x", "y")
        }
    }

    /// Coordinates `(x(s), y(s))` of the arc `eta` on this side.
    pub fn coordinates(self, eta: &PuiseuxSeries) -> (PuiseuxSeries, PuiseuxSeries) {
        let s = PuiseuxSeries::monomial(Scalar::one(), int(1));
        let param = if self.is_negative() { s.negated() } else { s };
        if self.is_x() {
            (param, eta.clone())
        } else {
            (eta.clone(), param)
        }
    }
}

/// Rewrites a series in the signed parameter variable as a series in `s = |t|`
/// on a negative side; fractional powers with even denominator read `|t|`.
/// The map is an involution, so it also converts back.
pub fn signed_to_side(side: Side, series: &PuiseuxSeries) -> PuiseuxSeries {
    if !side.is_negative() {
        return series.clone();
    }
    PuiseuxSeries::from_terms(series.terms().map(|(e, c)| {
        let flip = e.denom().is_odd() && e.numer().is_odd();
        (e.clone(), if flip { c.negated() } else { c.clone() })
    }))
    .with_truncation(series.truncation().clone())
}

/// A real half-branch at the origin, stored as a graph over one side.
#[derive(Clone)]
pub struct Arc {
    side: Side,
    series: PuiseuxSeries,
    tail: Option<Shared<TreeNode>>,
}

impl Arc {
    /// Builds an arc from an exact graph series of order at least one.
    pub fn new(side: Side, series: PuiseuxSeries) -> Result<Arc> {
        if let Some((e, _)) = series.leading() {
            if e < &int(1) {
                return Err(Error::ExponentBelowOne(crate::exact::fmt_rational(e)));
            }
        }
        Ok(Arc {
            side,
            series,
            tail: None,
        })
    }

    /// The real root carried by a leaf of a contact tree.
    pub fn from_leaf(side: Side, leaf: &TreeNode) -> Arc {
        let series = leaf.leaf_series(&leaf.level);
        Arc {
            side,
            series,
            tail: Some(Shared::new(leaf.clone())),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn series(&self) -> &PuiseuxSeries {
        &self.series
    }

    /// True for roots of a germ whose expansion is computed on demand.
    pub fn is_branch(&self) -> bool {
        self.tail.is_some()
    }

    /// The graph series, known at least up to `bound` (or exactly).
    pub fn series_until(&self, bound: &ExactRational) -> PuiseuxSeries {
        match &self.tail {
            Some(leaf) => leaf.leaf_series(bound),
            None => self.series.clone(),
        }
    }

    /// Coordinates `(x(s), y(s))` known up to `bound`.
    pub fn coordinates(&self, bound: &ExactRational) -> (PuiseuxSeries, PuiseuxSeries) {
        self.side.coordinates(&self.series_until(bound))
    }

    fn leading_exponent(&self) -> Option<ExactRational> {
        self.series.leading().map(|(e, _)| e.clone())
    }

    /// Vertical-side arcs with a non-vertical tangent, rewritten as a graph over `x`.
    fn as_x_graph(&self, precision: &ExactRational) -> Result<Option<(Side, PuiseuxSeries)>> {
        if self.side.is_x() {
            return Ok(Some((self.side, self.series_until(precision))));
        }
        if self.leading_exponent() != Some(int(1)) {
            return Ok(None);
        }
        revert(self, precision).map(Some)
    }

    /// Text form `y = ... [x>0]`.
    pub fn to_text(&self) -> String {
        let (graph, param) = self.side.variables();
        let shown = signed_to_side(self.side, &self.series);
        format!(
            "{graph} = {} [{}]",
            format_series(&shown, param),
            self.side.marker()
        )
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Inverts `x = eta(y)` with `eta = a y + ...`, `a` rational and nonzero.
fn revert(arc: &Arc, precision: &ExactRational) -> Result<(Side, PuiseuxSeries)> {
    let eta = &arc.series;
    let a = eta
        .coefficient(&int(1))
        .as_rational()
        .ok_or_else(|| Error::TruncationTooShort {
            reached: "irrational tangent".into(),
        })?;
    let sigma_x = if a.is_positive() {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    };
    let abs_a = a.abs();
    let rest = eta
        .minus(&PuiseuxSeries::monomial(Scalar::Rat(a.clone()), int(1)))
        .scale(&sigma_x);
    let side = if a.is_positive() {
        Side::XPlus
    } else {
        Side::XMinus
    };
    let sigma_y = if arc.side == Side::YPlus {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    };
    let u_over_a = PuiseuxSeries::monomial(Scalar::Rat(abs_a.recip()), int(1));
    let exact_linear = rest.is_empty();
    if exact_linear {
        return Ok((side, u_over_a.scale(&sigma_y)));
    }
    let denom = rest
        .terms()
        .fold(num_bigint::BigInt::from(1), |acc, (e, _)| {
            acc.lcm(e.denom())
        });
    let d: usize = (&denom).try_into().expect("small ramification");
    let rho = if d == 1 {
        Scalar::Rat(abs_a.recip())
    } else {
        // rho = |a|^(-1/d), the positive real root of t^d - 1/|a|.
        let mut coeffs = vec![Scalar::zero(); d + 1];
        coeffs[0] = Scalar::Rat(-abs_a.recip());
        coeffs[d] = Scalar::one();
        real_roots(&UPoly::new(coeffs), &None)
            .pop()
            .expect("positive root")
            .value
    };
    let power_of_rho = |q: &ExactRational| -> Scalar {
        let n: i64 = (q * BigRational::from_integer(denom.clone()))
            .to_integer()
            .try_into()
            .expect("small exponent");
        (0..n).fold(Scalar::one(), |r, _| r.times(&rho))
    };
    let gap = rest
        .leading()
        .map(|(e, _)| e - int(1))
        .expect("nonempty rest");
    let rel = precision - int(1);
    let trunc = ExtendedRational::Finite(rel.clone());
    let mut w = PuiseuxSeries::zero().with_truncation(trunc.clone());
    let iterations = (&rel / &gap).ceil().to_integer() + 1;
    let mut i = num_bigint::BigInt::zero();
    while i < iterations {
        let mut next = PuiseuxSeries::zero().with_truncation(trunc.clone());
        for (q, r) in rest.terms() {
            let coeff = r.times(&power_of_rho(q)).negated();
            let grown = PuiseuxSeries::binomial_power(&w, q, &rel);
            next = next.plus(&grown.shift(&(q - int(1))).scale(&coeff));
        }
        w = next.with_truncation(trunc.clone());
        i += 1;
    }
    let s_of_u = u_over_a.times(&PuiseuxSeries::one().plus(&w));
    Ok((
        side,
        s_of_u
            .scale(&sigma_y)
            .with_truncation(ExtendedRational::Finite(precision.clone())),
    ))
}

/// Positive real `value^(1/n)` for a positive scalar.
pub(crate) fn positive_root(value: &Scalar, n: usize) -> Scalar {
    if n == 1 {
        return value.clone();
    }
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[0] = value.negated();
    coeffs[n] = Scalar::one();
    real_roots(&UPoly::new(coeffs), &value.field().cloned())
        .pop()
        .expect("positive root")
        .value
}

fn eval_upoly_at(p: &UPoly<Scalar>, t: &PuiseuxSeries) -> PuiseuxSeries {
    p.coeffs()
        .iter()
        .rev()
        .fold(PuiseuxSeries::zero(), |acc, c| {
            acc.times(t).plus(&PuiseuxSeries::constant(c.clone()))
        })
}

/// The half-branch `t -> (x(t), y(t))`, `t > 0`, rewritten as a graph over
/// its dominant coordinate with `precision` exponents beyond the leading one.
pub fn arc_from_parametrization(
    x: &UPoly<Scalar>,
    y: &UPoly<Scalar>,
    precision: &ExactRational,
) -> Result<Arc> {
    let low = |p: &UPoly<Scalar>| p.coeffs().iter().position(|c| !c.is_zero());
    let (lx, ly) = (low(x), low(y));
    let x_dominant = match (lx, ly) {
        (Some(a), Some(b)) => a <= b,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => return Err(Error::NotAGerm("constant parametrization".into())),
    };
    let (lead_poly, other) = if x_dominant { (x, y) } else { (y, x) };
    let l = low(lead_poly).expect("nonzero");
    if l == 0 {
        return Err(Error::ExponentBelowOne("0".into()));
    }
    let alpha = lead_poly.coeff(l);
    let positive = alpha.sign() == Ordering::Greater;
    let side = match (x_dominant, positive) {
        (true, true) => Side::XPlus,
        (true, false) => Side::XMinus,
        (false, true) => Side::YPlus,
        (false, false) => Side::YMinus,
    };
    let abs_alpha = if positive {
        alpha.clone()
    } else {
        alpha.negated()
    };
    // sigma * lead(t) = |alpha| t^l (1 + w(t)).
    let normalizer = if positive {
        abs_alpha.inverse()
    } else {
        abs_alpha.inverse().negated()
    };
    let w = UPoly::new(
        lead_poly.coeffs()[l..]
            .iter()
            .map(|c| c.times(&normalizer))
            .collect(),
    )
    .minus(&UPoly::one());
    let rho = positive_root(&abs_alpha.inverse(), l);
    let inv_l = BigRational::new(1.into(), (l as i64).into());
    let trunc = ExtendedRational::Finite(&inv_l + precision);
    let base = PuiseuxSeries::monomial(rho, inv_l.clone());
    let mut t = base.clone().with_truncation(trunc.clone());
    let rounds = (precision * BigRational::from_integer((l as i64).into()))
        .ceil()
        .to_integer()
        + 2;
    let mut k = num_bigint::BigInt::zero();
    while k < rounds {
        let shifted =
            eval_upoly_at(&w, &t).with_truncation(ExtendedRational::Finite(precision.clone()));
        let next = base
            .times(&PuiseuxSeries::binomial_power(
                &shifted,
                &-inv_l.clone(),
                precision,
            ))
            .with_truncation(trunc.clone());
        if next == t {
            break;
        }
        t = next;
        k += 1;
    }
    let graph = eval_upoly_at(other, &t);
    Arc::new(side, graph)
}

/// Order of contact between two half-branches.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ContactOrder(pub ExtendedRational);

impl fmt::Display for ContactOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Contact exponent of two real arcs: order of the graph difference on a
/// common side, `1` for arcs leaving in different directions.
pub fn contact_order_puiseux(a: &Arc, b: &Arc) -> Result<ContactOrder> {
    let cap = truncation_cap();
    let mut bound = int(4);
    loop {
        let pair = if a.side == b.side {
            Some((
                (a.side, a.series_until(&bound)),
                (b.side, b.series_until(&bound)),
            ))
        } else {
            match (a.as_x_graph(&bound)?, b.as_x_graph(&bound)?) {
                (Some(pa), Some(pb)) => Some((pa, pb)),
                _ => None,
            }
        };
        let Some(((sa, ea), (sb, eb))) = pair else {
            return Ok(ContactOrder(ExtendedRational::from_int(1)));
        };
        if sa != sb {
            return Ok(ContactOrder(ExtendedRational::from_int(1)));
        }
        let diff = ea.minus(&eb);
        if let Some((e, _)) = diff.leading() {
            return Ok(ContactOrder(ExtendedRational::Finite(e.clone())));
        }
        if diff.is_exact() {
            return Ok(ContactOrder(ExtendedRational::Infinity));
        }
        if bound > cap {
            return Err(Error::TruncationTooShort {
                reached: diff.truncation().to_string(),
            });
        }
        bound *= int(2);
    }
}

/// Normalized order of `f` along `arc`: the order of `f(x(s), y(s))`.
pub fn order_along_arc(f: &Polynomial2, arc: &Arc) -> Result<ExtendedRational> {
    if arc.is_branch() {
        return Ok(ExtendedRational::Infinity);
    }
    ZPoly::from_side(f, arc.side).eval(&arc.series).order()
}

/// Generic order of `f` along arcs at contact `beta` with a fixed arc:
/// `Q(beta) = min_k (ord a_k + k beta)` where `f(arc + z) = sum a_k z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderProfile {
    points: Vec<(usize, ExactRational)>,
}

impl OrderProfile {
    pub fn from_points(points: Vec<(usize, ExactRational)>) -> Self {
        OrderProfile { points }
    }

    pub fn points(&self) -> &[(usize, ExactRational)] {
        &self.points
    }

    pub fn value(&self, beta: &ExtendedRational) -> ExtendedRational {
        self.points
            .iter()
            .map(|(k, o)| {
                if *k == 0 {
                    ExtendedRational::Finite(o.clone())
                } else {
                    &beta.scale(&BigRational::from_integer((*k).into())) + o
                }
            })
            .min()
            .unwrap_or(ExtendedRational::Infinity)
    }

    /// Slope of `Q` just above `beta`.
    pub fn slope_after(&self, beta: &ExactRational) -> usize {
        let v = |k: usize, o: &ExactRational| o + beta * BigRational::from_integer(k.into());
        let min = self.points.iter().map(|(k, o)| v(*k, o)).min();
        self.points
            .iter()
            .filter(|(k, o)| Some(v(*k, o)) == min)
            .map(|(k, _)| *k)
            .min()
            .unwrap_or(0)
    }

    /// `ord a_k` for the `k` attaining the minimum just above `beta`.
    pub fn intercept_after(&self, beta: &ExactRational) -> ExtendedRational {
        let k = self.slope_after(beta);
        self.points
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, o)| ExtendedRational::Finite(o.clone()))
            .unwrap_or(ExtendedRational::Infinity)
    }

    /// Values of `beta > 1` where the slope of `Q` changes, increasing.
    pub fn breakpoints(&self) -> Vec<ExactRational> {
        let mut out = Vec::new();
        let mut beta = int(1);
        loop {
            let k = self.slope_after(&beta);
            if k == 0 {
                break;
            }
            let (o_k, _) = (self.order_of(k).expect("present"), ());
            let next = self
                .points
                .iter()
                .filter(|(kk, _)| *kk < k)
                .map(|(kk, o)| (o - &o_k) / BigRational::from_integer((k - kk).into()))
                .filter(|b| b > &beta)
                .min();
            match next {
                Some(b) => {
                    out.push(b.clone());
                    beta = b;
                }
                None => break,
            }
        }
        out
    }

    fn order_of(&self, k: usize) -> Option<ExactRational> {
        self.points
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, o)| o.clone())
    }

    /// `Q(+inf)`, the order along the arc itself.
    pub fn at_infinity(&self) -> ExtendedRational {
        self.value(&ExtendedRational::Infinity)
    }

    /// Least `beta >= 1` beyond which `Q` is constant; `inf` if it never is.
    pub fn width(&self) -> ExtendedRational {
        if self.order_of(0).is_none() {
            return ExtendedRational::Infinity;
        }
        ExtendedRational::Finite(self.breakpoints().pop().unwrap_or_else(|| int(1)))
    }
}

/// Order profile of `f` around `arc`.
pub fn order_profile(f: &Polynomial2, arc: &Arc) -> Result<OrderProfile> {
    let h = ZPoly::from_side(f, arc.side);
    if !arc.is_branch() {
        let g = h.shift(&arc.series);
        let points = (0..=g.degree().unwrap_or(0))
            .filter_map(|k| g.order(k).map(|o| (k, o)))
            .collect();
        return Ok(OrderProfile::from_points(points));
    }
    let leaf = arc.tail.as_ref().expect("branch");
    let depth = leaf.level.clone() + int(2);
    let bound = depth * int(h.degree().unwrap_or(1).max(1) as i64) + int(2);
    let g = h.shift(&leaf.leaf_series(&bound));
    let points = (1..=g.degree().unwrap_or(0))
        .filter_map(|k| g.order(k).map(|o| (k, o)))
        .collect();
    Ok(OrderProfile::from_points(points))
}

/// A Puiseux root of the germ on one side.
#[derive(Clone, Debug)]
pub struct Branch {
    pub axis: Side,
    /// The root for real branches; for non-real ones the common real prefix,
    /// truncated where the conjugates leave the real axis.
    pub series: PuiseuxSeries,
    pub multiplicity: usize,
    /// Ramification index for real branches, number of conjugate roots otherwise.
    pub conjugacy_size: usize,
    pub is_real: bool,
    /// Square-free polynomial whose non-real roots are the diverging coefficients.
    pub divergence: Option<UPoly<Scalar>>,
    arc: Option<Arc>,
}

impl Branch {
    /// The half-branch as an arc; `None` for non-real roots.
    pub fn arc(&self) -> Option<&Arc> {
        self.arc.as_ref()
    }

    /// One-line summary, e.g. `real y = x^(3/2) [x>0] multiplicity=1 ramification=2`.
    pub fn to_text(&self) -> String {
        let (graph, param) = self.axis.variables();
        let shown = format_series(&signed_to_side(self.axis, &self.series), param);
        let (kind, count) = if self.is_real {
            ("real", "ramification")
        } else {
            ("complex", "conjugates")
        };
        format!(
            "{kind} {graph} = {shown} [{}] multiplicity={} {count}={}",
            self.axis.marker(),
            self.multiplicity,
            self.conjugacy_size
        )
    }
}

/// Contact trees of a germ on all four sides.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub germ: Polynomial2,
    pub reduced: Polynomial2,
    pub trees: Vec<SideTree>,
}

impl Expansion {
    pub fn new(germ: &Polynomial2) -> Self {
        let reduced = germ.squarefree_part();
        let trees = Side::CIRCLE
            .iter()
            .map(|&side| SideTree::build(germ, &reduced, side))
            .collect();
        Expansion {
            germ: germ.clone(),
            reduced,
            trees,
        }
    }

    pub fn tree(&self, side: Side) -> &SideTree {
        &self.trees[Side::CIRCLE.iter().position(|s| *s == side).expect("side")]
    }

    /// Real half-branches in counterclockwise order starting from the positive x-axis.
    pub fn real_arcs(&self) -> Vec<Arc> {
        let mut out = Vec::new();
        for t in &self.trees {
            let Some(root) = &t.root else { continue };
            let mut leaves: Vec<Arc> = root
                .leaves()
                .into_iter()
                .map(|l| Arc::from_leaf(t.side, l))
                .collect();
            if !t.side.increasing_is_ccw() {
                leaves.reverse();
            }
            out.extend(leaves);
        }
        out
    }

    pub fn branches(&self) -> Vec<Branch> {
        let mut out = Vec::new();
        for t in &self.trees {
            let Some(root) = &t.root else { continue };
            let bound = root.deepest_height() + int(1);
            collect_branches(t.side, root, &bound, &mut out);
        }
        out
    }
}

fn collect_branches(side: Side, node: &TreeNode, bound: &ExactRational, out: &mut Vec<Branch>) {
    match &node.kind {
        NodeKind::Leaf { .. } => {
            let series = node.leaf_series(bound);
            let e: usize = series.ramification().try_into().unwrap_or(1);
            out.push(Branch {
                axis: side,
                series,
                multiplicity: node.multiplicity,
                conjugacy_size: e.max(1),
                is_real: true,
                divergence: None,
                arc: Some(Arc::from_leaf(side, node)),
            });
        }
        NodeKind::Split(split) => {
            for child in &split.children {
                collect_branches(side, child, bound, out);
            }
            for cluster in &split.complex {
                out.push(Branch {
                    axis: side,
                    series: node
                        .prefix
                        .clone()
                        .with_truncation(ExtendedRational::Finite(split.height.clone())),
                    multiplicity: cluster.multiplicity,
                    conjugacy_size: cluster.count,
                    is_real: false,
                    divergence: Some(cluster.divergence.clone()),
                    arc: None,
                });
            }
        }
    }
}

/// Complete set of Puiseux roots of `f` on the four sides.
pub fn newton_puiseux(f: &Polynomial2) -> Vec<Branch> {
    Expansion::new(f).branches()
}

/// Sign of `f` along an exact arc with finite order, from the leading coefficient.
pub fn sign_along_arc(f: &Polynomial2, arc: &Arc) -> Result<Ordering> {
    let value = ZPoly::from_side(f, arc.side).eval(&arc.series);
    Ok(value
        .leading()
        .map(|(_, c)| c.sign())
        .unwrap_or(Ordering::Equal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn poly(terms: &[(i64, u32, u32)]) -> Polynomial2 {
        Polynomial2::from_terms(terms.iter().map(|&(c, i, j)| ((i, j), int(c))))
    }

    fn arc(side: Side, terms: &[(i64, i64, i64)]) -> Arc {
        let s = PuiseuxSeries::from_terms(
            terms
                .iter()
                .map(|&(c, p, q)| (rat(p, q), Scalar::from_int(c))),
        );
        Arc::new(side, s).unwrap()
    }

    fn cusp() -> Polynomial2 {
        poly(&[(1, 0, 2), (-1, 3, 0)])
    }

    #[test]
    fn orders_along_cusp_arcs() {
        let f = cusp();
        assert_eq!(
            order_along_arc(&f, &arc(Side::XPlus, &[])).unwrap(),
            ExtendedRational::from_int(3)
        );
        assert_eq!(
            order_along_arc(&f, &arc(Side::YPlus, &[])).unwrap(),
            ExtendedRational::from_int(2)
        );
        assert_eq!(
            order_along_arc(&f, &arc(Side::XPlus, &[(1, 4, 3)])).unwrap(),
            ExtendedRational::Finite(rat(8, 3))
        );
    }

    #[test]
    fn contacts() {
        let up = arc(Side::XPlus, &[(1, 3, 2)]);
        let down = arc(Side::XPlus, &[(-1, 3, 2)]);
        assert_eq!(
            contact_order_puiseux(&up, &down).unwrap().0,
            ExtendedRational::Finite(rat(3, 2))
        );
        assert_eq!(
            contact_order_puiseux(&up, &up).unwrap().0,
            ExtendedRational::Infinity
        );
        let a = arc(Side::XPlus, &[(1, 2, 1)]);
        let b = arc(Side::XPlus, &[(1, 2, 1), (1, 5, 1)]);
        assert_eq!(
            contact_order_puiseux(&a, &b).unwrap().0,
            ExtendedRational::from_int(5)
        );
        let diag = arc(Side::XPlus, &[(1, 1, 1)]);
        let diag_y = arc(Side::YPlus, &[(1, 1, 1), (1, 3, 1)]);
        assert_eq!(
            contact_order_puiseux(&diag, &diag_y).unwrap().0,
            ExtendedRational::from_int(3)
        );
        let left = arc(Side::XMinus, &[]);
        assert_eq!(
            contact_order_puiseux(&left, &a).unwrap().0,
            ExtendedRational::from_int(1)
        );
    }

    #[test]
    fn reversion_with_fractional_exponent() {
        // x = 2y + y^(3/2) against its own inverse expansion.
        let y_form = arc(Side::YPlus, &[(2, 1, 1), (1, 3, 2)]);
        let (side, inverse) = revert(&y_form, &int(4)).unwrap();
        assert_eq!(side, Side::XPlus);
        assert_eq!(inverse.coefficient(&int(1)), Scalar::Rat(rat(1, 2)));
        let c = inverse.coefficient(&rat(3, 2));
        assert!((c.to_f64() + 0.5f64.powf(2.5)).abs() < 1e-12);
    }

    #[test]
    fn parametrizations_become_graphs() {
        let up = |v: &[i64]| UPoly::new(v.iter().map(|&c| Scalar::from_int(c)).collect());
        let a = arc_from_parametrization(&up(&[0, 0, 1]), &up(&[0, 0, 0, 1]), &int(3)).unwrap();
        assert_eq!(a.side(), Side::XPlus);
        assert_eq!(a.series().coefficient(&rat(3, 2)), Scalar::from_int(1));
        assert_eq!(a.series().terms().count(), 1);
        let b = arc_from_parametrization(&up(&[0, 0, 2]), &up(&[0, 0, 0, 4]), &int(3)).unwrap();
        let c = b.series().coefficient(&rat(3, 2));
        assert_eq!(c.times(&c), Scalar::from_int(2));
        assert_eq!(
            contact_order_puiseux(&a, &b).unwrap().0,
            ExtendedRational::Finite(rat(3, 2))
        );
        // x = -t - t^2, y = t^2: on x < 0, y = s^2 - 2 s^3 + ...
        let c = arc_from_parametrization(&up(&[0, -1, -1]), &up(&[0, 0, 1]), &int(3)).unwrap();
        assert_eq!(c.side(), Side::XMinus);
        assert_eq!(c.series().coefficient(&int(2)), Scalar::from_int(1));
        assert_eq!(c.series().coefficient(&int(3)), Scalar::from_int(-2));
    }

    #[test]
    fn profiles() {
        let f = cusp();
        let p = order_profile(&f, &arc(Side::XPlus, &[])).unwrap();
        assert_eq!(p.breakpoints(), vec![rat(3, 2)]);
        assert_eq!(p.width(), ExtendedRational::Finite(rat(3, 2)));
        let circle = poly(&[(1, 2, 0), (1, 0, 2)]);
        let p = order_profile(&circle, &arc(Side::XPlus, &[])).unwrap();
        assert!(p.breakpoints().is_empty());
        assert_eq!(
            p.value(&ExtendedRational::from_int(5)),
            ExtendedRational::from_int(2)
        );
        let xy = poly(&[(1, 1, 1)]);
        let p = order_profile(&xy, &arc(Side::XPlus, &[(1, 2, 1)])).unwrap();
        assert_eq!(p.breakpoints(), vec![int(2)]);
        assert_eq!(
            p.value(&ExtendedRational::Finite(rat(3, 2))),
            ExtendedRational::Finite(rat(5, 2))
        );
        let p = order_profile(&f, &arc(Side::XPlus, &[(1, 3, 2)])).unwrap();
        assert_eq!(p.width(), ExtendedRational::Infinity);
    }

    #[test]
    fn branches_of_basic_germs() {
        let b = newton_puiseux(&cusp());
        let real: Vec<&Branch> = b.iter().filter(|x| x.is_real).collect();
        assert_eq!(real.len(), 2);
        assert!(real
            .iter()
            .all(|x| x.conjugacy_size == 2 && x.axis == Side::XPlus));
        let b = newton_puiseux(&poly(&[(1, 1, 1)]));
        let sides: Vec<Side> = b.iter().filter(|x| x.is_real).map(|x| x.axis).collect();
        assert_eq!(
            sides,
            vec![Side::XPlus, Side::YPlus, Side::XMinus, Side::YMinus]
        );
        let b = newton_puiseux(&poly(&[(1, 2, 0), (1, 0, 2)]));
        assert!(b.iter().all(|x| !x.is_real));
        assert_eq!(b.iter().map(|x| x.conjugacy_size).sum::<usize>(), 4);
    }
}
