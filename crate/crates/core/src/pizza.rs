//! Pizza decompositions of a germ: cyclic sequences of Hölder triangles on
//! which the width is an affine function of the normalized order.
//!
//! The circle of real arcs is swept along the real skeleton of the Puiseux
//! contact trees. Three kinds of pieces occur: edges, where arcs leave a
//! skeleton path at a varying height and the order grows linearly with it;
//! vertex zones, where arcs leave at a split height with a generic
//! coefficient; and direction zones between consecutive special tangents.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::rational::floor;
use crate::exact::{
    fmt_rational, int, parse_rational, ExactRational, ExtendedRational, Polynomial2, PuiseuxSeries,
    Scalar,
};
use crate::parse::parse_germ;
use crate::puiseux::{
    order_along_arc, order_profile, sign_along_arc, Arc, Expansion, NodeKind, Side, TreeNode,
};

/// Width as a function of the normalized order on a slice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WidthFunction {
    Affine {
        slope: ExactRational,
        intercept: ExactRational,
    },
    Infinite,
}

impl WidthFunction {
    pub fn constant(value: ExactRational) -> Self {
        WidthFunction::Affine {
            slope: int(0),
            intercept: value,
        }
    }

    pub fn at(&self, q: &ExtendedRational) -> ExtendedRational {
        match (self, q) {
            (WidthFunction::Infinite, _) => ExtendedRational::Infinity,
            (WidthFunction::Affine { slope, intercept }, ExtendedRational::Finite(q)) => {
                ExtendedRational::Finite(slope * q + intercept)
            }
            (WidthFunction::Affine { slope, intercept }, ExtendedRational::Infinity) => {
                if slope.is_zero() {
                    ExtendedRational::Finite(intercept.clone())
                } else {
                    ExtendedRational::Infinity
                }
            }
        }
    }
}

impl fmt::Display for WidthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WidthFunction::Infinite => f.write_str("inf"),
            WidthFunction::Affine { slope, intercept } if slope.is_zero() => {
                f.write_str(&fmt_rational(intercept))
            }
            WidthFunction::Affine { slope, intercept } => {
                let lead = if slope.is_one() {
                    "q".to_string()
                } else {
                    format!("{}*q", fmt_rational(slope))
                };
                match intercept.cmp(&int(0)) {
                    Ordering::Equal => f.write_str(&lead),
                    Ordering::Greater => write!(f, "{lead} + {}", fmt_rational(intercept)),
                    Ordering::Less => write!(f, "{lead} - {}", fmt_rational(&-intercept)),
                }
            }
        }
    }
}

/// Closed interval of normalized orders.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderInterval {
    pub low: ExtendedRational,
    pub high: ExtendedRational,
}

impl OrderInterval {
    pub fn point(q: ExtendedRational) -> Self {
        OrderInterval {
            low: q.clone(),
            high: q,
        }
    }

    pub fn is_point(&self) -> bool {
        self.low == self.high
    }

    pub fn contains(&self, q: &ExtendedRational) -> bool {
        &self.low <= q && q <= &self.high
    }

    fn hull(&self, other: &Self) -> Self {
        OrderInterval {
            low: self.low.clone().min(other.low.clone()),
            high: self.high.clone().max(other.high.clone()),
        }
    }
}

impl fmt::Display for OrderInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.low, self.high)
    }
}

/// How the order changes from the first boundary arc to the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Increasing,
    Decreasing,
    Balanced,
}

/// A boundary arc of a slice: a real branch of the germ or a generic cut.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub arc: Option<Arc>,
    pub nu: ExtendedRational,
    pub branch: bool,
}

/// The comparable data of a slice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceDatum {
    pub exponent: ExactRational,
    pub orders: OrderInterval,
    pub width_fn: WidthFunction,
    pub sign: i8,
}

impl fmt::Display for SliceDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "beta={} Q={} mu={} sign={}",
            fmt_rational(&self.exponent),
            self.orders,
            self.width_fn,
            self.sign
        )
    }
}

/// A family of arcs leaving a skeleton path at heights in `(low, high)`.
#[derive(Clone, Debug)]
struct EdgeFamily {
    side: Side,
    prefix: PuiseuxSeries,
    leaf: Option<Arc>,
    direction: i64,
    low: ExactRational,
    high: ExtendedRational,
    nu_low: ExactRational,
    slope: usize,
}

impl EdgeFamily {
    fn slope(&self) -> ExactRational {
        int(self.slope as i64)
    }

    fn arc_at(&self, height: &ExactRational) -> Result<Arc> {
        let base = match &self.leaf {
            Some(leaf) => leaf.series_until(height),
            None => self.prefix.clone(),
        };
        let head = PuiseuxSeries::from_terms(
            base.terms()
                .filter(|(e, _)| *e < height)
                .map(|(e, c)| (e.clone(), c.clone())),
        );
        let own = base.coefficient(height);
        let step =
            |k: i64| crate::exact::Coefficient::plus(&own, &Scalar::from_int(k * self.direction));
        let shifted = if crate::exact::Coefficient::is_zero(&step(1)) {
            step(2)
        } else {
            step(1)
        };
        let bump = PuiseuxSeries::monomial(shifted, height.clone());
        Arc::new(self.side, head.plus(&bump))
    }

    fn nu_at(&self, height: &ExtendedRational) -> ExtendedRational {
        match height {
            ExtendedRational::Finite(h) => {
                ExtendedRational::Finite(&self.nu_low + self.slope() * (h - &self.low))
            }
            ExtendedRational::Infinity => ExtendedRational::Infinity,
        }
    }

    /// Departure height with order `q`, strictly inside the family's range.
    fn height_for(&self, q: &ExactRational) -> Option<ExactRational> {
        let h = &self.low + (q - &self.nu_low) / self.slope();
        (h > self.low && ExtendedRational::Finite(h.clone()) < self.high).then_some(h)
    }

    fn middle(&self) -> ExactRational {
        match &self.high {
            ExtendedRational::Finite(h) => (&self.low + h) / int(2),
            ExtendedRational::Infinity => &self.low + int(1),
        }
    }
}

/// Where realized `(order, width)` pairs of a slice come from.
#[derive(Clone, Debug)]
enum Generator {
    Point {
        arc: Arc,
        nu: ExactRational,
        width: ExactRational,
    },
    Edge(EdgeFamily),
}

/// A Hölder triangle of the pizza with its order interval and width function.
#[derive(Clone, Debug)]
pub struct PizzaSlice {
    /// `None` for the slice covering the whole circle.
    pub boundary: Option<(Boundary, Boundary)>,
    pub exponent: ExactRational,
    pub orders: OrderInterval,
    pub width_fn: WidthFunction,
    pub orientation: Orientation,
    /// Sign of the germ inside the slice; zero only inside its zero set.
    pub sign: i8,
    generators: Vec<Generator>,
}

impl PizzaSlice {
    pub fn datum(&self) -> SliceDatum {
        SliceDatum {
            exponent: self.exponent.clone(),
            orders: self.orders.clone(),
            width_fn: self.width_fn.clone(),
            sign: self.sign,
        }
    }

    /// Representative arcs inside the slice: its point arcs and, for each
    /// family of arcs leaving the skeleton, members at three departure heights.
    pub fn sample_arcs(&self) -> Result<Vec<Arc>> {
        let mut out = Vec::new();
        for g in &self.generators {
            match g {
                Generator::Point { arc, .. } => out.push(arc.clone()),
                Generator::Edge(family) => {
                    let middle = family.middle();
                    let near_low = (&family.low + &middle) / int(2);
                    let upper = match &family.high {
                        ExtendedRational::Finite(h) => (&middle + h) / int(2),
                        ExtendedRational::Infinity => &middle + int(1),
                    };
                    for height in [near_low, middle, upper] {
                        out.push(family.arc_at(&height)?);
                    }
                }
            }
        }
        Ok(out)
    }

    fn is_point(&self) -> bool {
        self.orders.is_point()
    }

    fn right_removable(&self) -> bool {
        self.boundary
            .as_ref()
            .is_some_and(|(_, right)| !right.branch)
    }

    fn set_orientation(&mut self) {
        self.orientation = match &self.boundary {
            Some((l, r)) => match l.nu.cmp(&r.nu) {
                Ordering::Less => Orientation::Increasing,
                Ordering::Greater => Orientation::Decreasing,
                Ordering::Equal => Orientation::Balanced,
            },
            None => Orientation::Balanced,
        };
    }

    /// Whether `(q, w)` is realized by some arc of the slice.
    pub fn realizes(&self, q: &ExtendedRational, w: &ExtendedRational) -> bool {
        self.orders.contains(q) && &self.width_fn.at(q) == w
    }
}

/// The cyclic sequence of slices of a germ, counterclockwise.
#[derive(Clone, Debug)]
pub struct Pizza {
    pub germ: Polynomial2,
    pub slices: Vec<PizzaSlice>,
}

/// Rotation, orientation and sign change matching one pizza to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub rotation: usize,
    pub reversed: bool,
    pub sigma: i8,
    /// `(slice of the first pizza, slice of the second)`.
    pub matching: Vec<(usize, usize)>,
}

impl fmt::Display for EquivalenceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .matching
            .iter()
            .map(|(a, b)| format!("{a}->{b}"))
            .collect();
        write!(
            f,
            "rotation={} orientation={} sigma={} matching=[{}]",
            self.rotation,
            if self.reversed {
                "reversed"
            } else {
                "preserved"
            },
            if self.sigma > 0 { "+1" } else { "-1" },
            pairs.join(", ")
        )
    }
}

fn sign_of(ordering: Ordering) -> i8 {
    match ordering {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn finite(value: ExtendedRational, what: &str) -> Result<ExactRational> {
    value
        .into_finite()
        .ok_or_else(|| Error::OracleDisagreement {
            quantity: what.into(),
            formula: "finite".into(),
            oracle: "inf".into(),
        })
}

/// Rational enclosures of `a < b` separated by a gap.
fn separated(a: &Scalar, b: &Scalar) -> (ExactRational, ExactRational) {
    let mut width = int(1);
    loop {
        let (ia, ib) = (a.enclose(&width), b.enclose(&width));
        if ia.hi < ib.lo || (ia.hi == ib.lo && (ia.lo == ia.hi) != (ib.lo == ib.hi)) {
            return (ia.hi, ib.lo);
        }
        width /= int(16);
    }
}

/// Smallest-magnitude integer in the open interval, else its midpoint.
fn simple_between(lo: &ExactRational, hi: &ExactRational) -> ExactRational {
    if lo < &int(0) && hi > &int(0) {
        return int(0);
    }
    let candidate = if lo >= &int(0) {
        ExactRational::from_integer(floor(lo)) + int(1)
    } else {
        -(ExactRational::from_integer(floor(&-hi)) + int(1))
    };
    if &candidate > lo && &candidate < hi {
        candidate
    } else {
        (lo + hi) / int(2)
    }
}

fn rational_between(a: &Scalar, b: &Scalar) -> ExactRational {
    if let (Scalar::Rat(x), Scalar::Rat(y)) = (a, b) {
        return simple_between(x, y);
    }
    let (lo, hi) = separated(a, b);
    if lo < hi {
        simple_between(&lo, &hi)
    } else {
        lo
    }
}

fn rational_above(a: &Scalar) -> ExactRational {
    let hi = a.enclose(&int(1)).hi;
    if hi < int(0) {
        int(0)
    } else {
        ExactRational::from_integer(floor(&hi)) + int(1)
    }
}

fn rational_below(a: &Scalar) -> ExactRational {
    -rational_above(&crate::exact::Coefficient::negated(a))
}

fn monomial_or_zero(c: ExactRational, e: ExactRational) -> PuiseuxSeries {
    if c.is_zero() {
        PuiseuxSeries::zero()
    } else {
        PuiseuxSeries::monomial(Scalar::Rat(c), e)
    }
}

fn line(side: Side, slope: ExactRational) -> Result<Arc> {
    Arc::new(side, monomial_or_zero(slope, int(1)))
}

/// A piece of the sweep before merging.
struct Piece {
    exponent: ExactRational,
    orders: OrderInterval,
    width_fn: WidthFunction,
    sign: i8,
    nu_first: ExtendedRational,
    nu_last: ExtendedRational,
    generator: Generator,
}

impl Piece {
    fn reverse(&mut self) {
        std::mem::swap(&mut self.nu_first, &mut self.nu_last);
    }
}

enum Item {
    Piece(Piece),
    Branch(Arc),
}

fn reverse_items(items: &mut Vec<Item>) {
    items.reverse();
    for item in items.iter_mut() {
        if let Item::Piece(p) = item {
            p.reverse();
        }
    }
}

/// A special tangent direction: a slope on an x side or the vertical of a y side.
#[derive(Clone, Debug)]
struct Direction {
    side: Side,
    slope: Option<Scalar>,
}

fn following_x_side(side: Side) -> Side {
    match side {
        Side::YPlus => Side::XMinus,
        _ => Side::XPlus,
    }
}

struct Sweep<'a> {
    germ: &'a Polynomial2,
    multiplicity: ExactRational,
}

impl Sweep<'_> {
    /// Confirms predicted order and width at a representative arc and reads the sign there.
    fn check(&self, arc: &Arc, nu: &ExactRational, width: &ExactRational) -> Result<i8> {
        let measured = order_along_arc(self.germ, arc)?;
        if measured != ExtendedRational::Finite(nu.clone()) {
            return Err(Error::OracleDisagreement {
                quantity: format!("order along {}", arc.to_text()),
                formula: fmt_rational(nu),
                oracle: measured.to_string(),
            });
        }
        let measured = order_profile(self.germ, arc)?.width();
        if measured != ExtendedRational::Finite(width.clone()) {
            return Err(Error::OracleDisagreement {
                quantity: format!("width along {}", arc.to_text()),
                formula: fmt_rational(width),
                oracle: measured.to_string(),
            });
        }
        Ok(sign_of(sign_along_arc(self.germ, arc)?))
    }

    fn zone(&self, arc: Arc, exponent: ExactRational, nu: ExactRational) -> Result<Piece> {
        let sign = self.check(&arc, &nu, &exponent)?;
        let q = ExtendedRational::Finite(nu.clone());
        Ok(Piece {
            exponent: exponent.clone(),
            orders: OrderInterval::point(q.clone()),
            width_fn: WidthFunction::constant(exponent.clone()),
            sign,
            nu_first: q.clone(),
            nu_last: q,
            generator: Generator::Point {
                arc,
                nu,
                width: exponent,
            },
        })
    }

    fn edge(&self, family: EdgeFamily) -> Result<Piece> {
        let middle = family.middle();
        let arc = family.arc_at(&middle)?;
        let nu = finite(
            family.nu_at(&ExtendedRational::Finite(middle.clone())),
            "edge order",
        )?;
        let sign = self.check(&arc, &nu, &middle)?;
        let low = ExtendedRational::Finite(family.nu_low.clone());
        let high = family.nu_at(&family.high);
        let slope = family.slope();
        let width_fn = WidthFunction::Affine {
            slope: ExactRational::one() / &slope,
            intercept: &family.low - &family.nu_low / &slope,
        };
        let (nu_first, nu_last) = if family.direction < 0 {
            (low.clone(), high.clone())
        } else {
            (high.clone(), low.clone())
        };
        Ok(Piece {
            exponent: family.low.clone(),
            orders: OrderInterval { low, high },
            width_fn,
            sign,
            nu_first,
            nu_last,
            generator: Generator::Edge(family),
        })
    }

    /// Pieces around the subtree of `node` in increasing graph order.
    fn contour(&self, side: Side, node: &TreeNode) -> Result<Vec<Item>> {
        let low = node.level.clone();
        let nu_low = finite(
            node.full.tropical(&ExtendedRational::Finite(low.clone())),
            "edge order",
        )?;
        let (high, leaf) = match &node.kind {
            NodeKind::Leaf { .. } => (ExtendedRational::Infinity, Some(Arc::from_leaf(side, node))),
            NodeKind::Split(s) => (ExtendedRational::Finite(s.height.clone()), None),
        };
        let family = |direction| EdgeFamily {
            side,
            prefix: node.prefix.clone(),
            leaf: leaf.clone(),
            direction,
            low: low.clone(),
            high: high.clone(),
            nu_low: nu_low.clone(),
            slope: node.multiplicity,
        };
        let mut items = vec![Item::Piece(self.edge(family(-1))?)];
        match &node.kind {
            NodeKind::Leaf { .. } => items.push(Item::Branch(leaf.clone().expect("leaf arc"))),
            NodeKind::Split(split) => {
                let nu = finite(split.plateau_order.clone(), "plateau order")?;
                let coefficients = &split.coefficients;
                for k in 0..=coefficients.len() {
                    let c = match (
                        k.checked_sub(1).map(|i| &coefficients[i]),
                        coefficients.get(k),
                    ) {
                        (None, None) => int(0),
                        (None, Some(b)) => rational_below(b),
                        (Some(a), None) => rational_above(a),
                        (Some(a), Some(b)) => rational_between(a, b),
                    };
                    let series = node.prefix.plus(&monomial_or_zero(c, split.height.clone()));
                    let arc = Arc::new(side, series)?;
                    items.push(Item::Piece(self.zone(
                        arc,
                        split.height.clone(),
                        nu.clone(),
                    )?));
                    if let Some(child) = split.children.get(k) {
                        items.extend(self.contour(side, child)?);
                    }
                }
            }
        }
        items.push(Item::Piece(self.edge(family(1))?));
        Ok(items)
    }

    /// Direction subtrees of one side in counterclockwise order.
    fn side_blocks(
        &self,
        expansion: &Expansion,
        side: Side,
    ) -> Result<Vec<(Direction, Vec<Item>)>> {
        let Some(root) = &expansion.tree(side).root else {
            return Ok(Vec::new());
        };
        let mut blocks = Vec::new();
        match &root.kind {
            NodeKind::Split(split) if side.is_x() && split.height.is_one() => {
                for (c, child) in split.coefficients.iter().zip(&split.children) {
                    blocks.push((
                        Direction {
                            side,
                            slope: Some(c.clone()),
                        },
                        self.contour(side, child)?,
                    ));
                }
            }
            kind => {
                let slope = side.is_x().then(|| match kind {
                    NodeKind::Leaf { .. } => root.leaf_series(&int(1)).coefficient(&int(1)),
                    NodeKind::Split(_) => <Scalar as crate::exact::Coefficient>::zero(),
                });
                blocks.push((Direction { side, slope }, self.contour(side, root)?));
            }
        }
        if !side.increasing_is_ccw() {
            blocks.reverse();
            for (_, items) in blocks.iter_mut() {
                reverse_items(items);
            }
        }
        Ok(blocks)
    }

    /// A line strictly inside the gap of directions after `d`, counterclockwise.
    fn gap_arc(d: &Direction, next: &Direction, single: bool) -> Result<Arc> {
        match &d.slope {
            Some(c) => {
                let ccw_up = d.side.increasing_is_ccw();
                let r = match (&next.slope, single || next.side != d.side) {
                    (Some(n), false) if ccw_up => rational_between(c, n),
                    (Some(n), false) => rational_between(n, c),
                    _ if ccw_up => rational_above(c),
                    _ => rational_below(c),
                };
                line(d.side, r)
            }
            None => {
                let x_side = following_x_side(d.side);
                let r = match &next.slope {
                    Some(n) if !single && next.side == x_side => {
                        if x_side.increasing_is_ccw() {
                            rational_below(n)
                        } else {
                            rational_above(n)
                        }
                    }
                    _ => int(0),
                };
                line(x_side, r)
            }
        }
    }

    fn direction_zone(&self, arc: Arc) -> Result<Piece> {
        self.zone(arc, int(1), self.multiplicity.clone())
    }
}

/// Builds the pizza of `f` before merging: one slice per sweep piece.
pub fn build_pizza(f: &Polynomial2) -> Result<Pizza> {
    let sweep = Sweep {
        germ: f,
        multiplicity: int(i64::from(f.order().unwrap_or(0))),
    };
    let expansion = Expansion::new(f);
    let mut blocks = Vec::new();
    for side in Side::CIRCLE {
        blocks.extend(sweep.side_blocks(&expansion, side)?);
    }
    if blocks.is_empty() {
        let piece = sweep.direction_zone(line(Side::XPlus, int(0))?)?;
        let mut slice = slice_from(piece, None);
        slice.set_orientation();
        return Ok(Pizza {
            germ: f.clone(),
            slices: vec![slice],
        });
    }
    let single = blocks.len() == 1;
    let directions: Vec<Direction> = blocks.iter().map(|(d, _)| d.clone()).collect();
    let mut items = Vec::new();
    for (i, (d, block)) in blocks.into_iter().enumerate() {
        let next = &directions[(i + 1) % directions.len()];
        items.extend(block);
        items.push(Item::Piece(
            sweep.direction_zone(Sweep::gap_arc(&d, next, single)?)?,
        ));
    }
    Ok(Pizza {
        germ: f.clone(),
        slices: assemble(items),
    })
}

fn slice_from(piece: Piece, boundary: Option<(Boundary, Boundary)>) -> PizzaSlice {
    PizzaSlice {
        boundary,
        exponent: piece.exponent,
        orders: piece.orders,
        width_fn: piece.width_fn,
        orientation: Orientation::Balanced,
        sign: piece.sign,
        generators: vec![piece.generator],
    }
}

/// Turns the cyclic item sequence into slices with shared boundaries.
fn assemble(items: Vec<Item>) -> Vec<PizzaSlice> {
    let mut pieces: Vec<(Piece, Option<Arc>)> = Vec::new();
    for item in items {
        match item {
            Item::Piece(p) => pieces.push((p, None)),
            Item::Branch(arc) => pieces.last_mut().expect("a branch follows an edge").1 = Some(arc),
        }
    }
    let cuts: Vec<Boundary> = pieces
        .iter()
        .map(|(p, branch)| match branch {
            Some(arc) => Boundary {
                arc: Some(arc.clone()),
                nu: ExtendedRational::Infinity,
                branch: true,
            },
            None => Boundary {
                arc: None,
                nu: p.nu_last.clone(),
                branch: false,
            },
        })
        .collect();
    let n = pieces.len();
    pieces
        .into_iter()
        .enumerate()
        .map(|(i, (p, _))| {
            let left = cuts[(i + n - 1) % n].clone();
            let right = cuts[i].clone();
            let mut slice = slice_from(p, Some((left, right)));
            slice.set_orientation();
            slice
        })
        .collect()
}

/// One step of the merge procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MergeStep {
    /// Slices `i` and `i + 1` become one.
    Join(usize),
    /// A constant-order slice between two incompatible neighbours is split between them.
    Absorb(usize),
}

fn joinable(a: &PizzaSlice, b: &PizzaSlice) -> bool {
    if a.sign != b.sign || !a.right_removable() {
        return false;
    }
    match (a.is_point(), b.is_point()) {
        (false, false) => a.width_fn == b.width_fn,
        (true, true) => a.orders == b.orders && a.width_fn == b.width_fn,
        (true, false) => b.realizes(&a.orders.low, &a.width_fn.at(&a.orders.low)),
        (false, true) => a.realizes(&b.orders.low, &b.width_fn.at(&b.orders.low)),
    }
}

fn absorbable(slices: &[PizzaSlice], i: usize) -> bool {
    let n = slices.len();
    if n < 3 || !slices[i].is_point() {
        return false;
    }
    let (left, right) = (&slices[(i + n - 1) % n], &slices[(i + 1) % n]);
    !left.is_point()
        && !right.is_point()
        && left.width_fn != right.width_fn
        && joinable(left, &slices[i])
        && joinable(&slices[i], right)
}

fn available_steps(slices: &[PizzaSlice]) -> Vec<MergeStep> {
    let n = slices.len();
    if n < 2 {
        return Vec::new();
    }
    let mut steps = Vec::new();
    for i in 0..n {
        if absorbable(slices, i) {
            steps.push(MergeStep::Absorb(i));
        }
        let j = (i + 1) % n;
        let blocked = (slices[i].is_point() != slices[j].is_point())
            && ((slices[i].is_point() && absorbable(slices, i))
                || (slices[j].is_point() && absorbable(slices, j)));
        if !blocked && joinable(&slices[i], &slices[j]) {
            steps.push(MergeStep::Join(i));
        }
    }
    steps
}

fn join(a: PizzaSlice, b: PizzaSlice) -> PizzaSlice {
    let width_fn = if a.is_point() {
        b.width_fn.clone()
    } else {
        a.width_fn.clone()
    };
    let boundary = match (a.boundary, b.boundary) {
        (Some((l, _)), Some((_, r))) => Some((l, r)),
        _ => None,
    };
    let mut generators = a.generators;
    generators.extend(b.generators);
    let mut merged = PizzaSlice {
        boundary,
        exponent: a.exponent.min(b.exponent),
        orders: a.orders.hull(&b.orders),
        width_fn,
        orientation: Orientation::Balanced,
        sign: a.sign,
        generators,
    };
    merged.set_orientation();
    merged
}

fn apply(slices: &mut Vec<PizzaSlice>, step: MergeStep) {
    let n = slices.len();
    match step {
        MergeStep::Join(i) => {
            let j = (i + 1) % n;
            if j == 0 {
                let first = slices.remove(0);
                let last = slices.pop().expect("two slices");
                slices.push(join(last, first));
            } else {
                let b = slices.remove(j);
                let a = slices.remove(i);
                slices.insert(i, join(a, b));
            }
            if slices.len() == 1 {
                let whole = &mut slices[0];
                if whole.boundary.as_ref().is_some_and(|(l, _)| !l.branch) {
                    whole.boundary = None;
                    whole.set_orientation();
                }
            }
        }
        MergeStep::Absorb(i) => {
            let zone = slices.remove(i);
            let m = slices.len();
            let (l, r) = ((i + m - 1) % m, i % m);
            let cut = zone.boundary.as_ref().map(|(left, _)| left.clone());
            for k in [l, r] {
                let s = &mut slices[k];
                s.exponent = s.exponent.clone().min(zone.exponent.clone());
                s.orders = s.orders.hull(&zone.orders);
            }
            slices[l].generators.extend(zone.generators);
            if let Some(cut) = cut {
                if let Some((_, right)) = slices[l].boundary.as_mut() {
                    *right = cut.clone();
                }
                if let Some((left, _)) = slices[r].boundary.as_mut() {
                    *left = cut;
                }
            }
            slices[l].set_orientation();
            slices[r].set_orientation();
        }
    }
}

impl Pizza {
    pub fn data(&self) -> Vec<SliceDatum> {
        self.slices.iter().map(PizzaSlice::datum).collect()
    }

    /// Merges slices until no step applies, choosing steps with `choose`
    /// among the available ones, then rotates to the canonical start.
    pub fn canonicalize_with(&self, mut choose: impl FnMut(usize) -> usize) -> Pizza {
        let mut slices = self.slices.clone();
        loop {
            let steps = available_steps(&slices);
            if steps.is_empty() {
                break;
            }
            let k = choose(steps.len()) % steps.len();
            apply(&mut slices, steps[k]);
        }
        let start = least_rotation(&slices.iter().map(PizzaSlice::datum).collect::<Vec<_>>());
        slices.rotate_left(start);
        Pizza {
            germ: self.germ.clone(),
            slices,
        }
    }

    /// Minimal form: adjacent slices merged while their data continue one another.
    pub fn canonicalize(&self) -> Pizza {
        self.canonicalize_with(|_| 0)
    }

    /// Splits slice `index` in two identical halves at a generic cut.
    pub fn split_slice(&self, index: usize, cut: Option<Arc>) -> Pizza {
        let mut slices = self.slices.clone();
        let original = slices.remove(index);
        let nu = original.orders.low.clone();
        let middle = Boundary {
            arc: cut,
            nu,
            branch: false,
        };
        let mut first = original.clone();
        let mut second = original;
        match (&mut first.boundary, &mut second.boundary) {
            (Some((_, r)), Some((l, _))) => {
                *r = middle.clone();
                *l = middle;
            }
            _ => {
                first.boundary = Some((middle.clone(), middle.clone()));
                second.boundary = Some((middle.clone(), middle));
            }
        }
        second.generators.clear();
        first.set_orientation();
        second.set_orientation();
        slices.insert(index, second);
        slices.insert(index, first);
        Pizza {
            germ: self.germ.clone(),
            slices,
        }
    }

    /// Every real branch bounds exactly two slices.
    pub fn branch_boundaries(&self) -> usize {
        self.slices
            .iter()
            .filter(|s| s.boundary.as_ref().is_some_and(|(_, r)| r.branch))
            .count()
    }

    pub fn to_json(&self) -> String {
        let slices: Vec<Value> = self
            .slices
            .iter()
            .map(|s| {
                let mu = match &s.width_fn {
                    WidthFunction::Infinite => json!("inf"),
                    WidthFunction::Affine { slope, intercept } => {
                        json!({"a": fmt_rational(slope), "b": fmt_rational(intercept)})
                    }
                };
                json!({
                    "beta": fmt_rational(&s.exponent),
                    "Q": [s.orders.low.to_string(), s.orders.high.to_string()],
                    "mu": mu,
                    "sign": s.sign,
                })
            })
            .collect();
        let body: Vec<String> = slices.iter().map(slice_json).collect();
        format!(
            "{{\"germ\":{},\"slices\":[{}]}}",
            Value::String(self.germ.to_text()),
            body.join(",")
        )
    }

    pub fn from_json(text: &str) -> Result<Pizza> {
        let bad = |what: &str| Error::InvalidPizza(what.to_string());
        let doc: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let germ = doc
            .get("germ")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing germ"))?;
        let germ = parse_germ(germ)?;
        let raw = doc
            .get("slices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing slices"))?;
        let rational = |v: Option<&Value>, what: &str| {
            v.and_then(Value::as_str)
                .and_then(parse_rational)
                .ok_or_else(|| bad(what))
        };
        let extended = |v: Option<&Value>| {
            v.and_then(Value::as_str)
                .and_then(ExtendedRational::parse)
                .ok_or_else(|| bad("Q"))
        };
        let mut slices = Vec::new();
        for s in raw {
            let q = s
                .get("Q")
                .and_then(Value::as_array)
                .filter(|q| q.len() == 2)
                .ok_or_else(|| bad("Q"))?;
            let width_fn = match s.get("mu") {
                Some(Value::String(t)) if t == "inf" => WidthFunction::Infinite,
                Some(mu @ Value::Object(_)) => WidthFunction::Affine {
                    slope: rational(mu.get("a"), "mu.a")?,
                    intercept: rational(mu.get("b"), "mu.b")?,
                },
                _ => return Err(bad("mu")),
            };
            let sign = s
                .get("sign")
                .and_then(Value::as_i64)
                .filter(|v| (-1..=1).contains(v))
                .ok_or_else(|| bad("sign"))?;
            slices.push(PizzaSlice {
                boundary: None,
                exponent: rational(s.get("beta"), "beta")?,
                orders: OrderInterval {
                    low: extended(q.first())?,
                    high: extended(q.get(1))?,
                },
                width_fn,
                orientation: Orientation::Balanced,
                sign: sign as i8,
                generators: Vec::new(),
            });
        }
        Ok(Pizza { germ, slices })
    }
}

fn slice_json(v: &Value) -> String {
    format!(
        "{{\"beta\":{},\"Q\":{},\"mu\":{},\"sign\":{}}}",
        v["beta"], v["Q"], v["mu"], v["sign"]
    )
}

fn least_rotation(data: &[SliceDatum]) -> usize {
    let n = data.len();
    (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|k| data[(a + k) % n].cmp(&data[(b + k) % n]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .unwrap_or(0)
}

/// Searches rotations, then orientations (preserved first), then sign
/// changes (`+1` first) for a slice-by-slice match of the canonical forms.
pub fn pizzas_equivalent(first: &Pizza, second: &Pizza) -> Option<EquivalenceCertificate> {
    let a = first.canonicalize().data();
    let b = second.canonicalize().data();
    let n = a.len();
    if n != b.len() {
        return None;
    }
    for rotation in 0..n {
        for reversed in [false, true] {
            for sigma in [1i8, -1] {
                let target = |i: usize| {
                    if reversed {
                        (rotation + n - i) % n
                    } else {
                        (rotation + i) % n
                    }
                };
                let matches = (0..n).all(|i| {
                    let (x, y) = (&a[i], &b[target(i)]);
                    x.exponent == y.exponent
                        && x.orders == y.orders
                        && x.width_fn == y.width_fn
                        && x.sign * sigma == y.sign
                });
                if matches {
                    return Some(EquivalenceCertificate {
                        rotation,
                        reversed,
                        sigma,
                        matching: (0..n).map(|i| (i, target(i))).collect(),
                    });
                }
            }
        }
    }
    None
}

/// Evidence that two germs are not contact equivalent.
#[derive(Clone, Debug)]
pub enum Witness {
    /// An arc of germ `germ` (0 or 1) whose order and width pair is not
    /// realized by the other germ; `other_nu` is the other germ's order along the same arc.
    Arc {
        germ: usize,
        arc: Arc,
        nu: ExactRational,
        width: ExactRational,
        other_nu: ExtendedRational,
    },
    /// A slice datum occurring more often in germ `germ` than in the other.
    Slice { germ: usize, datum: SliceDatum },
    /// Same slices, arranged differently around the circle.
    Arrangement,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Equivalent(EquivalenceCertificate),
    NotEquivalent(Witness),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |g: &usize| if *g == 0 { "first" } else { "second" };
        match self {
            Witness::Arc {
                germ,
                arc,
                nu,
                width,
                other_nu,
            } => {
                let (ours, theirs) = if *germ == 0 {
                    (fmt_rational(nu), other_nu.to_string())
                } else {
                    (other_nu.to_string(), fmt_rational(nu))
                };
                write!(
                    f,
                    "arc {}: nu {} vs {} (width {} in the {} germ is not realized by the other)",
                    arc.to_text(),
                    ours,
                    theirs,
                    fmt_rational(width),
                    name(germ)
                )
            }
            Witness::Slice { germ, datum } => write!(
                f,
                "slice {datum} occurs more often in the {} germ",
                name(germ)
            ),
            Witness::Arrangement => f.write_str("same slices in a different cyclic arrangement"),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent(c) => write!(f, "EQUIVALENT\n{c}"),
            Verdict::NotEquivalent(w) => write!(f, "NOT_EQUIVALENT\n{w}"),
        }
    }
}

fn realized(pizza: &Pizza, q: &ExactRational, w: &ExactRational) -> bool {
    let (q, w) = (
        ExtendedRational::Finite(q.clone()),
        ExtendedRational::Finite(w.clone()),
    );
    pizza.slices.iter().any(|s| s.realizes(&q, &w))
}

/// Realized pairs of `own` checked against `other`, vertex points first.
fn arc_witness(
    own: &Pizza,
    other: &Pizza,
    candidates: &[ExactRational],
) -> Result<Option<(Arc, ExactRational, ExactRational)>> {
    let generators: Vec<&Generator> = own.slices.iter().flat_map(|s| &s.generators).collect();
    for g in &generators {
        if let Generator::Point { arc, nu, width } = g {
            if !realized(other, nu, width) {
                return Ok(Some((arc.clone(), nu.clone(), width.clone())));
            }
        }
    }
    for g in &generators {
        if let Generator::Edge(family) = g {
            for q in candidates {
                let Some(h) = family.height_for(q) else {
                    continue;
                };
                if !realized(other, q, &h) {
                    return Ok(Some((family.arc_at(&h)?, q.clone(), h)));
                }
            }
        }
    }
    Ok(None)
}

fn witness_candidates(a: &Pizza, b: &Pizza) -> Vec<ExactRational> {
    let mut values: Vec<ExactRational> = a
        .slices
        .iter()
        .chain(&b.slices)
        .flat_map(|s| [s.orders.low.clone(), s.orders.high.clone()])
        .filter_map(ExtendedRational::into_finite)
        .collect();
    values.sort();
    values.dedup();
    let mut out = values.clone();
    out.extend(values.windows(2).map(|w| (&w[0] + &w[1]) / int(2)));
    if let Some(top) = values.last() {
        out.push(top + int(1));
    }
    out.sort();
    out.dedup();
    out
}

/// Decides contact equivalence of two germs by comparing their canonical pizzas.
pub fn decide_contact_equivalence(f: &Polynomial2, g: &Polynomial2) -> Result<Verdict> {
    let a = build_pizza(f)?.canonicalize();
    let b = build_pizza(g)?.canonicalize();
    if let Some(certificate) = pizzas_equivalent(&a, &b) {
        return Ok(Verdict::Equivalent(certificate));
    }
    let candidates = witness_candidates(&a, &b);
    let germs = [f, g];
    for (index, (own, other)) in [(&a, &b), (&b, &a)].into_iter().enumerate() {
        if let Some((arc, nu, width)) = arc_witness(own, other, &candidates)? {
            let other_nu = order_along_arc(germs[1 - index], &arc)?;
            return Ok(Verdict::NotEquivalent(Witness::Arc {
                germ: index,
                arc,
                nu,
                width,
                other_nu,
            }));
        }
    }
    let (mut da, mut db) = (a.data(), b.data());
    da.sort();
    db.sort();
    let count = |v: &[SliceDatum], d: &SliceDatum| v.iter().filter(|x| *x == d).count();
    let mut all: Vec<&SliceDatum> = da.iter().chain(&db).collect();
    all.sort();
    for d in all {
        let (ca, cb) = (count(&da, d), count(&db, d));
        if ca != cb {
            let germ = if ca > cb { 0 } else { 1 };
            return Ok(Verdict::NotEquivalent(Witness::Slice {
                germ,
                datum: d.clone(),
            }));
        }
    }
    Ok(Verdict::NotEquivalent(Witness::Arrangement))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::parse::parse_germ;

    fn pizza(text: &str) -> Pizza {
        build_pizza(&parse_germ(text).unwrap())
            .unwrap()
            .canonicalize()
    }

    fn q(p: i64, d: i64) -> ExtendedRational {
        ExtendedRational::Finite(rat(p, d))
    }

    fn affine(a: ExactRational, b: ExactRational) -> WidthFunction {
        WidthFunction::Affine {
            slope: a,
            intercept: b,
        }
    }

    #[test]
    fn circle_is_one_slice() {
        let p = pizza("x^2 + y^2");
        assert_eq!(p.slices.len(), 1);
        let s = &p.slices[0];
        assert!(s.boundary.is_none());
        assert_eq!(s.exponent, int(1));
        assert_eq!(s.orders, OrderInterval::point(q(2, 1)));
        assert_eq!(s.width_fn, WidthFunction::constant(int(1)));
        assert_eq!(s.sign, 1);
    }

    #[test]
    fn cross_has_four_quadrants() {
        let p = pizza("x*y");
        assert_eq!(p.slices.len(), 4);
        for s in &p.slices {
            assert_eq!(s.exponent, int(1));
            assert_eq!(
                s.orders,
                OrderInterval {
                    low: q(2, 1),
                    high: ExtendedRational::Infinity
                }
            );
            assert_eq!(s.width_fn, affine(int(1), int(-1)));
        }
        let signs: Vec<i8> = p.slices.iter().map(|s| s.sign).collect();
        assert!(signs.windows(2).all(|w| w[0] == -w[1]));
        assert_eq!(p.branch_boundaries(), 4);
    }

    #[test]
    fn cusp_slices() {
        let p = pizza("y^2 - x^3");
        assert_eq!(p.branch_boundaries(), 2);
        let at_branch: Vec<&PizzaSlice> = p
            .slices
            .iter()
            .filter(|s| s.orders.high.is_infinite())
            .collect();
        assert!(!at_branch.is_empty());
        for s in at_branch {
            assert_eq!(s.orders.low, q(3, 1));
            assert_eq!(s.width_fn.at(&q(3, 1)), q(3, 2));
        }
        assert!(p.slices.iter().any(|s| s.orders.low == q(2, 1)));
    }

    #[test]
    fn canonical_form_is_stable() {
        for text in [
            "x*y",
            "y^2 - x^3",
            "x^2 + y^4",
            "x*(y^2 - x^3)",
            "(y^2 - x^3)*(y - x^2)",
        ] {
            let raw = build_pizza(&parse_germ(text).unwrap()).unwrap();
            let once = raw.canonicalize();
            assert_eq!(once.canonicalize().data(), once.data(), "{text}");
            let mut seed = 7u64;
            for _ in 0..5 {
                let other = raw.canonicalize_with(|n| {
                    seed = seed
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    (seed >> 33) as usize % n
                });
                assert_eq!(other.data(), once.data(), "{text}");
            }
            let json = once.to_json();
            assert_eq!(Pizza::from_json(&json).unwrap().to_json(), json);
        }
    }

    #[test]
    fn split_quadrant_merges_back() {
        let p = pizza("x*y");
        let split = p.split_slice(1, None);
        assert_eq!(split.slices.len(), 5);
        assert_eq!(split.canonicalize().data(), p.data());
    }

    #[test]
    fn verdicts() {
        let decide = |a: &str, b: &str| {
            decide_contact_equivalence(&parse_germ(a).unwrap(), &parse_germ(b).unwrap()).unwrap()
        };
        assert!(decide("x^2 + y^2", "x^2 + 2*y^2").is_equivalent());
        assert!(decide("x*y", "x^2 - y^2").is_equivalent());
        assert!(!decide("y^2 - x^3", "y^2 - x^5").is_equivalent());
        match decide("x^2 + y^2", "x^2 + y^4") {
            Verdict::NotEquivalent(Witness::Arc {
                arc,
                nu,
                other_nu,
                germ,
                ..
            }) => {
                assert_eq!(germ, 1);
                assert_eq!(arc.to_text(), "x = 0 [y>0]");
                assert_eq!(nu, int(4));
                assert_eq!(other_nu, q(2, 1));
            }
            other => panic!("unexpected verdict {other}"),
        }
        match decide("y^2 - x^3", "x^3 - y^2") {
            Verdict::Equivalent(c) => assert_eq!(c.sigma, -1),
            other => panic!("unexpected verdict {other}"),
        }
    }

    #[test]
    fn json_shape() {
        let json = pizza("x*y").to_json();
        assert!(json.starts_with("{\"germ\":\"x*y\",\"slices\":[{\"beta\":\"1\",\"Q\":[\"2\",\"inf\"],\"mu\":{\"a\":\"1\",\"b\":\"-1\"},\"sign\":-1}"));
    }
}
