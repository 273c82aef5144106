//! Embedded resolution by point blowups, Hsiang–Pati data and arc landings.
//!
//! Every chart is a point of the blown-up plane with local coordinates
//! `(u, v)` centred at it. The map to the original plane and the pulled-back
//! germ are exact polynomials in `(u, v)`. Exceptional components through
//! the point are coordinate axes, listed in `divisors` with `{u = 0}` first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc as Shared;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{
    int, real_roots, Coefficient, ExactRational, ExtendedRational, NumberField, Poly2, Polynomial2,
    PuiseuxSeries, RealCoefficient, Scalar, UPoly,
};
use crate::puiseux::{arc_from_parametrization, contact_order_puiseux, Arc, Expansion};

/// Polynomial in the local chart coordinates.
pub type ChartPoly = Poly2<Scalar>;

/// Largest number of blowups `resolve` performs.
pub const DEFAULT_BLOWUP_BUDGET: usize = 256;

/// An exceptional curve with its Hsiang–Pati exponents `(l, m)`, Jacobian
/// order `lbar` and germ order `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorComponent {
    pub id: usize,
    pub l: u32,
    pub lbar: u32,
    pub m: u32,
    pub r: u32,
    pub creation_step: usize,
    /// Chart whose origin was blown up to create the component.
    pub center: usize,
}

/// Where a chart sits relative to its parent blowup.
#[derive(Clone, Debug)]
pub enum ChartOrigin {
    Base,
    /// Point `v = coordinate` of the first blowup chart, `(u, v) -> (u, u v)`.
    Affine {
        parent: usize,
        coordinate: Scalar,
    },
    /// Origin of the second blowup chart, `(u, v) -> (u v, v)`.
    Vertical {
        parent: usize,
        swapped: bool,
    },
}

#[derive(Clone, Debug)]
pub enum ChartState {
    Open,
    Blown {
        component: usize,
        affine: Vec<(Scalar, usize)>,
        vertical: Option<usize>,
    },
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub id: usize,
    pub origin: ChartOrigin,
    pub field: Option<Shared<NumberField>>,
    /// `(x(u, v), y(u, v))`.
    pub to_base: (ChartPoly, ChartPoly),
    pub divisors: [Option<usize>; 2],
    /// Exponents of `u` and `v` in the pulled-back germ.
    pub exponents: [u32; 2],
    /// Pulled-back germ divided by `u^a v^b`.
    pub strict: ChartPoly,
    /// Same for the square-free part of the germ.
    pub strict_reduced: ChartPoly,
    pub state: ChartState,
}

impl Chart {
    pub fn on_strict_transform(&self) -> bool {
        self.strict_reduced.coeff(0, 0).is_zero()
    }

    pub fn is_corner(&self) -> bool {
        self.divisors.iter().all(Option::is_some)
    }

    fn needs_blowup(&self) -> bool {
        if self.divisors[0].is_none() {
            return true;
        }
        if !self.on_strict_transform() {
            return false;
        }
        if self.is_corner() || self.strict_reduced.order() != Some(1) {
            return true;
        }
        // Smooth strict transform: transversal to {u = 0} iff it involves v linearly.
        self.strict_reduced.coeff(0, 1).is_zero()
    }
}

/// A real branch of the strict transform meeting the divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictBranch {
    pub id: usize,
    pub chart: usize,
    pub component: usize,
}

/// The blown-up plane with all charts and components.
#[derive(Clone, Debug)]
pub struct ResolutionTree {
    pub germ: Polynomial2,
    pub charts: Vec<Chart>,
    pub components: Vec<DivisorComponent>,
    pub branches: Vec<StrictBranch>,
    /// Charts blown up, in order.
    pub blowup_log: Vec<usize>,
}

/// One step of a point blowup seen from a curve through the centre.
#[derive(Clone, Debug)]
enum Move {
    Affine(Scalar),
    Vertical,
}

fn to_chart(p: &Polynomial2) -> ChartPoly {
    p.map(|c| Scalar::Rat(c.clone()))
}

/// Total transform of `p` under the move, with the factor of the new divisor removed
/// when `strip` is set, followed by the translation and the swap.
fn transform(p: &ChartPoly, mv: &Move, swap: bool, strip: bool) -> ChartPoly {
    match mv {
        Move::Affine(c) => {
            let q = p.monomial_substitution(1, 0, 1, 1);
            let q = if strip {
                q.shift_down(q.x_valuation().unwrap_or(0), 0)
            } else {
                q
            };
            if c.is_zero() {
                q
            } else {
                q.translate_y(c)
            }
        }
        Move::Vertical => {
            let q = p.monomial_substitution(1, 1, 0, 1);
            let q = if strip {
                q.shift_down(0, q.y_valuation().unwrap_or(0))
            } else {
                q
            };
            if swap {
                q.swap_xy()
            } else {
                q
            }
        }
    }
}

fn lift_poly(p: &ChartPoly, emb: &crate::exact::Embedding) -> ChartPoly {
    if emb.is_identity() {
        p.clone()
    } else {
        p.map(|c| emb.lift(c))
    }
}

impl ResolutionTree {
    /// The unblown plane: one chart with coordinates `(x, y)`.
    pub fn new(germ: &Polynomial2) -> Self {
        let base = Chart {
            id: 0,
            origin: ChartOrigin::Base,
            field: None,
            to_base: (Poly2::x(), Poly2::y()),
            divisors: [None, None],
            exponents: [0, 0],
            strict: to_chart(germ),
            strict_reduced: to_chart(&germ.squarefree_part()),
            state: ChartState::Open,
        };
        ResolutionTree {
            germ: germ.clone(),
            charts: vec![base],
            components: Vec::new(),
            branches: Vec::new(),
            blowup_log: Vec::new(),
        }
    }

    pub fn component(&self, id: usize) -> &DivisorComponent {
        &self.components[id - 1]
    }

    pub fn chart(&self, id: usize) -> &Chart {
        &self.charts[id]
    }

    /// Blows up the origin of an open chart and records the special points of
    /// the new component as child charts; returns the new component id.
    pub fn blow_up_point(&mut self, chart: usize) -> Result<usize> {
        let point = self
            .charts
            .get(chart)
            .ok_or(Error::CenterOutsideDomain)?
            .clone();
        if !matches!(point.state, ChartState::Open) {
            return Err(Error::CenterOutsideDomain);
        }
        let through: Vec<&DivisorComponent> = point
            .divisors
            .iter()
            .flatten()
            .map(|&d| self.component(d))
            .collect();
        let l = if through.is_empty() {
            1
        } else {
            through.iter().map(|d| d.l).sum()
        };
        let lbar = through.iter().map(|d| d.lbar).sum::<u32>() + 1;
        let strict_order = point.strict.order().unwrap_or(0);
        let r = point.exponents.iter().sum::<u32>() + strict_order;
        let id = self.components.len() + 1;
        self.components.push(DivisorComponent {
            id,
            l,
            lbar,
            m: lbar + 1 - l,
            r,
            creation_step: self.blowup_log.len() + 1,
            center: chart,
        });
        self.blowup_log.push(chart);

        let child = |tree: &mut Self,
                     mv: Move,
                     swap: bool,
                     divisors: [Option<usize>; 2],
                     exponents: [u32; 2],
                     field,
                     emb: &crate::exact::Embedding| {
            let t = |p: &ChartPoly, strip: bool| transform(&lift_poly(p, emb), &mv, swap, strip);
            let origin = match &mv {
                Move::Affine(c) => ChartOrigin::Affine {
                    parent: chart,
                    coordinate: c.clone(),
                },
                Move::Vertical => ChartOrigin::Vertical {
                    parent: chart,
                    swapped: swap,
                },
            };
            let new_id = tree.charts.len();
            tree.charts.push(Chart {
                id: new_id,
                origin,
                field,
                to_base: (t(&point.to_base.0, false), t(&point.to_base.1, false)),
                divisors,
                exponents,
                strict: {
                    let strict = t(&point.strict, true);
                    match &mv {
                        // The old monomial factor v^b becomes the unit (v + c)^b.
                        Move::Affine(c) if !c.is_zero() && point.exponents[1] > 0 => {
                            let shifted = Poly2::y().plus(&Poly2::constant(c.clone()));
                            strict.times(&shifted.pow(point.exponents[1]))
                        }
                        _ => strict,
                    }
                },
                strict_reduced: t(&point.strict_reduced, true),
                state: ChartState::Open,
            });
            new_id
        };

        // Affine chart: special points are the real zeros of the strict transform on the
        // new divisor, plus the corner with the old {v = 0}.
        let affine_red = transform(
            &point.strict_reduced,
            &Move::Affine(Scalar::zero()),
            false,
            true,
        );
        let on_divisor: UPoly<Scalar> = affine_red.at_x_zero();
        let mut roots = if on_divisor.degree().is_some_and(|d| d > 0) {
            real_roots(&on_divisor, &point.field)
        } else {
            Vec::new()
        };
        if point.divisors[1].is_some() && !roots.iter().any(|r| r.value.is_zero()) {
            roots.push(crate::exact::AdjoinedRoot {
                value: Scalar::zero(),
                embedding: crate::exact::Embedding::identity(point.field.clone()),
            });
            roots.sort_by(|a, b| a.value.cmp_value(&b.value));
        }
        let mut affine = Vec::new();
        for root in roots {
            let corner = root.value.is_zero() && point.divisors[1].is_some();
            let divisors = [Some(id), if corner { point.divisors[1] } else { None }];
            let exponents = [r, if corner { point.exponents[1] } else { 0 }];
            let c = root.value.clone();
            let new_id = child(
                self,
                Move::Affine(c.clone()),
                false,
                divisors,
                exponents,
                root.field(),
                &root.embedding,
            );
            affine.push((c, new_id));
        }
        let vertical_red = transform(&point.strict_reduced, &Move::Vertical, false, true);
        let vertical = if point.divisors[0].is_some() || vertical_red.coeff(0, 0).is_zero() {
            let swap = point.divisors[0].is_none();
            let (divisors, exponents) = if swap {
                ([Some(id), None], [r, 0])
            } else {
                ([point.divisors[0], Some(id)], [point.exponents[0], r])
            };
            let identity = crate::exact::Embedding::identity(point.field.clone());
            Some(child(
                self,
                Move::Vertical,
                swap,
                divisors,
                exponents,
                point.field.clone(),
                &identity,
            ))
        } else {
            None
        };
        self.charts[chart].state = ChartState::Blown {
            component: id,
            affine,
            vertical,
        };
        Ok(id)
    }

    fn children(&self, chart: usize) -> Vec<usize> {
        match &self.charts[chart].state {
            ChartState::Open => Vec::new(),
            ChartState::Blown {
                affine, vertical, ..
            } => affine
                .iter()
                .map(|(_, c)| *c)
                .chain(vertical.iter().copied())
                .collect(),
        }
    }

    /// Open charts in depth-first order.
    pub fn terminal_charts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(c) = stack.pop() {
            let kids = self.children(c);
            if kids.is_empty() {
                if c != 0 {
                    out.push(c);
                }
            } else {
                stack.extend(kids.into_iter().rev());
            }
        }
        out
    }

    /// Component adjacencies (corners) and branch incidences.
    pub fn dual_graph(&self) -> (BTreeSet<(usize, usize)>, Vec<(usize, usize)>) {
        let mut edges = BTreeSet::new();
        for c in self.terminal_charts() {
            let chart = &self.charts[c];
            if let [Some(a), Some(b)] = chart.divisors {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let incidences = self.branches.iter().map(|b| (b.component, b.id)).collect();
        (edges, incidences)
    }

    fn neighbours(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> =
            self.components.iter().map(|c| (c.id, Vec::new())).collect();
        for (a, b) in self.dual_graph().0 {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }

    /// Components on the dual-graph path between two components, inclusive.
    pub fn chain(&self, from: usize, to: usize) -> Vec<usize> {
        let adj = self.neighbours();
        let mut previous: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([from]);
        previous.insert(from, from);
        while let Some(n) = queue.pop_front() {
            if n == to {
                break;
            }
            for &k in adj.get(&n).into_iter().flatten() {
                if let std::collections::btree_map::Entry::Vacant(e) = previous.entry(k) {
                    e.insert(n);
                    queue.push_back(k);
                }
            }
        }
        let mut path = vec![to];
        let mut at = to;
        while at != from {
            at = *previous.get(&at).expect("dual graph is connected");
            path.push(at);
        }
        path.reverse();
        path
    }

    /// Dual graph in DOT format.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph resolution {\n");
        for c in &self.components {
            let _ = writeln!(
                out,
                "  E{} [label=\"E{} l={} m={} r={}\"];",
                c.id, c.id, c.l, c.m, c.r
            );
        }
        for b in &self.branches {
            let _ = writeln!(out, "  B{} [label=\"B{}\"];", b.id, b.id);
        }
        let (edges, incidences) = self.dual_graph();
        for (a, b) in edges {
            let _ = writeln!(out, "  E{a} -- E{b};");
        }
        for (e, b) in incidences {
            let _ = writeln!(out, "  E{e} -- B{b};");
        }
        out.push_str("}\n");
        out
    }

    /// Unit certification: in every open chart the pulled-back germ equals
    /// `u^a v^b` times the stored strict transform, which is a unit off the
    /// strict transform and a power of a smooth transversal curve on it.
    pub fn certify(&self) -> Result<()> {
        let f = to_chart(&self.germ);
        for c in self.terminal_charts() {
            let chart = &self.charts[c];
            let pulled = f.compose(&chart.to_base.0, &chart.to_base.1);
            let [a, b] = chart.exponents;
            let expected = chart.strict.times(&Poly2::monomial(Scalar::one(), a, b));
            let component = chart.divisors[0].unwrap_or(0);
            if pulled != expected {
                return Err(Error::NormalFormMismatch {
                    component,
                    detail: format!(
                        "pullback in chart {c} is not monomial times the strict transform"
                    ),
                });
            }
            for (axis, d) in chart.divisors.iter().enumerate() {
                if let Some(d) = d {
                    if self.component(*d).r != chart.exponents[axis] {
                        return Err(Error::NormalFormMismatch {
                            component: *d,
                            detail: format!("germ order differs in chart {c}"),
                        });
                    }
                }
            }
            if chart.on_strict_transform() {
                let s = chart.strict.order().unwrap_or(0);
                let lead = chart.strict.homogeneous_part(s);
                let linear = chart.strict_reduced.homogeneous_part(1);
                if chart.is_corner()
                    || linear.coeff(0, 1).is_zero()
                    || lead != linear.pow(s).scale(&lead_ratio(&lead, &linear.pow(s)))
                {
                    return Err(Error::NormalFormMismatch {
                        component,
                        detail: format!("strict transform is not normal crossing in chart {c}"),
                    });
                }
            }
        }
        Ok(())
    }
}

fn lead_ratio(a: &ChartPoly, b: &ChartPoly) -> Scalar {
    let key = b.terms().next().map(|(k, _)| *k).expect("nonzero");
    a.coeff(key.0, key.1)
        .times(&b.coeff(key.0, key.1).inverse())
}

/// Blows up until the germ's zero set and the divisor are simple normal crossing.
pub fn resolve_with_budget(f: &Polynomial2, budget: usize) -> Result<ResolutionTree> {
    let mut tree = ResolutionTree::new(f);
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        if !tree.charts[c].needs_blowup() {
            continue;
        }
        if tree.blowup_log.len() >= budget {
            return Err(Error::ResolutionBudgetExceeded(budget));
        }
        tree.blow_up_point(c)?;
        stack.extend(tree.children(c).into_iter().rev());
    }
    let branches: Vec<StrictBranch> = tree
        .terminal_charts()
        .into_iter()
        .filter(|&c| tree.charts[c].on_strict_transform())
        .enumerate()
        .map(|(k, c)| StrictBranch {
            id: k + 1,
            chart: c,
            component: tree.charts[c].divisors[0].expect("on the divisor"),
        })
        .collect();
    tree.branches = branches;
    Ok(tree)
}

/// Minimal resolution plus the landings of the germ's real half-branches.
pub fn resolve(f: &Polynomial2) -> Result<(ResolutionTree, Vec<Landing>)> {
    let tree = resolve_with_budget(f, DEFAULT_BLOWUP_BUDGET)?;
    let landings = Expansion::new(f)
        .real_arcs()
        .iter()
        .map(|a| land_arc(&tree, a))
        .collect::<Result<Vec<_>>>()?;
    Ok((tree, landings))
}

/// `(l, m, lbar)` of one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HsiangPati {
    pub l: u32,
    pub m: u32,
    pub lbar: u32,
}

/// Hsiang–Pati data of every component, cross-checked against the chart maps.
///
/// At two sampled points of the component, `l` is the order of the pulled-back
/// maximal ideal and `m / l` the contact of the two curvettes; the Jacobian
/// order gives `lbar` directly.
pub fn hsiang_pati_data(tree: &ResolutionTree) -> Result<BTreeMap<usize, HsiangPati>> {
    let mut out = BTreeMap::new();
    for comp in &tree.components {
        let center = &tree.charts[comp.center];
        let emb = crate::exact::Embedding::identity(center.field.clone());
        let t = |p: &ChartPoly| {
            transform(
                &lift_poly(p, &emb),
                &Move::Affine(Scalar::zero()),
                false,
                false,
            )
        };
        let (x, y) = (t(&center.to_base.0), t(&center.to_base.1));
        let mismatch = |detail: String| Error::NormalFormMismatch {
            component: comp.id,
            detail,
        };
        let jacobian = x
            .partial_x()
            .times(&y.partial_y())
            .minus(&x.partial_y().times(&y.partial_x()));
        let lbar = jacobian
            .x_valuation()
            .ok_or_else(|| mismatch("degenerate Jacobian".into()))?;
        let strict_on_divisor = transform(
            &center.strict_reduced,
            &Move::Affine(Scalar::zero()),
            false,
            true,
        )
        .at_x_zero();
        let samples: Vec<Scalar> = (1i64..)
            .map(Scalar::from_int)
            .filter(|v| strict_on_divisor.eval(v).is_zero().not_then())
            .take(2)
            .collect();
        let curvette = |v: &Scalar| -> (UPoly<Scalar>, UPoly<Scalar>) {
            let at = |p: &ChartPoly| p.translate_y(v).at_y_zero();
            (at(&x), at(&y))
        };
        let (c0, c1) = (curvette(&samples[0]), curvette(&samples[1]));
        let low = |p: &UPoly<Scalar>| {
            p.coeffs()
                .iter()
                .position(|c| !c.is_zero())
                .unwrap_or(usize::MAX)
        };
        let l = low(&c0.0).min(low(&c0.1)) as u32;
        let precision = int(i64::from(lbar) + 2);
        let a0 = arc_from_parametrization(&c0.0, &c0.1, &precision)?;
        let a1 = arc_from_parametrization(&c1.0, &c1.1, &precision)?;
        let contact = contact_order_puiseux(&a0, &a1)?.0;
        let m = match contact.as_finite() {
            Some(q) => q * BigRational::from_integer(l.into()),
            None => return Err(mismatch("curvettes coincide".into())),
        };
        if !m.is_integer() {
            return Err(mismatch(format!("curvette contact {contact} is not m/l")));
        }
        let m_check: u32 = m
            .to_integer()
            .try_into()
            .map_err(|_| mismatch("m out of range".into()))?;
        if l != comp.l || lbar != comp.lbar || m_check != comp.m || comp.lbar + 1 != comp.l + comp.m
        {
            return Err(mismatch(format!(
                "bookkeeping (l, m, lbar) = ({}, {}, {}), chart data ({l}, {m_check}, {lbar})",
                comp.l, comp.m, comp.lbar
            )));
        }
        out.insert(
            comp.id,
            HsiangPati {
                l: comp.l,
                m: comp.m,
                lbar: comp.lbar,
            },
        );
    }
    Ok(out)
}

trait NotThen {
    fn not_then(self) -> bool;
}

impl NotThen for bool {
    fn not_then(self) -> bool {
        !self
    }
}

/// Local picture of an arc at a point: the point's chart data and the arc's
/// local coordinates `(u(s), v(s))`.
#[derive(Clone, Debug)]
pub struct LocalArc {
    pub u: PuiseuxSeries,
    pub v: PuiseuxSeries,
}

/// Where the strict transform of an arc meets the divisor.
#[derive(Clone, Debug)]
pub enum LandingPosition {
    /// A point of one component away from the strict transform of the germ.
    Regular {
        component: usize,
        chart: Option<usize>,
    },
    /// A point where the strict transform of the germ crosses one component.
    Mixed {
        component: usize,
        chart: usize,
        branch: usize,
    },
    /// The intersection of two components, `first < second`.
    Corner {
        chart: usize,
        first: usize,
        second: usize,
    },
}

/// Landing of an arc: position, the exponent `p` of the second local
/// coordinate against the first, and the local series there.
#[derive(Clone, Debug)]
pub struct Landing {
    pub arc: Arc,
    pub position: LandingPosition,
    pub parameter: ExtendedRational,
    /// Charts visited from the base, with the move taken out of each.
    pub path: Vec<usize>,
    pub local: LocalArc,
    /// Chart map at the landing point.
    pub to_base: (ChartPoly, ChartPoly),
    /// Components on `{u = 0}` and `{v = 0}` at the landing point.
    pub divisors: [Option<usize>; 2],
}

/// Relative precision used for arc tracking, doubled on demand.
const START_PRECISION: i64 = 6;

fn order_of(s: &PuiseuxSeries) -> Result<ExtendedRational> {
    s.order().map_err(|_| Error::TruncationTooShort {
        reached: s.truncation().to_string(),
    })
}

/// Applies one blowup to local arc coordinates.
fn step(local: &LocalArc, precision: &ExactRational) -> Result<(Move, LocalArc)> {
    let ou = order_of(&local.u)?;
    let ov = order_of(&local.v)?;
    if ov >= ou {
        let q = local.v.times(&local.u.inverse(precision)?);
        if q.truncation() <= &ExtendedRational::from_int(0) {
            return Err(Error::TruncationTooShort {
                reached: q.truncation().to_string(),
            });
        }
        let c = q.coefficient(&int(0));
        let rest = q.minus(&PuiseuxSeries::constant(c.clone()));
        Ok((
            Move::Affine(c),
            LocalArc {
                u: local.u.clone(),
                v: rest,
            },
        ))
    } else {
        let q = local.u.times(&local.v.inverse(precision)?);
        Ok((
            Move::Vertical,
            LocalArc {
                u: q,
                v: local.v.clone(),
            },
        ))
    }
}

fn swap_local(local: LocalArc) -> LocalArc {
    LocalArc {
        u: local.v,
        v: local.u,
    }
}

/// Evaluates a chart polynomial along local series.
pub fn eval_along(p: &ChartPoly, local: &LocalArc) -> PuiseuxSeries {
    let dx = p.degree_x().unwrap_or(0) as usize;
    let dy = p.degree_y().unwrap_or(0) as usize;
    let powers = |s: &PuiseuxSeries, n: usize| {
        let mut out = vec![PuiseuxSeries::one()];
        for k in 1..=n {
            let next = out[k - 1].times(s);
            out.push(next);
        }
        out
    };
    let (up, vp) = (powers(&local.u, dx), powers(&local.v, dy));
    p.terms().fold(PuiseuxSeries::zero(), |acc, (&(i, j), c)| {
        acc.plus(&up[i as usize].times(&vp[j as usize]).scale(c))
    })
}

fn base_local(arc: &Arc, precision: &ExactRational) -> LocalArc {
    let bound = precision + int(2);
    let (u, v) = arc.coordinates(&bound);
    LocalArc { u, v }
}

fn series_equal(a: &PuiseuxSeries, b: &PuiseuxSeries) -> bool {
    a.is_exact() && b.is_exact() && a == b
}

/// Follows the strict transform of an arc through the tree.
pub fn land_arc(tree: &ResolutionTree, arc: &Arc) -> Result<Landing> {
    let cap = crate::exact::truncation_cap();
    let mut precision = int(START_PRECISION);
    loop {
        match land_with(tree, arc, &precision) {
            Err(Error::TruncationTooShort { reached }) => {
                if precision > cap {
                    return Err(Error::TruncationTooShort { reached });
                }
                precision *= int(2);
            }
            other => return other,
        }
    }
}

fn land_with(tree: &ResolutionTree, arc: &Arc, precision: &ExactRational) -> Result<Landing> {
    let mut local = base_local(arc, precision);
    let mut at = 0usize;
    let mut path = vec![0usize];
    loop {
        let chart = &tree.charts[at];
        let ChartState::Blown {
            component,
            affine,
            vertical,
        } = &chart.state
        else {
            return finish_at_chart(tree, arc, at, local, path);
        };
        let (mv, next) = step(&local, precision)?;
        let target = match &mv {
            Move::Affine(c) => affine.iter().find(|(k, _)| k == c).map(|(_, id)| *id),
            Move::Vertical => *vertical,
        };
        match target {
            Some(id) => {
                let swapped = matches!(
                    tree.charts[id].origin,
                    ChartOrigin::Vertical { swapped: true, .. }
                );
                local = if swapped { swap_local(next) } else { next };
                at = id;
                path.push(id);
            }
            None => {
                // A generic point of the new component.
                let swap = matches!(mv, Move::Vertical) && chart.divisors[0].is_none();
                let local = if swap { swap_local(next) } else { next };
                let to_base = (
                    transform(&chart.to_base.0, &mv, swap, false),
                    transform(&chart.to_base.1, &mv, swap, false),
                );
                let ov = order_of(&local.v)?;
                let ou = order_of(&local.u)?;
                return Ok(Landing {
                    arc: arc.clone(),
                    position: LandingPosition::Regular {
                        component: *component,
                        chart: None,
                    },
                    parameter: ratio(&ov, &ou),
                    path,
                    local,
                    to_base,
                    divisors: [Some(*component), None],
                });
            }
        }
    }
}

fn ratio(a: &ExtendedRational, b: &ExtendedRational) -> ExtendedRational {
    match (a, b) {
        (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => {
            ExtendedRational::Finite(a / b)
        }
        _ => ExtendedRational::Infinity,
    }
}

fn finish_at_chart(
    tree: &ResolutionTree,
    arc: &Arc,
    at: usize,
    local: LocalArc,
    path: Vec<usize>,
) -> Result<Landing> {
    let chart = &tree.charts[at];
    let ou = order_of(&local.u)?;
    let (position, parameter) = match chart.divisors {
        [Some(a), Some(b)] => {
            let ov = order_of(&local.v)?;
            let p = if a < b {
                ratio(&ov, &ou)
            } else {
                ratio(&ou, &ov)
            };
            (
                LandingPosition::Corner {
                    chart: at,
                    first: a.min(b),
                    second: a.max(b),
                },
                p,
            )
        }
        [Some(e), None] if chart.on_strict_transform() => {
            let branch = tree
                .branches
                .iter()
                .find(|b| b.chart == at)
                .map(|b| b.id)
                .unwrap_or(0);
            let p = if arc.is_branch() {
                ExtendedRational::Infinity
            } else {
                let along = eval_along(&chart.strict_reduced, &local);
                ratio(&order_of(&along)?, &ou)
            };
            (
                LandingPosition::Mixed {
                    component: e,
                    chart: at,
                    branch,
                },
                p,
            )
        }
        [Some(e), None] => {
            let ov = order_of(&local.v)?;
            (
                LandingPosition::Regular {
                    component: e,
                    chart: Some(at),
                },
                ratio(&ov, &ou),
            )
        }
        _ => return Err(Error::CenterOutsideDomain),
    };
    Ok(Landing {
        arc: arc.clone(),
        position,
        parameter,
        path,
        local,
        to_base: chart.to_base.clone(),
        divisors: chart.divisors,
    })
}

impl Landing {
    /// Components through the landing point, `(first, second)` with the second
    /// present only at corners.
    pub fn components(&self) -> (usize, Option<usize>) {
        match self.position {
            LandingPosition::Regular { component, .. }
            | LandingPosition::Mixed { component, .. } => (component, None),
            LandingPosition::Corner { first, second, .. } => (first, Some(second)),
        }
    }

    /// `l + m p` with `(l, m)` the maximal-ideal orders of the one or two
    /// components through the landing point.
    pub fn predicted_norm_order(&self, tree: &ResolutionTree) -> ExtendedRational {
        let (a, b) = self.components();
        let l = ExtendedRational::from_int(i64::from(tree.component(a).l));
        match b {
            None => l,
            Some(b) => {
                let m = BigRational::from_integer(tree.component(b).l.into());
                &l + &self.parameter.scale(&m)
            }
        }
    }

    /// Order of `|pi(c(t))|` in the normalization where the first local
    /// coordinate has order one, computed by substitution into the chart map.
    pub fn measured_norm_order(&self) -> Result<ExtendedRational> {
        let x = eval_along(&self.to_base.0, &self.local);
        let y = eval_along(&self.to_base.1, &self.local);
        let norm = std::cmp::min(x.order_bound(), y.order_bound());
        let (first, _) = self.components();
        let first_is_u = self.divisors[0] == Some(first);
        let lead = if first_is_u {
            order_of(&self.local.u)?
        } else {
            order_of(&self.local.v)?
        };
        Ok(ratio(&norm, &lead))
    }
}

/// Data of one exceptional curve through a point, real or virtual.
#[derive(Clone, Copy, Debug)]
struct Curve {
    l: u32,
    m: u32,
    lbar: u32,
}

impl Curve {
    fn of(c: &DivisorComponent) -> Self {
        Curve {
            l: c.l,
            m: c.m,
            lbar: c.lbar,
        }
    }

    fn ratio(&self) -> ExactRational {
        BigRational::new(self.m.into(), self.l.into())
    }
}

/// Local state of a pair of arcs at a common point.
struct PairPoint {
    chart: Option<usize>,
    to_base: (ChartPoly, ChartPoly),
    curves: [Option<Curve>; 2],
}

/// `(m_u o_u + m_v o_v) / (l_u o_u + l_v o_v)` for a corner landing.
fn corner_value(curves: &[Option<Curve>; 2], local: &LocalArc) -> Result<Option<ExactRational>> {
    let [Some(a), Some(b)] = curves else {
        return Ok(None);
    };
    let ou = order_of(&local.u)?;
    let ov = order_of(&local.v)?;
    let (Some(ou), Some(ov)) = (ou.as_finite(), ov.as_finite()) else {
        return Ok(None);
    };
    let num =
        ou * BigRational::from_integer(a.m.into()) + ov * BigRational::from_integer(b.m.into());
    let den =
        ou * BigRational::from_integer(a.l.into()) + ov * BigRational::from_integer(b.l.into());
    Ok(Some(num / den))
}

/// Contact of two arcs from the divisor data met while separating them by
/// blowups: the separating component contributes `m / l`, corner landings
/// their interpolated value, and opposite sides of a component are compared
/// through the mirrored arc.
pub fn contact_by_separation(tree: &ResolutionTree, a: &Arc, b: &Arc) -> Result<ExtendedRational> {
    let cap = crate::exact::truncation_cap();
    let mut precision = int(START_PRECISION);
    loop {
        let pa = base_local(a, &precision);
        let pb = base_local(b, &precision);
        match separate(tree, pa, pb, &precision, 0, &ExtendedRational::Infinity) {
            Err(Error::TruncationTooShort { reached }) => {
                if precision > cap {
                    return Err(Error::TruncationTooShort { reached });
                }
                precision *= int(2);
            }
            other => return other,
        }
    }
}

const MAX_SEPARATION_DEPTH: usize = 512;

/// Certified `min(ord a, ord b)`; one of the two may be undetermined if the other is below its bound.
fn min_order(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<ExtendedRational> {
    let (ba, bb) = (a.order_bound(), b.order_bound());
    let known = |s: &PuiseuxSeries, bound: &ExtendedRational| {
        s.order().is_ok() && bound <= &std::cmp::max(ba.clone(), bb.clone())
    };
    let low = std::cmp::min(ba.clone(), bb.clone());
    if (ba == low && known(a, &ba)) || (bb == low && known(b, &bb)) {
        Ok(low)
    } else {
        Err(Error::TruncationTooShort {
            reached: low.to_string(),
        })
    }
}

/// Lower bound for the contact of two arcs given in base coordinates.
fn contact_floor(first: &LocalArc, second: &LocalArc) -> Result<ExtendedRational> {
    let dx = first.u.minus(&second.u).order_bound();
    let dy = first.v.minus(&second.v).order_bound();
    let norm = min_order(&first.u, &first.v)?;
    Ok(ratio(&std::cmp::min(dx, dy), &norm))
}

fn separate(
    tree: &ResolutionTree,
    mut first: LocalArc,
    mut second: LocalArc,
    precision: &ExactRational,
    nesting: usize,
    ceiling: &ExtendedRational,
) -> Result<ExtendedRational> {
    if series_equal(&first.u, &second.u) && series_equal(&first.v, &second.v) {
        return Ok(ceiling.clone());
    }
    if !ceiling.is_infinite() && &contact_floor(&first, &second)? >= ceiling {
        return Ok(ceiling.clone());
    }
    let base = &tree.charts[0];
    let mut point = PairPoint {
        chart: Some(0),
        to_base: base.to_base.clone(),
        curves: [None, None],
    };
    for _ in 0..MAX_SEPARATION_DEPTH {
        // Opposite sides of an exceptional curve: compare with the mirror image.
        let flips: Vec<bool> = (0..2)
            .map(|k| {
                point.curves[k].is_some() && {
                    let (x, y) = if k == 0 {
                        (&first.u, &second.u)
                    } else {
                        (&first.v, &second.v)
                    };
                    x.leading_sign() != y.leading_sign()
                }
            })
            .collect();
        if flips.iter().any(|f| *f) {
            let flip = |s: &PuiseuxSeries, on: bool| if on { s.negated() } else { s.clone() };
            let mirrored = LocalArc {
                u: flip(&second.u, flips[0]),
                v: flip(&second.v, flips[1]),
            };
            let mirror_x = eval_along(&point.to_base.0, &mirrored);
            let mirror_y = eval_along(&point.to_base.1, &mirrored);
            let own_x = eval_along(&point.to_base.0, &second);
            let own_y = eval_along(&point.to_base.1, &second);
            let gap = min_order(&mirror_x.minus(&own_x), &mirror_y.minus(&own_y))?;
            let flip_value = ratio(&gap, &min_order(&own_x, &own_y)?);
            if nesting > 16 {
                return Err(Error::TruncationTooShort {
                    reached: "nested mirrors".into(),
                });
            }
            let ceiling = std::cmp::min(flip_value, ceiling.clone());
            let own = LocalArc {
                u: eval_along(&point.to_base.0, &first),
                v: eval_along(&point.to_base.1, &first),
            };
            let mirror = LocalArc {
                u: mirror_x,
                v: mirror_y,
            };
            return separate(tree, own, mirror, precision, nesting + 1, &ceiling);
        }
        let component_data = match point.chart.map(|c| &tree.charts[c].state) {
            Some(ChartState::Blown { component, .. }) => Curve::of(tree.component(*component)),
            _ => {
                let through: Vec<Curve> = point.curves.iter().flatten().copied().collect();
                let l = if through.is_empty() {
                    1
                } else {
                    through.iter().map(|c| c.l).sum()
                };
                let lbar = through.iter().map(|c| c.lbar).sum::<u32>() + 1;
                Curve {
                    l,
                    m: lbar + 1 - l,
                    lbar,
                }
            }
        };
        let (move_a, next_a) = step(&first, precision)?;
        let (move_b, next_b) = step(&second, precision)?;
        let same = match (&move_a, &move_b) {
            (Move::Affine(c), Move::Affine(d)) => c == d,
            (Move::Vertical, Move::Vertical) => true,
            _ => false,
        };
        let child_curves = |mv: &Move| -> ([Option<Curve>; 2], bool) {
            match mv {
                Move::Affine(c) => (
                    [
                        Some(component_data),
                        if c.is_zero() { point.curves[1] } else { None },
                    ],
                    false,
                ),
                Move::Vertical => match point.curves[0] {
                    Some(old) => ([Some(old), Some(component_data)], false),
                    None => ([Some(component_data), None], true),
                },
            }
        };
        if !same {
            let (curves_a, swap_a) = child_curves(&move_a);
            let (curves_b, swap_b) = child_curves(&move_b);
            let la = if swap_a { swap_local(next_a) } else { next_a };
            let lb = if swap_b { swap_local(next_b) } else { next_b };
            let mut value = component_data.ratio();
            for (curves, local) in [(curves_a, &la), (curves_b, &lb)] {
                if let Some(k) = corner_value(&curves, local)? {
                    value = value.min(k);
                }
            }
            return Ok(std::cmp::min(
                ExtendedRational::Finite(value),
                ceiling.clone(),
            ));
        }
        let (curves, swap) = child_curves(&move_a);
        let next_chart = point.chart.and_then(|c| match &tree.charts[c].state {
            ChartState::Blown {
                affine, vertical, ..
            } => match &move_a {
                Move::Affine(c) => affine.iter().find(|(k, _)| k == c).map(|(_, id)| *id),
                Move::Vertical => *vertical,
            },
            ChartState::Open => None,
        });
        let to_base = match next_chart {
            Some(id) => tree.charts[id].to_base.clone(),
            None => (
                transform(&point.to_base.0, &move_a, swap, false),
                transform(&point.to_base.1, &move_a, swap, false),
            ),
        };
        first = if swap { swap_local(next_a) } else { next_a };
        second = if swap { swap_local(next_b) } else { next_b };
        point = PairPoint {
            chart: next_chart,
            to_base,
            curves,
        };
        if series_equal(&first.u, &second.u) && series_equal(&first.v, &second.v) {
            return Ok(ceiling.clone());
        }
    }
    Err(Error::TruncationTooShort {
        reached: "separation depth".into(),
    })
}

/// Sign of the leading coefficient of a series, if any term is known.
pub fn leading_sign(s: &PuiseuxSeries) -> Option<Ordering> {
    s.leading().map(|(_, c)| c.sign())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::parse::{parse_arc, parse_germ};

    fn summary(tree: &ResolutionTree) -> Vec<(u32, u32, u32, u32)> {
        tree.components
            .iter()
            .map(|c| (c.l, c.m, c.r, c.lbar))
            .collect()
    }

    #[test]
    fn cusp_fixture() {
        let f = parse_germ("y^2 - x^3").unwrap();
        let (tree, landings) = resolve(&f).unwrap();
        assert_eq!(
            summary(&tree),
            vec![(1, 1, 2, 1), (1, 2, 3, 2), (2, 3, 6, 4)]
        );
        let (edges, incidences) = tree.dual_graph();
        assert_eq!(edges.into_iter().collect::<Vec<_>>(), vec![(1, 3), (2, 3)]);
        assert_eq!(incidences, vec![(3, 1)]);
        assert_eq!(landings.len(), 2);
        assert!(landings
            .iter()
            .all(|l| matches!(l.position, LandingPosition::Mixed { component: 3, .. })));
        tree.certify().unwrap();
        let hp = hsiang_pati_data(&tree).unwrap();
        assert_eq!(
            hp[&3],
            HsiangPati {
                l: 2,
                m: 3,
                lbar: 4
            }
        );
        assert_eq!(
            hp[&2],
            HsiangPati {
                l: 1,
                m: 2,
                lbar: 2
            }
        );
        assert!(tree.to_dot().contains("E3 [label=\"E3 l=2 m=3 r=6\"];"));
    }

    #[test]
    fn cusp_landings() {
        let f = parse_germ("y^2 - x^3").unwrap();
        let (tree, _) = resolve(&f).unwrap();
        let land = |t: &str| land_arc(&tree, &parse_arc(t).unwrap()).unwrap();
        assert!(matches!(
            land("y = 0 [x>0]").position,
            LandingPosition::Regular { component: 2, .. }
        ));
        assert!(matches!(
            land("x = 0 [y>0]").position,
            LandingPosition::Regular { component: 1, .. }
        ));
        let corner = land("y = x^(4/3) [x>0]");
        assert!(matches!(
            corner.position,
            LandingPosition::Corner {
                first: 1,
                second: 3,
                ..
            }
        ));
        assert_eq!(corner.parameter, ExtendedRational::from_int(1));
        assert_eq!(
            corner.predicted_norm_order(&tree),
            ExtendedRational::from_int(3)
        );
        assert_eq!(
            corner.measured_norm_order().unwrap(),
            ExtendedRational::from_int(3)
        );
    }

    #[test]
    fn simple_germs() {
        let (tree, landings) = resolve(&parse_germ("x*y").unwrap()).unwrap();
        assert_eq!(summary(&tree), vec![(1, 1, 2, 1)]);
        assert_eq!(tree.branches.len(), 2);
        assert_eq!(landings.len(), 4);
        let (tree, landings) = resolve(&parse_germ("x^2 + y^2").unwrap()).unwrap();
        assert_eq!(summary(&tree), vec![(1, 1, 2, 1)]);
        assert!(tree.branches.is_empty() && landings.is_empty());
        tree.certify().unwrap();
    }

    #[test]
    fn separation_contacts() {
        let f = parse_germ("y^2 - x^3").unwrap();
        let (tree, _) = resolve(&f).unwrap();
        let c = |a: &str, b: &str| {
            contact_by_separation(&tree, &parse_arc(a).unwrap(), &parse_arc(b).unwrap()).unwrap()
        };
        assert_eq!(
            c("y = x^(3/2)", "y = 2*x^(3/2)"),
            ExtendedRational::Finite(rat(3, 2))
        );
        assert_eq!(c("y = 0", "x = 0"), ExtendedRational::from_int(1));
        assert_eq!(
            c("y = x^(4/3)", "y = x^(3/2)"),
            ExtendedRational::Finite(rat(4, 3))
        );
        assert_eq!(
            c("y = x^(3/2)", "y = -x^(3/2)"),
            ExtendedRational::Finite(rat(3, 2))
        );
        assert_eq!(
            c("y = x^2 [x>0]", "y = x^2 + x^3 [x<0]"),
            ExtendedRational::from_int(1)
        );
        assert_eq!(
            c("y = 0 [x>0]", "y = x^2 [x<0]"),
            ExtendedRational::from_int(1)
        );
        assert_eq!(c("y = x^2", "y = x^2 + x^5"), ExtendedRational::from_int(5));
        assert_eq!(c("y = x^2", "y = x^2"), ExtendedRational::Infinity);
    }

    #[test]
    fn resolutions_agree_with_expansions() {
        use crate::puiseux::contact_order_puiseux;
        for g in [
            "y^3 - x^5",
            "y^2 - x^4",
            "y*(y - x^2)",
            "x^3 - y^3",
            "(y^2 - x^3)*(y^2 - x^5)",
            "y^2 - x^2*y + x^5",
            "x^4 + y^4",
            "y^2 - 2*x^2",
            "x*y*(x - y)",
            "(y - x^2)^2 - x^5",
            "y^5 - x^7",
            "x^2*y - y^4",
        ] {
            let (tree, landings) = resolve(&parse_germ(g).unwrap()).unwrap();
            tree.certify().unwrap();
            hsiang_pati_data(&tree).unwrap();
            for l in &landings {
                assert_eq!(
                    l.measured_norm_order().unwrap(),
                    l.predicted_norm_order(&tree),
                    "{g}"
                );
            }
            for (i, a) in landings.iter().enumerate() {
                for b in &landings[i + 1..] {
                    let expected = contact_order_puiseux(&a.arc, &b.arc).unwrap().0;
                    assert_eq!(
                        contact_by_separation(&tree, &a.arc, &b.arc).unwrap(),
                        expected,
                        "{g}"
                    );
                }
            }
        }
        let (tree, _) = resolve(&parse_germ("(y^2 - x^3)*(y^2 - x^5)").unwrap()).unwrap();
        let ratios: Vec<(u32, u32)> = tree.components.iter().map(|c| (c.l, c.m)).collect();
        assert_eq!(ratios, vec![(1, 1), (1, 2), (1, 3), (2, 5), (2, 3)]);
    }
}
