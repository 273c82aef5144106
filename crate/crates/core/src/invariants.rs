//! Closed-form invariants read off the resolution, each checked against the
//! Puiseux computation of the same quantity.

use std::fmt;

use num_rational::BigRational;

use crate::blowup::{contact_by_separation, Landing, LandingPosition, ResolutionTree};
use crate::error::{Error, Result};
use crate::exact::{int, rat, ExactRational, ExtendedRational, Polynomial2, PuiseuxSeries, Scalar};
use crate::puiseux::{contact_order_puiseux, order_along_arc, order_profile, Arc, ContactOrder};

/// How a value of the normalized order was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuMethod {
    ResolutionFormula,
    PuiseuxOracle,
}

/// Normalized order of a germ along an arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuValue {
    pub value: ExtendedRational,
    pub method: NuMethod,
}

/// Width of a germ along an arc, at least one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthValue(pub ExtendedRational);

impl fmt::Display for NuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl fmt::Display for WidthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn disagreement(quantity: &str, formula: &ExtendedRational, oracle: &ExtendedRational) -> Error {
    Error::OracleDisagreement {
        quantity: quantity.to_string(),
        formula: formula.to_string(),
        oracle: oracle.to_string(),
    }
}

fn whole(n: u32) -> ExactRational {
    BigRational::from_integer(n.into())
}

/// Multiplicity of the germ's strict transform at a landing chart.
fn strict_multiplicity(tree: &ResolutionTree, chart: usize) -> u32 {
    tree.chart(chart).strict.order().unwrap_or(0)
}

/// `(r + s p) / (l + m p)` with the resolution data of the components and
/// strict transform through the landing point.
pub fn nu_formula(tree: &ResolutionTree, landing: &Landing) -> ExtendedRational {
    let p = &landing.parameter;
    match landing.position {
        LandingPosition::Regular { component, .. } => {
            let c = tree.component(component);
            ExtendedRational::Finite(BigRational::new(c.r.into(), c.l.into()))
        }
        LandingPosition::Mixed {
            component, chart, ..
        } => {
            let c = tree.component(component);
            let s = strict_multiplicity(tree, chart);
            match p.as_finite() {
                Some(p) => ExtendedRational::Finite((whole(c.r) + whole(s) * p) / whole(c.l)),
                None => ExtendedRational::Infinity,
            }
        }
        LandingPosition::Corner { first, second, .. } => {
            let (a, b) = (tree.component(first), tree.component(second));
            match p.as_finite() {
                Some(p) => ExtendedRational::Finite(
                    (whole(a.r) + whole(b.r) * p) / (whole(a.l) + whole(b.l) * p),
                ),
                None => ExtendedRational::Finite(BigRational::new(b.r.into(), b.l.into())),
            }
        }
    }
}

/// Normalized order from the landing data, checked against direct substitution.
pub fn nu_via_resolution(tree: &ResolutionTree, landing: &Landing) -> Result<NuValue> {
    let formula = nu_formula(tree, landing);
    let oracle = order_along_arc(&tree.germ, &landing.arc)?;
    if formula != oracle {
        return Err(disagreement("normalized order", &formula, &oracle));
    }
    Ok(NuValue {
        value: formula,
        method: NuMethod::ResolutionFormula,
    })
}

/// Normalized order by substitution only.
pub fn nu_by_substitution(f: &Polynomial2, arc: &Arc) -> Result<NuValue> {
    Ok(NuValue {
        value: order_along_arc(f, arc)?,
        method: NuMethod::PuiseuxOracle,
    })
}

/// Contact of two landed arcs from the divisor data met while separating
/// them, checked against the Puiseux contact.
pub fn contact_via_resolution(
    tree: &ResolutionTree,
    a: &Landing,
    b: &Landing,
) -> Result<ContactOrder> {
    let formula = contact_by_separation(tree, &a.arc, &b.arc)?;
    let oracle = contact_order_puiseux(&a.arc, &b.arc)?.0;
    if formula != oracle {
        return Err(disagreement("contact order", &formula, &oracle));
    }
    Ok(ContactOrder(formula))
}

/// `arc + c s^beta` in the arc's graph coordinate; its contact with `arc` is `beta`.
pub fn perturbed_arc(arc: &Arc, beta: &ExactRational, coefficient: &ExactRational) -> Result<Arc> {
    let bump = PuiseuxSeries::monomial(Scalar::Rat(coefficient.clone()), beta.clone());
    Arc::new(arc.side(), arc.series().plus(&bump))
}

/// Coefficients tried when a generic perturbation is needed.
const SAMPLE_COEFFICIENTS: [(i64, i64); 4] = [(1, 1), (-1, 1), (2, 1), (-1, 3)];

/// Which way a perturbation check came out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthSample {
    pub below: Option<bool>,
    pub above: bool,
    pub at: bool,
}

impl WidthSample {
    pub fn passed(&self) -> bool {
        self.below != Some(false) && self.above && self.at
    }
}

/// Perturbs `arc` at contacts `width - offset`, `width + offset` and `width`.
/// Below the width some perturbation must change the order; above, every
/// sampled one must keep it; at the width some must keep it. The check
/// below is skipped when `width - offset < 1`. Below and at the width, a
/// perturbation whose order the truncation cannot certify is ignored.
pub fn sample_width(
    f: &Polynomial2,
    arc: &Arc,
    width: &ExactRational,
    offset: &ExactRational,
) -> Result<WidthSample> {
    let nu = order_along_arc(f, arc)?;
    let orders_at = |beta: &ExactRational| -> Result<Vec<Result<ExtendedRational>>> {
        SAMPLE_COEFFICIENTS
            .iter()
            .map(|&(p, q)| Ok(order_along_arc(f, &perturbed_arc(arc, beta, &rat(p, q))?)))
            .collect()
    };
    let some = |orders: Vec<Result<ExtendedRational>>, keeps: bool| {
        orders.iter().flatten().any(|v| (v == &nu) == keeps)
    };
    let below_beta = width - offset;
    let below = if below_beta >= int(1) {
        Some(some(orders_at(&below_beta)?, false))
    } else {
        None
    };
    let above = orders_at(&(width + offset))?
        .into_iter()
        .try_fold(true, |all, v| Ok::<_, Error>(all && v? == nu))?;
    let at = some(orders_at(width)?, true);
    Ok(WidthSample { below, above, at })
}

/// Offset used by the built-in width cross-check.
pub fn sampling_offset() -> ExactRational {
    rat(1, 10)
}

/// Width of `f` along `arc`: the last breakpoint of the order profile,
/// confirmed by perturbation sampling.
pub fn width(f: &Polynomial2, arc: &Arc) -> Result<WidthValue> {
    let profile = order_profile(f, arc)?;
    let value = profile.width();
    if let ExtendedRational::Finite(w) = &value {
        if !arc.is_branch() {
            let sample = sample_width(f, arc, w, &sampling_offset())?;
            if !sample.passed() {
                return Err(Error::OracleDisagreement {
                    quantity: "width".into(),
                    formula: value.to_string(),
                    oracle: format!("{sample:?}"),
                });
            }
        }
    }
    Ok(WidthValue(value))
}

/// Order of `f` along `arc` where the two are compared generically at contact `beta`.
pub fn generic_order_at(
    f: &Polynomial2,
    arc: &Arc,
    beta: &ExtendedRational,
) -> Result<ExtendedRational> {
    Ok(order_profile(f, arc)?.value(beta))
}

/// `(r + s p) / (l + m p)` as `p` runs over `(0, inf)`, for a corner between two components.
pub fn corner_interpolation(
    tree: &ResolutionTree,
    first: usize,
    second: usize,
    p: &ExactRational,
) -> ExactRational {
    let (a, b) = (tree.component(first), tree.component(second));
    (whole(a.r) + whole(b.r) * p) / (whole(a.l) + whole(b.l) * p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{land_arc, resolve};
    use crate::parse::{parse_arc, parse_germ};

    fn finite(p: i64, q: i64) -> ExtendedRational {
        ExtendedRational::Finite(rat(p, q))
    }

    #[test]
    fn cusp_orders() {
        let f = parse_germ("y^2 - x^3").unwrap();
        let (tree, _) = resolve(&f).unwrap();
        let nu = |a: &str| {
            nu_via_resolution(&tree, &land_arc(&tree, &parse_arc(a).unwrap()).unwrap())
                .unwrap()
                .value
        };
        assert_eq!(nu("y = 0 [x>0]"), finite(3, 1));
        assert_eq!(nu("x = 0 [y>0]"), finite(2, 1));
        assert_eq!(nu("y = x^(4/3) [x>0]"), finite(8, 3));
        assert_eq!(nu("y = x^(3/2) [x>0]"), ExtendedRational::Infinity);
        assert_eq!(nu("y = x [x<0]"), finite(2, 1));
    }

    #[test]
    fn cusp_contacts() {
        let f = parse_germ("y^2 - x^3").unwrap();
        let (tree, _) = resolve(&f).unwrap();
        let c = |a: &str, b: &str| {
            let la = land_arc(&tree, &parse_arc(a).unwrap()).unwrap();
            let lb = land_arc(&tree, &parse_arc(b).unwrap()).unwrap();
            contact_via_resolution(&tree, &la, &lb).unwrap().0
        };
        assert_eq!(c("y = x^(3/2)", "y = 2*x^(3/2)"), finite(3, 2));
        assert_eq!(c("y = 0 [x>0]", "x = 0 [y>0]"), finite(1, 1));
        assert_eq!(c("y = x", "y = 2*x"), finite(1, 1));
    }

    #[test]
    fn widths() {
        let cusp = parse_germ("y^2 - x^3").unwrap();
        assert_eq!(
            width(&cusp, &parse_arc("y = 0 [x>0]").unwrap()).unwrap().0,
            finite(3, 2)
        );
        assert_eq!(
            width(&cusp, &parse_arc("y = x^(3/2) [x>0]").unwrap())
                .unwrap()
                .0,
            ExtendedRational::Infinity
        );
        let circle = parse_germ("x^2 + y^2").unwrap();
        for a in ["y = 0 [x>0]", "x = 3*y^2 [y<0]", "y = -x + x^(5/2) [x<0]"] {
            assert_eq!(
                width(&circle, &parse_arc(a).unwrap()).unwrap().0,
                finite(1, 1)
            );
        }
        let cross = parse_germ("x*y").unwrap();
        assert_eq!(
            width(&cross, &parse_arc("y = x^3 [x>0]").unwrap())
                .unwrap()
                .0,
            finite(3, 1)
        );
    }

    #[test]
    fn corner_values_interpolate() {
        let f = parse_germ("y^2 - x^3").unwrap();
        let (tree, _) = resolve(&f).unwrap();
        let values: Vec<ExactRational> = [rat(1, 100), rat(1, 2), int(1), int(2), int(100)]
            .iter()
            .map(|p| corner_interpolation(&tree, 1, 3, p))
            .collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(corner_interpolation(&tree, 1, 3, &int(1)), rat(8, 3));
        assert!(values[0] > int(2) && values[4] < int(3));
    }
}
