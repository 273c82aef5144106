//! Built-in germ corpus and the self-validation checks behind `pizzeria selftest`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blowup::{
    contact_by_separation, hsiang_pati_data, land_arc, resolve, HsiangPati, ResolutionTree,
};
use crate::error::Result;
use crate::exact::{int, rat, ExactRational, ExtendedRational, Polynomial2, PuiseuxSeries, Scalar};
use crate::invariants::{nu_formula, perturbed_arc, sample_width, sampling_offset, width};
use crate::parse::{parse_arc, parse_germ};
use crate::pizza::{build_pizza, decide_contact_equivalence, Pizza};
use crate::puiseux::{contact_order_puiseux, order_along_arc, Arc, Expansion, Side};

/// Germs of degree at most eight exercised by every corpus-wide check.
pub const CORPUS: [&str; 32] = [
    "x^2 + y^2",
    "x*y",
    "y^2 - x^3",
    "y^2 - x^5",
    "y^3 - x^4",
    "x*(y^2 - x^3)",
    "(y^2 - x^3)*(y - x^2)",
    "x^2 - y^2",
    "x^2 + 2*y^2",
    "x^2 + y^4",
    "x^2 - y^4",
    "y^2 - x^4",
    "y^3 - x^5",
    "x^3 - y^5",
    "x^3 - 3*x*y^2",
    "x^4 + y^4",
    "x^3 + y^3",
    "y^2 - 2*x^2",
    "x*y*(x - y)",
    "y*(y - x^2)",
    "y*(x^2 + y^2)",
    "y*(y^2 - x^3)",
    "y^2 - x^2*y + x^5",
    "(y - x^2)^2 - x^5",
    "(y^2 - x^3)*(y^2 - x^5)",
    "y^5 - x^7",
    "y^2 + x^6",
    "y^4 - x^6",
    "x^4 - y^6",
    "x^2*y - y^4",
    "y^4 + x^5",
    "(x^2 + y^2)*(y - x^2)",
];

/// Arcs evaluated against every corpus germ, alongside the germ's own branches
/// and perturbations of them.
pub const PROBE_ARCS: [&str; 12] = [
    "y = 0 [x>0]",
    "y = 0 [x<0]",
    "x = 0 [y>0]",
    "x = 0 [y<0]",
    "y = x [x>0]",
    "y = -x [x<0]",
    "y = x^2 [x>0]",
    "x = y^2 [y<0]",
    "y = x^(3/2) [x>0]",
    "y = -x^(3/2) [x>0]",
    "y = x^(4/3) [x>0]",
    "y = x^2 + x^(5/2) [x>0]",
];

/// Contacts at which branches of a germ are perturbed to produce probe arcs.
const BRANCH_PERTURBATIONS: [(i64, i64); 3] = [(2, 1), (5, 2), (3, 1)];

/// Seed of the randomized oracle comparison.
pub const RANDOM_SEED: u64 = 0x005e_ed0f_a4c5;

/// Number of random (germ, arc) pairs in the oracle comparison.
pub const RANDOM_PAIRS: usize = 120;

/// Random merge orders tried per germ in the confluence check.
const MERGE_ORDERS: u64 = 4;

/// Failures listed in a report before the rest are summarized.
const SHOWN_FAILURES: usize = 5;

pub fn corpus() -> Vec<(&'static str, Polynomial2)> {
    CORPUS
        .iter()
        .map(|s| (*s, parse_germ(s).expect("corpus germ parses")))
        .collect()
}

/// A polynomial automorphism of the plane fixing the origin.
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub name: &'static str,
    pub x: Polynomial2,
    pub y: Polynomial2,
}

impl Automorphism {
    /// `f` composed with the map.
    pub fn pull_back(&self, f: &Polynomial2) -> Polynomial2 {
        f.compose(&self.x, &self.y)
    }
}

fn linear(a: ExactRational, b: ExactRational) -> Polynomial2 {
    Polynomial2::x().scale(&a).plus(&Polynomial2::y().scale(&b))
}

/// Rotation by the angle with cosine 3/5, a shear and two polynomial triangular maps.
pub fn automorphisms() -> Vec<Automorphism> {
    let (x, y) = (Polynomial2::x(), Polynomial2::y());
    vec![
        Automorphism {
            name: "rotation",
            x: linear(rat(3, 5), rat(-4, 5)),
            y: linear(rat(4, 5), rat(3, 5)),
        },
        Automorphism {
            name: "shear",
            x: x.clone(),
            y: y.plus(&x.scale(&int(2))),
        },
        Automorphism {
            name: "(x, y + x^2)",
            x: x.clone(),
            y: y.plus(&x.pow(2)),
        },
        Automorphism {
            name: "(x + y^3, y)",
            x: x.plus(&y.pow(3)),
            y,
        },
    ]
}

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Report {
    pub criterion: u8,
    pub title: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    fn new(criterion: u8, title: &'static str) -> Self {
        Report {
            criterion,
            title,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    fn check_result(&mut self, outcome: Result<bool>, detail: impl FnOnce() -> String) {
        match outcome {
            Ok(ok) => self.check(ok, detail),
            Err(e) => {
                let d = detail();
                self.check(false, || format!("{d}: {e}"));
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {} {status}: {} ({} checks",
            self.criterion, self.title, self.checks
        )?;
        if !self.failures.is_empty() {
            write!(f, ", {} failed", self.failures.len())?;
        }
        f.write_str(")")?;
        for line in self.failures.iter().take(SHOWN_FAILURES) {
            write!(f, "\n    {line}")?;
        }
        if self.failures.len() > SHOWN_FAILURES {
            write!(f, "\n    ... {} more", self.failures.len() - SHOWN_FAILURES)?;
        }
        Ok(())
    }
}

pub const CRITERIA: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

pub fn run_criterion(criterion: u8) -> Report {
    match criterion {
        1 => cusp_fixture(),
        2 => hsiang_pati_relation(),
        3 => oracle_agreement(),
        4 => width_sampling(),
        5 => automorphism_invariance(),
        6 => discrimination(),
        7 => norm_orders(),
        8 => canonical_forms(),
        _ => {
            let mut r = Report::new(criterion, "unknown criterion");
            r.check(false, || format!("no criterion {criterion}"));
            r
        }
    }
}

pub fn run_all() -> Vec<Report> {
    CRITERIA.iter().map(|&c| run_criterion(c)).collect()
}

fn cusp_fixture() -> Report {
    let mut r = Report::new(1, "cusp resolution fixture");
    let f = parse_germ("y^2 - x^3").expect("cusp");
    let (tree, landings) = match resolve(&f) {
        Ok(t) => t,
        Err(e) => {
            r.check(false, || format!("resolve failed: {e}"));
            return r;
        }
    };
    let data: Vec<(u32, u32, u32, u32)> = tree
        .components
        .iter()
        .map(|c| (c.l, c.m, c.r, c.lbar))
        .collect();
    r.check(
        data == vec![(1, 1, 2, 1), (1, 2, 3, 2), (2, 3, 6, 4)],
        || format!("components (l, m, r, lbar) = {data:?}"),
    );
    let (edges, incidences) = tree.dual_graph();
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    r.check(edges == vec![(1, 3), (2, 3)], || {
        format!("dual graph edges {edges:?}")
    });
    r.check(
        !incidences.is_empty() && incidences.iter().all(|(c, _)| *c == 3),
        || format!("strict transform meets {incidences:?}"),
    );
    r.check(landings.len() == 2, || {
        format!("{} landed half-branches", landings.len())
    });
    r.check_result(tree.certify().map(|_| true), || "unit certification".into());
    r.check_result(
        hsiang_pati_data(&tree).map(|hp| {
            hp.get(&3)
                == Some(&HsiangPati {
                    l: 2,
                    m: 3,
                    lbar: 4,
                })
                && hp.get(&2)
                    == Some(&HsiangPati {
                        l: 1,
                        m: 2,
                        lbar: 2,
                    })
                && hp.get(&1)
                    == Some(&HsiangPati {
                        l: 1,
                        m: 1,
                        lbar: 1,
                    })
        }),
        || "chart-measured Hsiang-Pati data".into(),
    );
    r
}

fn hsiang_pati_relation() -> Report {
    let mut r = Report::new(2, "lbar = l + m - 1 on every component");
    for (name, f) in corpus() {
        r.check(f.total_degree().is_some_and(|d| d <= 8), || {
            format!("{name}: degree above 8")
        });
        let tree = match resolve(&f) {
            Ok((t, _)) => t,
            Err(e) => {
                r.check(false, || format!("{name}: {e}"));
                continue;
            }
        };
        for c in &tree.components {
            r.check(c.lbar + 1 == c.l + c.m, || {
                format!("{name}: E{} l={} m={} lbar={}", c.id, c.l, c.m, c.lbar)
            });
        }
        r.check_result(
            hsiang_pati_data(&tree).map(|hp| hp.values().all(|d| d.lbar + 1 == d.l + d.m)),
            || format!("{name}: measured data"),
        );
    }
    r
}

/// Exponents drawn for random arcs.
const RANDOM_EXPONENTS: [(i64, i64); 9] = [
    (1, 1),
    (4, 3),
    (3, 2),
    (5, 3),
    (2, 1),
    (5, 2),
    (3, 1),
    (7, 2),
    (4, 1),
];

/// Coefficients drawn for random arcs.
const RANDOM_COEFFICIENTS: [(i64, i64); 7] =
    [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (1, 2), (-1, 3)];

fn random_side(rng: &mut ChaCha8Rng) -> Side {
    Side::CIRCLE[rng.gen_range(0..Side::CIRCLE.len())]
}

fn random_polynomial_arc(rng: &mut ChaCha8Rng) -> Arc {
    let count = rng.gen_range(1..=3);
    let mut picks: Vec<usize> = (0..count)
        .map(|_| rng.gen_range(0..RANDOM_EXPONENTS.len()))
        .collect();
    picks.sort_unstable();
    picks.dedup();
    let series = PuiseuxSeries::from_terms(picks.into_iter().map(|k| {
        let (p, q) = RANDOM_EXPONENTS[k];
        let (a, b) = RANDOM_COEFFICIENTS[rng.gen_range(0..RANDOM_COEFFICIENTS.len())];
        (rat(p, q), Scalar::Rat(rat(a, b)))
    }));
    Arc::new(random_side(rng), series).expect("exponents at least one")
}

/// `branch` followed exactly below `height`, then pushed off it at `height`.
pub fn branch_perturbation(branch: &Arc, height: &ExactRational) -> Result<Arc> {
    let known = branch.series_until(height);
    let below = PuiseuxSeries::from_terms(
        known
            .terms()
            .filter(|(e, _)| *e < height)
            .map(|(e, c)| (e.clone(), c.clone())),
    );
    let own = known.coefficient(height);
    let shifted = crate::exact::Coefficient::plus(&own, &Scalar::from_int(1));
    let shifted = if crate::exact::Coefficient::is_zero(&shifted) {
        Scalar::from_int(2)
    } else {
        shifted
    };
    Arc::new(
        branch.side(),
        below.plus(&PuiseuxSeries::monomial(shifted, height.clone())),
    )
}

fn random_arc(rng: &mut ChaCha8Rng, branches: &[Arc]) -> Result<Arc> {
    if !branches.is_empty() && rng.gen_bool(0.5) {
        let branch = &branches[rng.gen_range(0..branches.len())];
        let (p, q) = RANDOM_EXPONENTS[rng.gen_range(1..RANDOM_EXPONENTS.len())];
        branch_perturbation(branch, &rat(p, q))
    } else {
        Ok(random_polynomial_arc(rng))
    }
}

fn oracle_agreement() -> Report {
    let mut r = Report::new(
        3,
        "resolution formulas agree with Puiseux oracles on random pairs",
    );
    let germs = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let mut cache: Vec<Option<(ResolutionTree, Vec<Arc>)>> = vec![None; germs.len()];
    for _ in 0..RANDOM_PAIRS {
        let k = rng.gen_range(0..germs.len());
        let (name, f) = &germs[k];
        if cache[k].is_none() {
            match resolve(f) {
                Ok((tree, _)) => cache[k] = Some((tree, Expansion::new(f).real_arcs())),
                Err(e) => {
                    r.check(false, || format!("{name}: {e}"));
                    continue;
                }
            }
        }
        let (tree, branches) = cache[k].as_ref().expect("cached");
        let pair =
            random_arc(&mut rng, branches).and_then(|a| Ok((a, random_arc(&mut rng, branches)?)));
        let (first, second) = match pair {
            Ok(p) => p,
            Err(e) => {
                r.check(false, || format!("{name}: arc construction: {e}"));
                continue;
            }
        };
        let nu = land_arc(tree, &first)
            .and_then(|l| Ok((nu_formula(tree, &l), order_along_arc(f, &first)?)));
        r.check_result(
            nu.as_ref().map(|(a, b)| a == b).map_err(Clone::clone),
            || format!("{name} along {first}: nu {}", describe_pair(&nu)),
        );
        let contact = contact_by_separation(tree, &first, &second)
            .and_then(|c| Ok((c, contact_order_puiseux(&first, &second)?.0)));
        r.check_result(
            contact.as_ref().map(|(a, b)| a == b).map_err(Clone::clone),
            || {
                format!(
                    "{name}: contact of {first} and {second}: {}",
                    describe_pair(&contact)
                )
            },
        );
    }
    r
}

fn describe_pair(pair: &Result<(ExtendedRational, ExtendedRational)>) -> String {
    match pair {
        Ok((formula, oracle)) => format!("formula {formula} vs oracle {oracle}"),
        Err(e) => e.to_string(),
    }
}

/// Probe arcs and branch perturbations for one germ, plus its real branches.
fn probe_arcs(f: &Polynomial2) -> (Vec<Arc>, Vec<Arc>) {
    let branches = Expansion::new(f).real_arcs();
    let mut arcs: Vec<Arc> = PROBE_ARCS
        .iter()
        .map(|a| parse_arc(a).expect("probe arc parses"))
        .collect();
    for b in &branches {
        for &(p, q) in &BRANCH_PERTURBATIONS {
            if let Ok(a) = branch_perturbation(b, &rat(p, q)) {
                arcs.push(a);
            }
        }
    }
    (arcs, branches)
}

fn width_sampling() -> Report {
    let mut r = Report::new(4, "width confirmed by perturbation sampling");
    let offset = sampling_offset();
    for (name, f) in corpus() {
        let (arcs, _) = probe_arcs(&f);
        for arc in &arcs {
            let w = match width(&f, arc) {
                Ok(w) => w.0,
                Err(e) => {
                    r.check(false, || format!("{name} along {arc}: {e}"));
                    continue;
                }
            };
            let ExtendedRational::Finite(w) = w else {
                continue;
            };
            r.check_result(
                sample_width(&f, arc, &w, &offset).map(|s| s.passed()),
                || {
                    format!(
                        "{name} along {arc}: width {}",
                        crate::exact::fmt_rational(&w)
                    )
                },
            );
            let generic = perturbed_arc(arc, &w, &rat(7, 3))
                .and_then(|a| Ok(order_along_arc(&f, &a)? == order_along_arc(&f, arc)?));
            r.check_result(generic, || {
                format!("{name} along {arc}: generic perturbation at the width")
            });
        }
    }
    r
}

fn automorphism_invariance() -> Report {
    let mut r = Report::new(5, "equivalence under automorphisms and scalings");
    let maps = automorphisms();
    for (name, f) in corpus() {
        let mut variants: Vec<(String, Polynomial2)> = maps
            .iter()
            .map(|a| (format!("f o {}", a.name), a.pull_back(&f)))
            .collect();
        variants.push(("-f".into(), f.negated()));
        variants.push(("2f".into(), f.scale(&int(2))));
        variants.push(("f/3".into(), f.scale(&rat(1, 3))));
        for (label, g) in variants {
            r.check_result(
                decide_contact_equivalence(&f, &g).map(|v| v.is_equivalent()),
                || format!("{name} vs {label}"),
            );
        }
    }
    r
}

fn discrimination() -> Report {
    let mut r = Report::new(6, "discrimination verdicts");
    for (f, g, expected) in [
        ("x^2 + y^2", "x^2 + y^4", false),
        ("x*y", "x^2 - y^2", true),
        ("y^2 - x^3", "y^2 - x^5", false),
    ] {
        let verdict = decide_contact_equivalence(
            &parse_germ(f).expect("germ"),
            &parse_germ(g).expect("germ"),
        );
        r.check_result(verdict.map(|v| v.is_equivalent() == expected), || {
            format!(
                "({f}, {g}) expected {}",
                if expected {
                    "EQUIVALENT"
                } else {
                    "NOT_EQUIVALENT"
                }
            )
        });
    }
    r
}

fn norm_orders() -> Report {
    let mut r = Report::new(7, "norm order l + m p at every landing");
    for (name, f) in corpus() {
        let tree = match resolve(&f) {
            Ok((t, _)) => t,
            Err(e) => {
                r.check(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let (arcs, branches) = probe_arcs(&f);
        for arc in arcs.iter().chain(&branches) {
            let outcome = land_arc(&tree, arc)
                .and_then(|l| Ok((l.predicted_norm_order(&tree), l.measured_norm_order()?)));
            r.check_result(
                outcome.as_ref().map(|(a, b)| a == b).map_err(Clone::clone),
                || format!("{name} along {arc}: {}", describe_pair(&outcome)),
            );
        }
    }
    r
}

fn canonical_forms() -> Report {
    let mut r = Report::new(
        8,
        "canonical form confluence, idempotence and JSON round trip",
    );
    for (name, f) in corpus() {
        let raw = match build_pizza(&f) {
            Ok(p) => p,
            Err(e) => {
                r.check(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let canonical = raw.canonicalize();
        let json = canonical.to_json();
        r.check(canonical.canonicalize().to_json() == json, || {
            format!("{name}: canonicalize is not idempotent")
        });
        for seed in 0..MERGE_ORDERS {
            let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED ^ seed);
            let other = raw.canonicalize_with(|n| rng.gen_range(0..n));
            r.check(other.to_json() == json, || {
                format!("{name}: merge order {seed} gives {}", other.to_json())
            });
        }
        let round = Pizza::from_json(&json).map(|p| p.to_json() == json);
        r.check_result(round, || format!("{name}: JSON round trip"));
    }
    r
}
