//! Exact arithmetic: rationals, real algebraic numbers, number fields,
//! polynomials and truncated Puiseux series.

pub mod algebraic;
pub mod field;
pub mod poly2;
pub mod rational;
pub mod roots;
pub mod series;
pub mod upoly;

pub use algebraic::AlgebraicNumber;
pub use field::{
    real_roots, real_roots_with_multiplicity, AdjoinedRoot, Embedding, NumberField, Scalar,
};
pub use poly2::{Poly2, Polynomial2};
pub use rational::{fmt_rational, int, parse_rational, rat, ExactRational, ExtendedRational};
pub use series::{
    format_series, series_combine, series_order, substitute, PuiseuxSeries, SeriesOp,
};
pub use upoly::{Coefficient, RealCoefficient, UPoly};

use std::sync::atomic::{AtomicU64, Ordering};

static TRUNCATION_CAP: AtomicU64 = AtomicU64::new(256);

/// Largest exponent to which truncated series are extended before giving up.
pub fn truncation_cap() -> ExactRational {
    ExactRational::from_integer(TRUNCATION_CAP.load(Ordering::Relaxed).into())
}

/// Overrides the extension cap; values below 8 are raised to 8.
pub fn set_truncation_cap(cap: u64) {
    TRUNCATION_CAP.store(cap.max(8), Ordering::Relaxed);
}
