//! Exact symbolic engine for the metric invariants of real plane function germs.
//!
//! The crate is layered: [`exact`] provides rationals, number fields and truncated
//! Puiseux series; [`puiseux`] expands germs into branches and contact trees;
//! [`blowup`] builds embedded resolutions; [`invariants`] evaluates the closed-form
//! orders and widths; [`pizza`] assembles and compares pizza invariants.

pub mod blowup;
pub mod error;
pub mod exact;
pub mod invariants;
pub mod parse;
pub mod pizza;
pub mod puiseux;
pub mod validation;

pub use error::{Error, Result};
pub use exact::{
    AlgebraicNumber, ExactRational, ExtendedRational, Polynomial2, PuiseuxSeries, Scalar, SeriesOp,
};
pub use parse::{parse_arc, parse_germ};
pub use puiseux::{Arc, Branch, ContactOrder, OrderProfile, Side};
