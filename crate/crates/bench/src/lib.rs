//! Benchmark fixtures shared by the criterion suites.

use pizzeria_core::{parse_germ, Polynomial2};

/// Germs of increasing difficulty, labelled for report names.
pub const FIXTURES: [(&str, &str); 5] = [
    ("node", "x*y"),
    ("cusp", "y^2 - x^3"),
    ("tacnode_cusp", "(y^2 - x^3)*(y - x^2)"),
    ("two_cusps", "(y^2 - x^3)*(y^2 - x^5)"),
    ("quartic", "x^4 + y^4"),
];

/// Parsed fixtures; panics only if a constant above is malformed.
pub fn fixtures() -> Vec<(&'static str, Polynomial2)> {
    FIXTURES
        .iter()
        .map(|&(name, text)| (name, parse_germ(text).expect("fixture parses")))
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_parse() {
        assert_eq!(super::fixtures().len(), super::FIXTURES.len());
    }
}
