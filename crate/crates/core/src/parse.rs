//! Text grammars for germs and arcs.
//!
//! Germs are polynomial expressions in `x`, `y` with rational coefficients:
//! sums of products of numbers, variables, parenthesized expressions and
//! integer powers. Arcs read `y = <series in x> [x>0]` or
//! `x = <series in y> [y<0]`, with exponents `^k` or `^(p/q)` at least one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, ExactRational, Polynomial2, PuiseuxSeries, Scalar};
use crate::puiseux::{signed_to_side, Arc, Side};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("digit"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    /// `n` or `n/d`.
    fn number(&mut self) -> Result<ExactRational> {
        let n = self.integer()?;
        if self.peek() == Some('/')
            && self
                .chars
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit() || c.is_whitespace())
        {
            let save = self.pos;
            self.pos += 1;
            match self.integer() {
                Ok(d) if !d.is_zero() => return Ok(BigRational::new(n, d)),
                Ok(_) => return Err(self.error("nonzero denominator")),
                Err(_) => self.pos = save,
            }
        }
        Ok(BigRational::from_integer(n))
    }

    fn small_exponent(&mut self) -> Result<u32> {
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| self.error("exponent below 2^32"))
    }
}

fn variable(name: char) -> Polynomial2 {
    if name == 'x' {
        Polynomial2::x()
    } else {
        Polynomial2::y()
    }
}

fn expr(cur: &mut Cursor) -> Result<Polynomial2> {
    let mut acc = if cur.eat('-') {
        term(cur)?.negated()
    } else {
        cur.eat('+');
        term(cur)?
    };
    loop {
        if cur.eat('+') {
            acc = acc.plus(&term(cur)?);
        } else if cur.eat('-') {
            acc = acc.minus(&term(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn term(cur: &mut Cursor) -> Result<Polynomial2> {
    let mut acc = factor(cur)?;
    loop {
        if cur.eat('*') {
            acc = acc.times(&factor(cur)?);
        } else if matches!(cur.peek(), Some('x' | 'y' | '('))
            || cur.peek().is_some_and(|c| c.is_ascii_digit())
        {
            acc = acc.times(&factor(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn factor(cur: &mut Cursor) -> Result<Polynomial2> {
    let base = match cur.peek() {
        Some(c @ ('x' | 'y')) => {
            cur.pos += 1;
            variable(c)
        }
        Some('(') => {
            cur.pos += 1;
            let inner = expr(cur)?;
            cur.expect(')')?;
            inner
        }
        Some(c) if c.is_ascii_digit() => Polynomial2::constant(cur.number()?),
        _ => return Err(cur.error("number, 'x', 'y' or '('")),
    };
    if cur.eat('^') {
        let e = if cur.eat('(') {
            let e = cur.small_exponent()?;
            cur.expect(')')?;
            e
        } else {
            cur.small_exponent()?
        };
        Ok(base.pow(e))
    } else {
        Ok(base)
    }
}

/// Parses a polynomial germ; rejects a nonzero constant term and the zero polynomial.
pub fn parse_germ(text: &str) -> Result<Polynomial2> {
    let mut cur = Cursor::new(text);
    let f = expr(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("'+', '-', '*' or end of input"));
    }
    if f.is_zero() {
        return Err(Error::NotAGerm("the zero polynomial".into()));
    }
    let c = f.coeff(0, 0);
    if !c.is_zero() {
        return Err(Error::NotAGerm(format!(
            "constant term {}",
            fmt_rational(&c)
        )));
    }
    Ok(f)
}

fn series_exponent(cur: &mut Cursor) -> Result<ExactRational> {
    if cur.eat('(') {
        let e = cur.number()?;
        cur.expect(')')?;
        Ok(e)
    } else {
        Ok(BigRational::from_integer(cur.integer()?))
    }
}

/// One monomial `[c][*]v[^e]` or a bare number.
fn series_term(cur: &mut Cursor, var: char) -> Result<(ExactRational, ExactRational)> {
    let coefficient = if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        let c = cur.number()?;
        if cur.peek() != Some(var) && !cur.eat('*') {
            return Ok((int(0), c));
        }
        c
    } else {
        int(1)
    };
    if cur.peek() != Some(var) {
        return Err(cur.error(&format!("'{var}'")));
    }
    cur.pos += 1;
    let exponent = if cur.eat('^') {
        series_exponent(cur)?
    } else {
        int(1)
    };
    Ok((exponent, coefficient))
}

/// Parses `y = <series in x> [x>0|x<0]` or `x = <series in y> [y>0|y<0]`;
/// the marker defaults to the positive side.
pub fn parse_arc(text: &str) -> Result<Arc> {
    let mut cur = Cursor::new(text);
    let graph = match cur.peek() {
        Some(c @ ('x' | 'y')) => {
            cur.pos += 1;
            c
        }
        _ => return Err(cur.error("'x' or 'y'")),
    };
    cur.expect('=')?;
    let var = if graph == 'y' { 'x' } else { 'y' };
    let mut terms: Vec<(ExactRational, ExactRational)> = Vec::new();
    let mut negative = cur.eat('-');
    if !negative {
        cur.eat('+');
    }
    loop {
        let (e, c) = series_term(&mut cur, var)?;
        terms.push((e, if negative { -c } else { c }));
        if cur.eat('+') {
            negative = false;
        } else if cur.eat('-') {
            negative = true;
        } else {
            break;
        }
    }
    let side = if cur.eat('[') {
        let start = cur.pos;
        while cur.peek().is_some_and(|c| c != ']') {
            cur.pos += 1;
        }
        let marker: String = cur.chars[start..cur.pos]
            .iter()
            .filter(|c| !c.is_whitespace())
            .collect();
        let side = Side::from_marker(&marker)
            .filter(|s| s.variables().1.starts_with(var))
            .ok_or_else(|| Error::Parse {
                position: start,
                expected: format!("'{var}>0' or '{var}<0'"),
            })?;
        cur.expect(']')?;
        side
    } else if var == 'x' {
        Side::XPlus
    } else {
        Side::YPlus
    };
    if !cur.at_end() {
        return Err(cur.error("end of input"));
    }
    let series = PuiseuxSeries::from_terms(
        terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, Scalar::Rat(c))),
    );
    if let Some((e, _)) = series.leading() {
        if e < &int(1) {
            return Err(Error::ExponentBelowOne(fmt_rational(e)));
        }
    }
    Arc::new(side, signed_to_side(side, &series))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn germs() {
        let cusp = parse_germ("y^2 - x^3").unwrap();
        assert_eq!(cusp.to_text(), "-x^3 + y^2");
        assert_eq!(
            parse_germ("x*y").unwrap(),
            Polynomial2::x().times(&Polynomial2::y())
        );
        assert_eq!(
            parse_germ("1/2*x^2 - 3 y").unwrap().to_text(),
            "1/2*x^2 - 3*y"
        );
        assert_eq!(parse_germ("x*(y^2-x^3)").unwrap().to_text(), "-x^4 + x*y^2");
        assert!(matches!(parse_germ("1 + x"), Err(Error::NotAGerm(_))));
        assert!(matches!(parse_germ("x - x"), Err(Error::NotAGerm(_))));
        assert!(matches!(
            parse_germ("x + * y"),
            Err(Error::Parse { position: 4, .. })
        ));
        assert!(matches!(parse_germ("x +"), Err(Error::Parse { .. })));
    }

    #[test]
    fn printing_round_trips() {
        for text in ["-x^3 + y^2", "x*y", "1/3*x^5 - 2*x*y^3 + y^4", "-x^2"] {
            assert_eq!(parse_germ(text).unwrap().to_text(), text);
        }
    }

    #[test]
    fn arcs() {
        let a = parse_arc("y = x^(3/2) [x>0]").unwrap();
        assert_eq!(a.side(), Side::XPlus);
        assert_eq!(a.series().coefficient(&rat(3, 2)), Scalar::from_int(1));
        let a = parse_arc("y = 0 [x>0]").unwrap();
        assert!(a.series().is_empty());
        let a = parse_arc("y = x^(1/2) + x [x>0]");
        assert!(matches!(a, Err(Error::ExponentBelowOne(_))));
        let a = parse_arc("x = -2*y^2 + 1/3 y^(5/3) [y<0]").unwrap();
        assert_eq!(a.side(), Side::YMinus);
        // On y < 0, y^(5/3) = -|y|^(5/3).
        assert_eq!(a.series().coefficient(&rat(5, 3)), Scalar::Rat(rat(-1, 3)));
        assert_eq!(a.series().coefficient(&int(2)), Scalar::from_int(-2));
        assert_eq!(a.to_text(), "x = 1/3*y^(5/3) - 2*y^2 [y<0]");
        assert!(matches!(parse_arc("y = x [y>0]"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_arc("y = 1 [x>0]"),
            Err(Error::ExponentBelowOne(_))
        ));
    }
}
