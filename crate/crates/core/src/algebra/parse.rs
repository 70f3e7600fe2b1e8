//! Text grammar for rational functions in `x` and `y`.
//!
//! ```text
//! expr   = term (("+" | "-") term)*
//! term   = factor (("*" | "/") factor)*
//! factor = ("+" | "-") factor | power
//! power  = atom ("^" uint)?
//! atom   = uint | "x" | "y" | "(" expr ")"
//! ```
//!
//! Whitespace is ignored between tokens.

use std::str::FromStr;

use num_bigint::BigInt;

use super::ratfunc::RationalFunction;
use super::Rational;
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 200;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add_ref(&rhs) } else { acc.sub_ref(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.factor()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if c == b'*' {
                acc.mul_ref(&rhs)
            } else {
                acc.div_ref(&rhs)
                    .map_err(|_| Error::parse(at, "division by zero"))?
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.nested(|p| p.factor()).map(|v| v.neg_ref())
            }
            Some(b'+') => {
                self.pos += 1;
                self.nested(|p| p.factor())
            }
            _ => self.power(),
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::parse(self.pos, "expression nested too deeply"));
        }
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(Error::parse(at, "expected a nonnegative integer exponent"));
            }
            let e: u32 = digits
                .parse()
                .map_err(|_| Error::parse(at, "exponent too large"))?;
            if base.is_zero() && e == 0 {
                return Ok(RationalFunction::one());
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let at = self.pos;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RationalFunction::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(RationalFunction::y())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.nested(|p| p.expr())?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = BigInt::from_str(self.digits()).expect("digits parse");
                Ok(RationalFunction::from_poly(super::IntPoly::constant(n)))
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("unexpected character '{}'", c as char),
            )),
            None => Err(Error::parse(at.max(self.pos), "unexpected end of input")),
        }
    }
}

/// Parses a rational function from the text grammar.
pub fn parse_ratfunc(s: &str) -> Result<RationalFunction> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let v = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(Error::parse(
            p.pos,
            format!("unexpected character '{}'", c as char),
        ));
    }
    Ok(v)
}

/// Parses an exact rational such as `-3/4` or `7`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let body = t.strip_prefix('+').unwrap_or(t);
    let ok = !body.is_empty()
        && body
            .bytes()
            .all(|b| b.is_ascii_digit() || b == b'-' || b == b'/');
    if !ok {
        return Err(Error::parse(0, format!("invalid rational '{s}'")));
    }
    let r = Rational::from_str(body).map_err(|_| Error::parse(0, format!("invalid rational '{s}'")))?;
    Ok(r)
}

#[cfg(test)]
pub(crate) fn parse_poly_int(s: &str) -> super::IntPoly {
    let rf = parse_ratfunc(s).unwrap();
    assert!(rf.den().is_one(), "not an integer polynomial: {s}");
    rf.num().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(parse_ratfunc("-x^2").unwrap().to_string(), "-x^2");
        assert_eq!(parse_ratfunc("2*x+3*y").unwrap().to_string(), "2*x+3*y");
        assert_eq!(parse_ratfunc("1 - - 1").unwrap(), RationalFunction::from_int(2));
        assert_eq!(parse_ratfunc("x/y/x").unwrap(), parse_ratfunc("1/y").unwrap());
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(
            parse_ratfunc(" ( x + 1 ) ^ 2 ").unwrap(),
            parse_ratfunc("x^2+2*x+1").unwrap()
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_ratfunc("x +"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("x^-1"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_ratfunc("2x"), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_ratfunc("(x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("z"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_ratfunc("1/(x-x)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "x", "-x/(2*y)", "(x+1)/(x-1)", "y/3", "(x^2+y^2-1)/(7*x*y)", "-5/3"] {
            let v = parse_ratfunc(s).unwrap();
            assert_eq!(parse_ratfunc(&v.to_string()).unwrap(), v, "{s}");
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/4").unwrap(), Rational::new((-3).into(), 4.into()));
        assert_eq!(parse_rational(" 1/3 ").unwrap(), Rational::new(1.into(), 3.into()));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
