//! A small infix parser for polynomial and rational-function literals.
//!
//! Grammar: `+ - * / ^`, parentheses, integer and decimal literals, registry
//! names, `sqrt(n)` for an integer `n`, and `I` for the imaginary unit.
//! Exponents are (possibly negative) integers.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && i + 1 < cs.len() && cs[i + 1].is_ascii_digit()) {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{}`", c)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    reg: &'a Registry,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, c: char) -> Result<()> {
        if self.eat_op(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{}`", c)))
        }
    }

    fn expr<C: Coeff>(&mut self) -> Result<RatFunc<C>> {
        let mut acc = self.term::<C>()?;
        loop {
            if self.eat_op('+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat_op('-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> Result<RatFunc<C>> {
        let mut acc = self.unary::<C>()?;
        loop {
            if self.eat_op('*') {
                acc = acc.checked_mul(&self.unary()?)?;
            } else if self.eat_op('/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<C: Coeff>(&mut self) -> Result<RatFunc<C>> {
        if self.eat_op('-') {
            return Ok(-self.unary::<C>()?);
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn int_literal(&mut self) -> Result<i64> {
        let neg = self.eat_op('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let v: i64 = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("expected integer, got `{}`", n)))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Parse("expected integer".to_string())),
        }
    }

    fn power<C: Coeff>(&mut self) -> Result<RatFunc<C>> {
        let base = self.atom::<C>()?;
        if self.eat_op('^') {
            let paren = self.eat_op('(');
            let e = self.int_literal()?;
            if paren {
                self.expect_op(')')?;
            }
            if e >= 0 {
                Ok(base.pow(e as u32))
            } else {
                RatFunc::one(self.reg).checked_div(&base.pow((-e) as u32))
            }
        } else {
            Ok(base)
        }
    }

    fn atom<C: Coeff>(&mut self) -> Result<RatFunc<C>> {
        match self.peek().cloned() {
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let r: Rational = n.parse().map_err(|_| Error::Parse(format!("bad number `{}`", n)))?;
                Ok(RatFunc::from_rational(self.reg, r))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "sqrt" && self.reg.index_of("sqrt").is_none() {
                    self.expect_op('(')?;
                    let n = self.int_literal()?;
                    self.expect_op(')')?;
                    let c = C::sqrt_of(n)
                        .ok_or_else(|| Error::Parse(format!("sqrt({}) not in coefficient field", n)))?;
                    return Ok(RatFunc::constant(self.reg, c));
                }
                if name == "I" && self.reg.index_of("I").is_none() {
                    let c = C::sqrt_of(-1)
                        .ok_or_else(|| Error::Parse("I not in coefficient field".to_string()))?;
                    return Ok(RatFunc::constant(self.reg, c));
                }
                let i = self.reg.require(&name)?;
                Ok(RatFunc::var(self.reg, i))
            }
            other => Err(Error::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

/// Parses a rational-function expression over `reg`.
pub fn parse_ratfunc<C: Coeff>(reg: &Registry, s: &str) -> Result<RatFunc<C>> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
        reg,
    };
    let e = p.expr::<C>()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{}`", s)));
    }
    Ok(e)
}

/// Parses a polynomial expression; division is allowed only by constants.
pub fn parse_poly<C: Coeff>(reg: &Registry, s: &str) -> Result<Poly<C>> {
    parse_ratfunc::<C>(reg, s)?
        .to_poly()
        .ok_or_else(|| Error::Parse(format!("`{}` is not a polynomial", s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Surd;

    #[test]
    fn parses_polynomials() {
        let r = Registry::new(&["x", "y"], &["d"]);
        let p: Poly = parse_poly(&r, "(x + y)^2 - 2*x*y - 3/4*d").unwrap();
        assert_eq!(alloc::format!("{}", p), "x^2 + y^2 - 3/4*d");
        let f: RatFunc = parse_ratfunc(&r, "x/(x*y) - y^-1").unwrap();
        assert!(f.is_zero() || f == RatFunc::zero(&r));
    }

    #[test]
    fn parses_radicals() {
        let r = Registry::new(&["x"], &[]);
        let p: Poly<Surd> = parse_poly(&r, "(63 + 46*I*sqrt(6))/33*x").unwrap();
        let c = p.coeff(&crate::poly::Monomial::var(0));
        assert_eq!(c.im(), Surd::sqrt_times(Rational::new(46, 33), 6));
        assert!(parse_poly::<Rational>(&r, "sqrt(2)*x").is_err());
    }
}
