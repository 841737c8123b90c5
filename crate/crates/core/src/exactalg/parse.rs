//! Text form of exact objects.
//!
//! Accepts ordinary infix expressions in one variable, e.g.
//! `(3*x^3 - 20*x + 20)*(2x-5)^2/(12*(x-1)^5)`. Integer and decimal
//! literals are exact; `^` takes an integer exponent.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&text)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in \"{s}\"")));
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad number literal \"{text}\""));
    match text.split_once('.') {
        None => Ok(BigRational::from_integer(BigInt::from_str(text).map_err(|_| bad())?)),
        Some((int, fr)) => {
            if fr.contains('.') || (int.is_empty() && fr.is_empty()) {
                return Err(bad());
            }
            let digits = format!("{int}{fr}");
            let n = BigInt::from_str(&digits).map_err(|_| bad())?;
            let d = BigInt::from(10).pow(fr.len() as u32);
            Ok(BigRational::new(n, d))
        }
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    var: Option<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| Error::Parse("division by zero".into()))?;
                }
                Some(Tok::Op('(')) | Some(Tok::Ident(_)) => {
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let mut sign = 1i32;
            if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                sign = -1;
            }
            let e = match self.next() {
                Some(Tok::Num(n)) if n.denom().is_one() => n
                    .numer()
                    .try_into()
                    .map_err(|_| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("exponent must be an integer".into())),
            };
            let e: i32 = e;
            return base
                .pow(sign * e)
                .map_err(|_| Error::Parse("zero raised to a negative power".into()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(RatFunc::constant(n)),
            Some(Tok::Ident(name)) => {
                match &self.var {
                    Some(v) if v != &name => {
                        return Err(Error::Parse(format!(
                            "expression mixes variables '{v}' and '{name}'"
                        )))
                    }
                    _ => self.var = Some(name),
                }
                Ok(RatFunc::x())
            }
            Some(Tok::Op('(')) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::Op(')')) => Ok(inner),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a rational function in a single variable (any identifier).
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        var: None,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in \"{s}\"")));
    }
    Ok(out)
}

/// Parse an exact rational written as `p`, `p/q`, or a decimal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let f = parse_ratfunc(s)?;
    if !f.is_constant() {
        return Err(Error::Parse(format!("\"{s}\" is not a constant")));
    }
    Ok(if f.is_zero() { BigRational::zero() } else { f.num().coeff(0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::q;
    use crate::exactalg::poly::Poly;

    #[test]
    fn parses_quintic_both_forms() {
        let a = parse_ratfunc("(3*x^3-20*x+20)*(2*x-5)^2/(12*(x-1)^5)").unwrap();
        let b = parse_ratfunc("1 - (5x-8)^3/(12(x-1)^5)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn text_round_trip() {
        let f = parse_ratfunc("-(w^12-33w^8-33w^4+1)^2/(108 w^4 (w^4-1)^4)").unwrap();
        let back = parse_ratfunc(&f.to_string()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn rationals_and_errors() {
        assert_eq!(parse_rational("-1/9").unwrap(), q(-1, 9));
        assert_eq!(parse_rational("80/3").unwrap(), q(80, 3));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert!(parse_rational("x").is_err());
        assert!(parse_ratfunc("x + y").is_err());
        assert!(parse_ratfunc("(x").is_err());
        assert!(parse_ratfunc("1/(x-x)").is_err());
        assert_eq!(parse_ratfunc("x^-2").unwrap().den(), &Poly::from_ints(&[0, 0, 1]));
    }
}
