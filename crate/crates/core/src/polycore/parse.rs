use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::field::Rationals;
use super::order::MonomialOrder;
use super::poly::{Polynomial, QPoly};
use super::varset::VarSet;

/// Parse failure with a byte offset into the input text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { bytes: text.as_bytes(), pos: 0 }
    }

    fn next_token(&mut self) -> Result<(usize, Tok), ParseError> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if self.pos >= self.bytes.len() {
            return Ok((start, Tok::End));
        }
        let c = self.bytes[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.bytes.len() && self.bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.bytes[self.pos..end]).unwrap();
                let n: BigInt = s.parse().unwrap();
                self.pos = end;
                return Ok((start, Tok::Num(n)));
            }
            _ if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos;
                while end < self.bytes.len()
                    && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
                {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.bytes[self.pos..end]).unwrap().to_string();
                self.pos = end;
                return Ok((start, Tok::Ident(s)));
            }
            _ => {
                return err(start, format!("unexpected character {:?}", c as char));
            }
        };
        self.pos += 1;
        Ok((start, tok))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: Arc<VarSet>,
    order: MonomialOrder,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn offset(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.checked_add(&t).unwrap();
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.checked_sub(&t).unwrap();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let f = self.power()?;
                    acc = acc.checked_mul(&f).unwrap();
                }
                Tok::Slash => {
                    let at = self.offset();
                    self.bump();
                    let f = self.power()?;
                    match f.constant_value() {
                        Some(c) if !c.is_zero() => {
                            let inv = BigRational::new(
                                c.denom().clone(),
                                c.numer().clone(),
                            );
                            acc = acc.scale(&inv);
                        }
                        Some(_) => return err(at, "division by zero"),
                        None => return err(at, "division by a non-constant polynomial"),
                    }
                }
                // juxtaposition multiplies: 2x, 3(x+1), x y
                Tok::Num(_) | Tok::Ident(_) | Tok::LParen => {
                    let f = self.power()?;
                    acc = acc.checked_mul(&f).unwrap();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<QPoly, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            match self.bump().1 {
                Tok::Num(n) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| ParseError {
                            offset: at,
                            message: "exponent too large".into(),
                        })?;
                    Ok(base.pow(e))
                }
                _ => err(at, "expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<QPoly, ParseError> {
        let at = self.offset();
        match self.bump().1 {
            Tok::Num(n) => Ok(Polynomial::constant(
                Rationals,
                self.vars.clone(),
                self.order.clone(),
                BigRational::from_integer(n),
            )),
            Tok::Ident(name) => match self.vars.index_of(&name) {
                Some(i) => Ok(QPoly::var(Rationals, self.vars.clone(), self.order.clone(), i)),
                None => err(at, format!("unknown variable `{name}`")),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let at2 = self.offset();
                match self.bump().1 {
                    Tok::RParen => Ok(inner),
                    _ => err(at2, "expected `)`"),
                }
            }
            Tok::End => err(at, "unexpected end of input"),
            t => err(at, format!("unexpected token {t:?}")),
        }
    }
}

/// Parse a polynomial expression over the given variables.
///
/// Syntax: `+ - * / ^` with `*` optional by juxtaposition, `/` only by a
/// nonzero constant, `^` with a nonnegative integer exponent.
pub fn parse(text: &str, vars: &Arc<VarSet>, order: &MonomialOrder) -> Result<QPoly, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let (off, tok) = lexer.next_token()?;
        let done = tok == Tok::End;
        toks.push((off, tok));
        if done {
            break;
        }
    }
    let mut p = Parser { toks, at: 0, vars: vars.clone(), order: order.clone() };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return err(p.offset(), format!("unexpected token {:?}", p.peek()));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::super::qi;
    use super::*;

    fn vars_xy() -> Arc<VarSet> {
        VarSet::new(vec!["x", "y"])
    }

    fn p(text: &str) -> QPoly {
        parse(text, &vars_xy(), &MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn parses_basic_arithmetic() {
        assert_eq!(p("x + y"), p("y + x"));
        assert_eq!(p("(x+y)*(x-y)"), p("x^2 - y^2"));
        assert_eq!(p("2x"), p("x + x"));
        assert_eq!(p("x y"), p("x*y"));
        assert_eq!(p("3(x+1)"), p("3x + 3"));
        assert_eq!(p("-x^2"), p("0 - x^2"));
        assert_eq!(p("x^2y"), p("x^2 * y"));
    }

    #[test]
    fn parses_rational_coefficients() {
        let half_x = p("x/2");
        assert_eq!(*half_x.leading_coef().unwrap(), qi(1) / qi(2));
        assert_eq!(p("1/2 x"), half_x);
        assert_eq!(p("x/2 + x/2"), p("x"));
    }

    #[test]
    fn rejects_malformed_input() {
        let vars = vars_xy();
        let e = parse("x + z", &vars, &MonomialOrder::GrevLex).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.message.contains("unknown variable"));
        assert!(parse("x /", &vars, &MonomialOrder::GrevLex).is_err());
        assert!(parse("x / y", &vars, &MonomialOrder::GrevLex).is_err());
        assert!(parse("x ^ y", &vars, &MonomialOrder::GrevLex).is_err());
        assert!(parse("(x", &vars, &MonomialOrder::GrevLex).is_err());
        assert!(parse("x + ", &vars, &MonomialOrder::GrevLex).is_err());
        assert!(parse("x % y", &vars, &MonomialOrder::GrevLex).is_err());
    }
}
