//! Text syntax for rational functions.
//!
//! Integer literals, the variable `x`, `+ - * /`, `^` with a positive
//! integer literal exponent, and parentheses. Whitespace is ignored.

use num_bigint::BigInt;
use thiserror::Error;

use super::{RatFun, RatFunError};
use crate::exactalg::{Poly, Rational};

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X,
    Op(char),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(value)));
            }
            'x' => {
                out.push((i, Tok::X));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push((i, Tok::Op(c)));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            _ => return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character '{c}'") }),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).map_err(|e| match e {
                    RatFunError::ZeroDenominator => ParseError::ZeroDenominator,
                    other => unreachable!("division only fails on zero: {other}"),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFun, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFun, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let Some(Tok::Int(e)) = self.peek().cloned() else {
            return self.err("exponent must be a positive integer literal");
        };
        let e: u32 = match u32::try_from(e) {
            Ok(e) if (1..=MAX_EXPONENT).contains(&e) => e,
            _ => return self.err("exponent out of range"),
        };
        self.pos += 1;
        if self.peek() == Some(&Tok::Op('^')) {
            return self.err("chained exponents need parentheses");
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<RatFun, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(RatFun::constant(Rational::from_integer(v)))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(RatFun::from_poly(Poly::x()))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, 'x' or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_ratfun(text: &str) -> Result<RatFun, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0, end: text.len() };
    let value = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.err("trailing input");
    }
    Ok(value)
}
