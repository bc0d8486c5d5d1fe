//! A small recursive-descent reader for polynomial expressions such as
//! `(2*eps2+1)*n^2 - 1/2*s`. Division is only allowed by constants.

use std::str::FromStr;

use num_bigint::BigInt;

use super::{AlgebraError, MPoly, Rat};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(digits.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse {
                pos: i,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    // expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<MPoly, AlgebraError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    // term := power (('*'|'/') power)*
    fn term(&mut self) -> Result<MPoly, AlgebraError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                let c = d
                    .constant_value()
                    .ok_or_else(|| self.err("division by a non-constant"))?;
                if c.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    // power := atom ['^' integer]
    fn power(&mut self) -> Result<MPoly, AlgebraError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    self.at += 1;
                    let e: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.at += 1;
                Ok(MPoly::constant(Rat::from_bigint(k)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(MPoly::var(&name))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(Tok::Op('-')) => {
                self.at += 1;
                Ok(self.power()?.neg())
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

impl FromStr for MPoly {
    type Err = AlgebraError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let toks = lex(src)?;
        let mut p = Parser {
            toks,
            at: 0,
            len: src.len(),
        };
        let out = p.expr()?;
        if p.at != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let a: MPoly = "1 + 2*x^2".parse().unwrap();
        let b: MPoly = "2*x*x + 1".parse().unwrap();
        assert_eq!(a, b);
        let c: MPoly = "-(x - 1)^2".parse().unwrap();
        assert_eq!(c, "-x^2 + 2*x - 1".parse().unwrap());
        let d: MPoly = "(b+1)^2/4".parse().unwrap();
        assert_eq!(d, "1/4*b^2 + 1/2*b + 1/4".parse().unwrap());
    }

    #[test]
    fn errors() {
        assert!("x/y".parse::<MPoly>().is_err());
        assert!("x +".parse::<MPoly>().is_err());
        assert!("(x".parse::<MPoly>().is_err());
        assert!("x^y".parse::<MPoly>().is_err());
        assert!("x $ 1".parse::<MPoly>().is_err());
        assert!("1/0".parse::<MPoly>().is_err());
    }
}
