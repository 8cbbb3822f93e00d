//! Parser for class expressions such as `P2 - pt`, `2*Gm^2` or
//! `(P1 - pt)*(P1 - pt)`.

use num_bigint::BigInt;

use super::VirtualClass;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Int(s.parse().expect("digits")));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::input(format!(
                    "unexpected character `{other}` in class expression `{src}`"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, what: &str) -> Error {
        Error::input(format!("{what} in class expression `{}`", self.src))
    }

    fn expr(&mut self) -> Result<VirtualClass> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<VirtualClass> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<VirtualClass> {
        let base = match self.next() {
            Some(Token::Int(n)) => VirtualClass::integer(n),
            Some(Token::Ident(name)) => VirtualClass::atom(&name),
            Some(Token::Open) => {
                let inner = self.expr()?;
                if self.next() != Some(Token::Close) {
                    return Err(self.err("missing `)`"));
                }
                inner
            }
            _ => return Err(self.err("expected a number, atom or `(`")),
        };
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Int(k)) => {
                    let k: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(self.err("expected an exponent after `^`")),
            }
        }
        Ok(base)
    }
}

pub fn parse_class(src: &str) -> Result<VirtualClass> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err(Error::input("empty class expression"));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        src,
    };
    let c = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums_and_products() {
        let c = parse_class("2*Gm^2 - pt + (P1 - pt)*(P1 - pt)").unwrap();
        let expected = VirtualClass::atom("Gm")
            .pow(2)
            .scale(&BigInt::from(2))
            .sub(&VirtualClass::atom("pt"))
            .add(
                &VirtualClass::atom("P1")
                    .sub(&VirtualClass::atom("pt"))
                    .pow(2),
            );
        assert_eq!(c, expected);
    }

    #[test]
    fn leading_minus_and_errors() {
        assert_eq!(parse_class("-pt").unwrap(), VirtualClass::atom("pt").neg());
        assert!(parse_class("P1 +").is_err());
        assert!(parse_class("(P1").is_err());
        assert!(parse_class("P1 $").is_err());
        assert!(parse_class("").is_err());
    }
}
