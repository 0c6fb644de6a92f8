//! Reader for the polynomial text grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' nat)?
//! atom   := integer | 'g' | var | '(' expr ')'
//! ```
//!
//! `g` denotes the field generator and is only recognised when no variable
//! is called `g`; it must carry an exponent. Variable names are a letter
//! followed by optional digits, so `xyz` reads as `x*y*z` and `x0x1` as
//! `x0*x1`.

use super::field::FieldSpec;
use super::poly::{Polynomial, Vars};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Int(s)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Ident(s)));
            }
            '+' | '-' | '*' | '^' | '(' | ')' => {
                out.push((
                    pos,
                    match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '^' => Tok::Caret,
                        '(' => Tok::LParen,
                        _ => Tok::RParen,
                    },
                ));
                i += 1;
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: &'a Vars,
    field: &'a FieldSpec,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.field, self.vars);
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => self.at += 1,
            Some(Tok::Minus) => {
                self.at += 1;
                negate = true;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    negate = false;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.at += 1;
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                let e = s.parse::<u32>().ok().filter(|&e| e <= u16::MAX as u32);
                match e {
                    Some(e) => {
                        self.at += 1;
                        Ok(Some(e))
                    }
                    None => self.err(format!("exponent `{s}` too large")),
                }
            }
            _ => self.err("expected a natural-number exponent after `^`"),
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let f = self.field;
        let pos = self.pos();
        let base = match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                self.at += 1;
                // reduce digit by digit so long literals never overflow
                let p = f.p() as u64;
                let r = s.bytes().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Polynomial::constant(f, self.vars, f.from_int(r as i64))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Polynomial::var(f, self.vars, i)
                } else if name == "g" {
                    match self.exponent()? {
                        Some(e) => return Ok(Polynomial::constant(f, self.vars, f.gen_pow(e as u64))),
                        None => return Err(Error::BadCoefficient("g without exponent".into())),
                    }
                } else {
                    return Err(Error::UnknownVariable(name));
                }
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                e
            }
            Some(t) => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected token {t:?}"),
                })
            }
            None => {
                return Err(Error::Parse {
                    pos,
                    msg: "unexpected end of input".into(),
                })
            }
        };
        Ok(match self.exponent()? {
            Some(e) => base.pow(e),
            None => base,
        })
    }
}

/// Parse `text` as a polynomial in `vars` over `field`.
pub fn parse(text: &str, vars: &Vars, field: &FieldSpec) -> Result<Polynomial> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        at: 0,
        end: text.len(),
        vars,
        field,
    };
    if parser.peek().is_none() {
        return parser.err("empty expression");
    }
    let p = parser.expr()?;
    if parser.at != parser.toks.len() {
        return parser.err("trailing input");
    }
    Ok(p)
}
