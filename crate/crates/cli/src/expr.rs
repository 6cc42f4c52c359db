//! Polynomial expressions: rationals, `x1..xd`, `+ - * ^` and parentheses.
//!
//! Rendering goes through `Poly`'s `Display`, which emits this grammar, so
//! `parse(render(p)) == p`.

use gradsym::algebra::Poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |column: usize, message: String| ExprError { column: column + 1, message };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((start, Tok::Num(digits.parse().expect("ascii digits"))));
                continue;
            }
            'x' => {
                i += 1;
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[s..i].iter().collect();
                let idx: usize = digits.parse().map_err(|_| err(start, "expected a variable index after 'x'".into()))?;
                if idx == 0 {
                    return Err(err(start, "variables are numbered from x1".into()));
                }
                out.push((start, Tok::Var(idx - 1)));
                continue;
            }
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(err(start, format!("unexpected character '{other}'"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    nvars: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c) + 1
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { column: self.column(), message: message.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Star) {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ExprError> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.unary()?);
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ExprError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return self.fail("expected a non-negative integer exponent");
            };
            self.pos += 1;
            let Ok(n) = u32::try_from(n) else {
                return self.fail("exponent too large");
            };
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut q = BigRational::from_integer(n);
                if self.eat(&Tok::Slash) {
                    let Some(Tok::Num(den)) = self.peek().cloned() else {
                        return self.fail("expected a denominator");
                    };
                    if den.is_zero() {
                        return self.fail("division by zero");
                    }
                    self.pos += 1;
                    q /= BigRational::from_integer(den);
                }
                Ok(Poly::constant(self.nvars, q))
            }
            Some(Tok::Var(i)) => {
                if i >= self.nvars {
                    return self.fail(format!("x{} is out of range for dimension {}", i + 1, self.nvars));
                }
                self.pos += 1;
                Ok(Poly::var(self.nvars, i).expect("checked range"))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.fail("expected ')'");
                }
                Ok(inner)
            }
            Some(_) => self.fail("expected a number, a variable or '('"),
            None => self.fail("unexpected end of expression"),
        }
    }
}

/// Parses a polynomial in `nvars` variables.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, nvars, end: text.chars().count() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(out)
}

/// Parses a rational constant such as `-3/2`.
pub fn parse_rational(text: &str) -> Result<BigRational, ExprError> {
    let p = parse_poly(text, 0)?;
    Ok(p.as_constant().unwrap_or_else(BigRational::zero))
}

pub fn render_poly(p: &Poly) -> String {
    p.to_string()
}
