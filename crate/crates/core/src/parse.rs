//! Rational expressions in text form.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" INTEGER)*
//! atom   := INTEGER | IDENT | "(" expr ")"
//! ```

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::arith::{Poly, RatFunc, Rational, Var};
use crate::field::FieldContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Integer,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset into the source.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    BadExponent,
    ImplicitMultiplication,
    DivisionByZero,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`")?,
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`")?,
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of expression")?,
            ParseErrorKind::UnknownIdentifier(n) => write!(f, "unknown identifier `{n}`")?,
            ParseErrorKind::BadExponent => {
                write!(f, "exponent must be a nonnegative integer literal")?
            }
            ParseErrorKind::ImplicitMultiplication => {
                write!(f, "implicit multiplication is not allowed; use `*`")?
            }
            ParseErrorKind::DivisionByZero => write!(f, "division by zero")?,
        }
        write!(f, " at byte {}", self.position)
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => TokenKind::Plus,
            b'-' => TokenKind::Minus,
            b'*' => TokenKind::Star,
            b'/' => TokenKind::Slash,
            b'^' => TokenKind::Caret,
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token {
                    kind: TokenKind::Integer,
                    lexeme: src[start..i].to_string(),
                    position: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    kind: TokenKind::Identifier,
                    lexeme: src[start..i].to_string(),
                    position: start,
                });
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(ch),
                    position: start,
                });
            }
        };
        out.push(Token {
            kind,
            lexeme: (c as char).to_string(),
            position: start,
        });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    resolve: &'a dyn Fn(&str) -> Option<Var>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        let position = self.peek().map(|t| t.position).unwrap_or(self.end);
        ParseError { kind, position }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                kind: ParseErrorKind::UnexpectedToken(t.lexeme.clone()),
                position: t.position,
            },
            None => self.err_here(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn eat(&mut self, kind: TokenKind) -> Option<Token> {
        if self.peek().map(|t| t.kind) == Some(kind) {
            self.pos += 1;
            Some(self.tokens[self.pos - 1].clone())
        } else {
            None
        }
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(TokenKind::Plus).is_some() {
                acc = acc.add(&self.term()?);
            } else if self.eat(TokenKind::Minus).is_some() {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(TokenKind::Star).is_some() {
                acc = acc.mul(&self.unary()?);
            } else if let Some(slash) = self.eat(TokenKind::Slash) {
                let at = self.peek().map(|t| t.position).unwrap_or(slash.position);
                let rhs = self.unary()?;
                acc = acc.div(&rhs).map_err(|_| ParseError {
                    kind: ParseErrorKind::DivisionByZero,
                    position: at,
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        if self.eat(TokenKind::Minus).is_some() {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let mut base = self.atom()?;
        while self.eat(TokenKind::Caret).is_some() {
            let Some(tok) = self.eat(TokenKind::Integer) else {
                return Err(self.err_here(ParseErrorKind::BadExponent));
            };
            let e: u32 = tok.lexeme.parse().map_err(|_| ParseError {
                kind: ParseErrorKind::BadExponent,
                position: tok.position,
            })?;
            base = base.pow(e);
        }
        if matches!(
            self.peek().map(|t| t.kind),
            Some(TokenKind::Identifier | TokenKind::Integer | TokenKind::LParen)
        ) {
            return Err(self.err_here(ParseErrorKind::ImplicitMultiplication));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err_here(ParseErrorKind::UnexpectedEnd));
        };
        match tok.kind {
            TokenKind::Integer => {
                self.pos += 1;
                let n: BigInt = tok.lexeme.parse().expect("digit string");
                Ok(RatFunc::constant(Rational::from_integer(n)))
            }
            TokenKind::Identifier => {
                self.pos += 1;
                match (self.resolve)(&tok.lexeme) {
                    Some(v) => Ok(RatFunc::var(v)),
                    None => Err(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(tok.lexeme),
                        position: tok.position,
                    }),
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.eat(TokenKind::RParen).is_none() {
                    return Err(self.unexpected());
                }
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses with a caller-supplied name resolver.
pub fn parse_expr_with(
    src: &str,
    resolve: &dyn Fn(&str) -> Option<Var>,
) -> Result<RatFunc, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: src.len(),
        resolve,
    };
    let f = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(f)
}

/// Parses an expression whose identifiers are variables of `ctx` (including adjoined ones).
pub fn parse_expr(src: &str, ctx: &FieldContext) -> Result<RatFunc, ParseError> {
    parse_expr_with(src, &|name| ctx.resolve(name))
}

fn write_rational(out: &mut String, c: &Rational) {
    if c.is_integer() {
        write!(out, "{}", c.numer()).unwrap();
    } else {
        write!(out, "{}/{}", c.numer(), c.denom()).unwrap();
    }
}

/// Serializes a polynomial with the given variable names; terms in descending graded-lex
/// order.
pub fn format_poly_with(p: &Poly, name: &dyn Fn(Var) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        if m.is_one() {
            write_rational(&mut out, &a);
            continue;
        }
        if !a.is_one() {
            write_rational(&mut out, &a);
            out.push('*');
        }
        for (j, (v, e)) in m.vars().enumerate() {
            if j > 0 {
                out.push('*');
            }
            out.push_str(&name(v));
            if e > 1 {
                write!(out, "^{e}").unwrap();
            }
        }
    }
    out
}

pub fn format_expr_with(f: &RatFunc, name: &dyn Fn(Var) -> String) -> String {
    let num = format_poly_with(f.num(), name);
    if f.den().is_one() {
        return num;
    }
    format!("({})/({})", num, format_poly_with(f.den(), name))
}

pub fn format_expr(f: &RatFunc, ctx: &FieldContext) -> String {
    format_expr_with(f, &|v| ctx.var_name(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Var;

    const NAMES: [&str; 5] = ["q", "x", "a", "b", "c"];

    fn resolve(n: &str) -> Option<Var> {
        NAMES.iter().position(|&m| m == n).map(|i| Var(i as u32))
    }

    fn name(v: Var) -> String {
        NAMES[v.index()].to_string()
    }

    fn p(s: &str) -> Result<RatFunc, ParseError> {
        parse_expr_with(s, &resolve)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("-x^2").unwrap(), p("-(x*x)").unwrap());
        assert_eq!(p("a/b/c").unwrap(), p("a/(b*c)").unwrap());
        assert_eq!(p("a-b-c").unwrap(), p("a-(b+c)").unwrap());
        assert_eq!(p("x^2^3").unwrap(), p("x^6").unwrap());
        assert_eq!(p("2*-x").unwrap(), p("-2*x").unwrap());
        assert!(p("x - x").unwrap().is_zero());
    }

    #[test]
    fn hypergeometric_entries() {
        let f = p("1/((a-c)*(b-c))").unwrap();
        assert!(f.num().is_one());
        assert_eq!(f.den(), p("(a-c)*(b-c)").unwrap().num());
        let g = p("(a+b)*x - (1+c/q)").unwrap();
        assert_eq!(g.den(), &Poly::var(Var(0)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = p("x + $").unwrap_err();
        assert_eq!(e, ParseError { kind: ParseErrorKind::UnexpectedChar('$'), position: 4 });
        assert_eq!(p("2x").unwrap_err().kind, ParseErrorKind::ImplicitMultiplication);
        assert_eq!(p("2x").unwrap_err().position, 1);
        assert_eq!(p("x^-1").unwrap_err().kind, ParseErrorKind::BadExponent);
        assert_eq!(p("x^(2)").unwrap_err().position, 2);
        assert_eq!(p("y").unwrap_err().kind, ParseErrorKind::UnknownIdentifier("y".into()));
        assert_eq!(p("(x").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(p("x/(a-a)").unwrap_err().kind, ParseErrorKind::DivisionByZero);
        assert_eq!(p("").unwrap_err().position, 0);
        assert_eq!(p("x)").unwrap_err().position, 1);
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_expr_with(&RatFunc::zero(), &name), "0");
        let f = p("(q*a - c)/(a - c)").unwrap();
        let s = format_expr_with(&f, &name);
        assert_eq!(s, "(q*a - c)/(a - c)");
        assert_eq!(p(&s).unwrap(), f);
        let g = p("-x/2 + 3/4").unwrap();
        assert_eq!(format_expr_with(&g, &name), "-1/2*x + 3/4");
        assert_eq!(p(&format_expr_with(&g, &name)).unwrap(), g);
    }
}
