//! Expression grammar and canonical printer.
//!
//! Grammar: rational constants (`3`, `-2/5` via unary minus and division),
//! indeterminate names, binary `+ - * /`, integer power `^`, parentheses,
//! unary minus. Whitespace insignificant. The printer emits the exact
//! inverse: parsing printed output reproduces the expression structurally.

use super::poly::Poly;
use super::{Expr, ExprError, SymbolsRef};
use num_traits::{One, Signed};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Token::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: u64 = text[start..i].parse().map_err(|_| ExprError::Syntax {
                    pos: start,
                    msg: "integer literal too large".into(),
                })?;
                out.push((start, Token::Int(v)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ExprError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Token)>,
    pos: usize,
    syms: &'a SymbolsRef,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Token) -> Result<(), ExprError> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            _ => Err(ExprError::Syntax {
                pos,
                msg: format!("expected {tok:?}"),
            }),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Token::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := '-' factor | atom ('^' '-'? int)?
    fn factor(&mut self) -> Result<Expr, ExprError> {
        if let Some(Token::Minus) = self.peek() {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            let mut negative = false;
            if let Some(Token::Minus) = self.peek() {
                self.bump();
                negative = true;
            }
            let pos = self.here();
            match self.bump() {
                Some(Token::Int(e)) => {
                    let e = i64::try_from(e).map_err(|_| ExprError::Syntax {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    let e = if negative { -e } else { e };
                    return base.pow(e);
                }
                _ => return Err(ExprError::NonIntegerExponent),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let pos = self.here();
        match self.bump() {
            Some(Token::Int(v)) => {
                let v = i64::try_from(v).map_err(|_| ExprError::Syntax {
                    pos,
                    msg: "integer literal too large".into(),
                })?;
                Ok(Expr::int(self.syms, v))
            }
            Some(Token::Ident(name)) => Expr::symbol(self.syms, &name),
            Some(Token::LParen) => {
                let e = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            other => Err(ExprError::Syntax {
                pos,
                msg: format!("expected value, found {other:?}"),
            }),
        }
    }
}

/// Parse `text` against the workspace symbol table; the result is in
/// canonical form.
pub fn parse(text: &str, syms: &SymbolsRef) -> Result<Expr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        syms,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::Syntax {
            pos: p.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}

fn print_poly(p: &Poly, syms: &SymbolsRef) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    // Positive-coefficient terms first, then negative, each group in
    // descending monomial order; avoids a leading minus whenever possible.
    let mut ordered: Vec<_> = p.terms.iter().rev().filter(|(_, c)| !c.is_negative()).collect();
    ordered.extend(p.terms.iter().rev().filter(|(_, c)| c.is_negative()));
    let mut out = String::new();
    for (i, (m, c)) in ordered.into_iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = c.abs();
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_one() || m.is_constant() {
            if mag.denom().is_one() {
                parts.push(mag.numer().to_string());
            } else {
                parts.push(format!("{}/{}", mag.numer(), mag.denom()));
            }
        }
        for (v, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                parts.push(syms.name(v).to_string());
            } else {
                parts.push(format!("{}^{}", syms.name(v), e));
            }
        }
        out.push_str(&parts.join("*"));
    }
    out
}

/// True when the polynomial prints as a single atomic factor (a bare
/// constant, variable, or variable power), safe to use unparenthesized as a
/// divisor.
fn atomic_factor(p: &Poly, _syms: &SymbolsRef) -> bool {
    if p.terms.len() != 1 {
        return false;
    }
    let (m, c) = p.terms.iter().next().unwrap();
    if m.is_constant() {
        return c.denom().is_one() && !c.is_negative();
    }
    // single variable power with coefficient 1
    c.is_one() && m.0.iter().filter(|&&e| e > 0).count() == 1
}

pub fn print_expr(e: &Expr) -> String {
    let syms = e.symbols();
    let num_s = print_poly(&e.num, syms);
    if e.den.is_one() {
        return num_s;
    }
    let num_part = if e.num.terms.len() > 1 {
        format!("({num_s})")
    } else {
        num_s
    };
    let den_s = print_poly(&e.den, syms);
    let den_part = if atomic_factor(&e.den, syms) {
        den_s
    } else {
        format!("({den_s})")
    };
    format!("{num_part}/{den_part}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Symbols;

    fn syms() -> SymbolsRef {
        Symbols::new(&["x", "y", "z"], &["lambda", "b"])
    }

    #[test]
    fn grammar_cases() {
        let s = syms();
        let e = parse("z^2 - 1", &s).unwrap();
        assert_eq!(e.to_string(), "z^2 - 1");
        let e = parse("1/z", &s).unwrap();
        assert_eq!(e.to_string(), "1/z");
        let e = parse("(x+y)^2", &s).unwrap();
        assert_eq!(e.to_string(), "x^2 + 2*x*y + y^2");
        let e = parse("-2/5", &s).unwrap();
        assert_eq!(e.to_string(), "-2/5");
    }

    #[test]
    fn negative_exponent_goes_to_denominator() {
        let s = syms();
        let e = parse("z^-2", &s).unwrap();
        assert_eq!(e.to_string(), "1/z^2");
        assert_eq!(e, parse("1/z^2", &s).unwrap());
    }

    #[test]
    fn errors() {
        let s = syms();
        assert!(matches!(
            parse("w + 1", &s),
            Err(ExprError::UnknownSymbol(_))
        ));
        assert!(matches!(parse("x ^ y", &s), Err(ExprError::NonIntegerExponent)));
        assert!(matches!(
            parse("1/(z - z)", &s),
            Err(ExprError::DivisionByZero)
        ));
        assert!(matches!(parse("x +", &s), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("x y", &s), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn print_parse_fixed_point() {
        let s = syms();
        for text in [
            "(x + y)/(z^2 - 1)",
            "z*(x - y)/(x*y)",
            "-x/y",
            "1/2*x - 3/4",
            "lambda - 7",
            "(x^2 - y^2)/(x - y)",
        ] {
            let e = parse(text, &s).unwrap();
            let printed = e.to_string();
            let re = parse(&printed, &s).unwrap();
            assert_eq!(e, re, "round trip failed for `{text}` -> `{printed}`");
        }
    }
}
