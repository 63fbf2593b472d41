//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr       := [sign] term (('+' | '-') term)*
//! term       := factor ('*' factor)*
//! factor     := primary ('^' integer)*
//! primary    := rational | derivative | '(' expr ')'
//! derivative := ident "'"* | ident '^(' integer ')'
//! rational   := digits ['/' digits | '.' digits]
//! ```
//!
//! `x^(k)` is the k-th derivative of `x`, `x^k` its k-th power.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{DerivativeVar, DiffPolynomial};
use crate::error::{Error, Position, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(BigRational),
    Integer(u64),
    Plus,
    Minus,
    Star,
    Caret,
    Prime,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    pos: Position,
}

fn lex(text: &str, line: usize, col_offset: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = Position {
            line,
            column: col_offset + k + 1,
        };
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '\'' => Some(Tok::Prime),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, pos });
            k += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[start..k].iter().collect()),
                pos,
            });
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let int_part: String = chars[start..k].iter().collect();
            let digits_after = |k: usize| k < chars.len() && chars[k].is_ascii_digit();
            if k < chars.len() && chars[k] == '/' && digits_after(k + 1) {
                k += 1;
                let s = k;
                while digits_after(k) {
                    k += 1;
                }
                let den: BigInt = chars[s..k].iter().collect::<String>().parse().unwrap();
                if den.is_zero() {
                    return Err(syntax(pos, "zero denominator"));
                }
                let num: BigInt = int_part.parse().unwrap();
                out.push(Spanned {
                    tok: Tok::Number(BigRational::new(num, den)),
                    pos,
                });
            } else if k < chars.len() && chars[k] == '.' && digits_after(k + 1) {
                k += 1;
                let s = k;
                while digits_after(k) {
                    k += 1;
                }
                let frac: String = chars[s..k].iter().collect();
                let num: BigInt = format!("{int_part}{frac}").parse().unwrap();
                let den = num_traits::pow(BigInt::from(10), frac.len());
                out.push(Spanned {
                    tok: Tok::Number(BigRational::new(num, den)),
                    pos,
                });
            } else {
                let tok = match int_part.parse::<u64>() {
                    Ok(v) => Tok::Integer(v),
                    Err(_) => Tok::Number(BigRational::from_integer(int_part.parse().unwrap())),
                };
                out.push(Spanned { tok, pos });
            }
        } else {
            return Err(syntax(pos, &format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn syntax(position: Position, message: &str) -> Error {
    Error::Syntax {
        position,
        message: message.to_string(),
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    at: usize,
    end: Position,
    variables: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.at + offset).map(|s| &s.tok)
    }

    fn pos(&self) -> Position {
        self.toks
            .get(self.at)
            .map_or_else(|| self.end.clone(), |s| s.pos.clone())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|s| s.tok.clone());
        self.at += 1;
        t
    }

    fn expect_integer(&mut self, what: &str) -> Result<u64> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Integer(v)) => Ok(v),
            _ => Err(syntax(pos, &format!("expected integer {what}"))),
        }
    }

    fn expr(&mut self) -> Result<DiffPolynomial> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffPolynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffPolynomial> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Tok::Caret) {
            self.bump();
            let e = self.expect_integer("exponent")?;
            let e = u32::try_from(e).map_err(|_| syntax(self.pos(), "exponent too large"))?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<DiffPolynomial> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Integer(v)) => Ok(DiffPolynomial::constant(BigRational::from_integer(
                BigInt::from(v),
            ))),
            Some(Tok::Number(q)) => Ok(DiffPolynomial::constant(q)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(syntax(close, "expected `)`")),
                }
            }
            Some(Tok::Ident(name)) => {
                let var = self
                    .variables
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::UnknownVariable {
                        name: name.clone(),
                        position: pos.clone(),
                    })?;
                let order = if self.peek() == Some(&Tok::Caret) && self.peek_at(1) == Some(&Tok::LParen)
                {
                    self.bump();
                    self.bump();
                    let k = self.expect_integer("derivative order")?;
                    let close = self.pos();
                    if self.bump() != Some(Tok::RParen) {
                        return Err(syntax(close, "expected `)` after derivative order"));
                    }
                    k
                } else {
                    let mut k = 0;
                    while self.peek() == Some(&Tok::Prime) {
                        self.bump();
                        k += 1;
                    }
                    k
                };
                Ok(DiffPolynomial::var(DerivativeVar::new(var, order)))
            }
            Some(_) => Err(syntax(pos, "expected a number, a variable or `(`")),
            None => Err(syntax(pos, "unexpected end of expression")),
        }
    }
}

pub(crate) fn parse_at(
    text: &str,
    variables: &[String],
    line: usize,
    col_offset: usize,
) -> Result<DiffPolynomial> {
    let toks = lex(text, line, col_offset)?;
    let end = Position {
        line,
        column: col_offset + text.chars().count() + 1,
    };
    let mut parser = Parser {
        toks,
        at: 0,
        end,
        variables,
    };
    let p = parser.expr()?;
    if parser.at < parser.toks.len() {
        return Err(syntax(parser.pos(), "unexpected token after expression"));
    }
    Ok(p)
}

/// Parse one expression over the given unknowns (`variables[j]` names `x_{j+1}`).
pub fn parse_polynomial(text: &str, variables: &[String]) -> Result<DiffPolynomial> {
    parse_at(text, variables, 1, 0)
}

/// Identifiers in an expression, in order of appearance.
pub(crate) fn identifiers(text: &str) -> Vec<String> {
    lex(text, 1, 0)
        .map(|toks| {
            toks.into_iter()
                .filter_map(|s| match s.tok {
                    Tok::Ident(name) => Some(name),
                    _ => None,
                })
                .collect()
        })
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::Monomial;

    fn vars() -> Vec<String> {
        ["x1", "x2", "x3"].map(String::from).to_vec()
    }

    fn d(var: usize, order: u64) -> DerivativeVar {
        DerivativeVar::new(var, order)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn first_example_equation() {
        let p = parse_polynomial("x1'' - x2'", &vars()).unwrap();
        let terms: Vec<_> = p.terms().collect();
        assert_eq!(terms.len(), 2);
        assert_eq!(p.coefficient(&Monomial::of(d(0, 2))), q(1));
        assert_eq!(p.coefficient(&Monomial::of(d(1, 1))), q(-1));
    }

    #[test]
    fn zero_and_constants() {
        assert!(parse_polynomial("0", &vars()).unwrap().is_zero());
        assert_eq!(
            parse_polynomial("3/4 - 0.25", &vars()).unwrap().as_constant(),
            Some(BigRational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn derivative_versus_power() {
        let p = parse_polynomial("x2^(4) + 3*x2'*x3^2", &vars()).unwrap();
        assert_eq!(p.coefficient(&Monomial::of(d(1, 4))), q(1));
        let m = Monomial::of(d(1, 1)).mul(&Monomial::of(d(2, 0)).mul(&Monomial::of(d(2, 0))));
        assert_eq!(p.coefficient(&m), q(3));
        assert_eq!(p.terms().count(), 2);
        assert_eq!(
            parse_polynomial("x1'''", &vars()).unwrap(),
            parse_polynomial("x1^(3)", &vars()).unwrap()
        );
    }

    #[test]
    fn parentheses_and_signs() {
        let a = parse_polynomial("-(x1 - x2)*(x1 + x2)", &vars()).unwrap();
        let b = parse_polynomial("x2^2 - x1^2", &vars()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_identifier_is_reported_with_position() {
        let err = parse_polynomial("x1 + y", &vars()).unwrap_err();
        match err {
            Error::UnknownVariable { name, position } => {
                assert_eq!(name, "y");
                assert_eq!(position, Position { line: 1, column: 6 });
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn syntax_errors() {
        for bad in ["x1 +", "x1 ** 2", "(x1", "x1^(2", "x1 x2", "(x1)^(2)", "x1 ^ x2", "3/0", "x1 $"] {
            let err = parse_polynomial(bad, &vars()).unwrap_err();
            assert!(matches!(err, Error::Syntax { .. }), "{bad}: {err}");
        }
    }

    #[test]
    fn identifier_scan() {
        assert_eq!(identifiers("x1'' + 3*y^(2) - x1"), vec!["x1", "y", "x1"]);
    }
}
