//! Parser for the class-expression mini-language.
//!
//! Integer literals, the identifier `L`, declared symbol identifiers,
//! operators `+ - *` and `^` (negative exponents only on `L`), parentheses.
//! Whitespace-insensitive. Errors carry a byte position.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use super::class::MotivicClass;
use super::MotivicError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<Option<(usize, Token)>, MotivicError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Token::Int(text.parse().unwrap())
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Token::Ident(text.to_string())
            }
            _ => {
                return Err(MotivicError::Parse {
                    pos: start,
                    message: format!("unexpected character {:?}", c as char),
                })
            }
        };
        Ok(Some((start, tok)))
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    idx: usize,
    end: usize,
    symbols: Option<BTreeSet<String>>,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.idx)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn err<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, MotivicError> {
        Err(MotivicError::Parse {
            pos,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<MotivicClass, MotivicError> {
        let mut acc = self.term()?;
        while let Some((_, tok)) = self.peek() {
            match tok {
                Token::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MotivicClass, MotivicError> {
        let mut acc = self.unary()?;
        while let Some((_, Token::Star)) = self.peek() {
            self.bump();
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MotivicClass, MotivicError> {
        if let Some((_, Token::Minus)) = self.peek() {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MotivicClass, MotivicError> {
        let base = self.atom()?;
        if let Some((_, Token::Caret)) = self.peek() {
            let (caret_pos, _) = self.bump().unwrap();
            let mut negative = false;
            if let Some((_, Token::Minus)) = self.peek() {
                self.bump();
                negative = true;
            }
            let (pos, tok) = match self.bump() {
                Some(t) => t,
                None => return self.err(caret_pos, "expected exponent after '^'"),
            };
            let exp = match tok {
                Token::Int(n) => n,
                _ => return self.err(pos, "expected integer exponent"),
            };
            let exp: i64 = match exp.try_into() {
                Ok(e) => e,
                Err(_) => return self.err(pos, "exponent out of range"),
            };
            if negative {
                // Negative exponents only for pure unit powers of L.
                let is_l_power = base.num_terms() == 1
                    && base
                        .terms()
                        .all(|(k, c)| k.monomial.is_unit() && c.is_one());
                if !is_l_power {
                    return self.err(pos, "negative exponent is only allowed on L");
                }
                let lexp = base.l_valuation().unwrap();
                return Ok(MotivicClass::l_pow(-(exp * lexp)));
            }
            let exp: u32 = match exp.try_into() {
                Ok(e) => e,
                Err(_) => return self.err(pos, "exponent out of range"),
            };
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MotivicClass, MotivicError> {
        let (pos, tok) = match self.bump() {
            Some(t) => t,
            None => return self.err(self.end, "unexpected end of input"),
        };
        match tok {
            Token::Int(n) => Ok(MotivicClass::from_bigint(n)),
            Token::Ident(name) => {
                if name == "L" {
                    Ok(MotivicClass::lefschetz())
                } else {
                    if let Some(declared) = &self.symbols {
                        if !declared.contains(&name) {
                            return self.err(pos, format!("undeclared symbol '{}'", name));
                        }
                    }
                    Ok(MotivicClass::symbol(&name))
                }
            }
            Token::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Token::RParen)) => Ok(inner),
                    Some((p, _)) => self.err(p, "expected ')'"),
                    None => self.err(self.end, "expected ')'"),
                }
            }
            _ => self.err(pos, "expected integer, identifier, or '('"),
        }
    }
}

fn parse_impl(
    expr: &str,
    symbols: Option<BTreeSet<String>>,
) -> Result<MotivicClass, MotivicError> {
    let mut lexer = Lexer::new(expr);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next()? {
        tokens.push(t);
    }
    let mut parser = Parser {
        tokens,
        idx: 0,
        end: expr.len(),
        symbols,
    };
    let out = parser.expr()?;
    if let Some((pos, _)) = parser.peek() {
        return Err(MotivicError::Parse {
            pos: *pos,
            message: "trailing input".to_string(),
        });
    }
    Ok(out)
}

/// Parse a class expression; any identifier other than `L` is a symbol.
pub fn parse_class(expr: &str) -> Result<MotivicClass, MotivicError> {
    parse_impl(expr, None)
}

/// Parse a class expression, rejecting symbols outside `declared`.
pub fn parse_class_with_symbols(
    expr: &str,
    declared: &BTreeSet<String>,
) -> Result<MotivicClass, MotivicError> {
    parse_impl(expr, Some(declared.clone()))
}
