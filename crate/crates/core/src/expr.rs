//! A small closed-form expression grammar in one variable `x`.
//!
//! Supported: numeric literals, `x`, `+ − * / ^`, parentheses, unary minus,
//! and `exp(...)`. Exponents of `^` must be constant (no `x`), which keeps
//! the symbolic derivative in the power rule. Profiles that need more than
//! this belong in sampled-table form.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("unexpected character '{ch}' at byte {pos}")]
    BadCharacter { ch: char, pos: usize },
    #[error("malformed number '{text}' at byte {pos}")]
    BadNumber { text: String, pos: usize },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unexpected token at byte {pos}: expected {expected}")]
    UnexpectedToken { pos: usize, expected: &'static str },
    #[error("unknown function '{name}' at byte {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("trailing input at byte {pos}")]
    TrailingInput { pos: usize },
    #[error("exponent must be constant to differentiate '^'")]
    NonConstantExponent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Exp(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    X,
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' | '\u{2212}' => {
                tokens.push((Token::Minus, i));
                i += ch.len_utf8();
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_digit() || c == '.' {
                        i += 1;
                    } else if (c == 'e' || c == 'E')
                        && i + 1 < bytes.len()
                        && {
                            let n = bytes[i + 1] as char;
                            n.is_ascii_digit() || n == '+' || n == '-'
                        }
                    {
                        i += 2;
                    } else {
                        break;
                    }
                }
                let slice = &text[start..i];
                let value: f64 = slice.parse().map_err(|_| ExprError::BadNumber {
                    text: slice.to_string(),
                    pos: start,
                })?;
                tokens.push((Token::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_alphanumeric() || c == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let name = &text[start..i];
                if name == "x" {
                    tokens.push((Token::X, start));
                } else {
                    tokens.push((Token::Ident(name.to_string()), start));
                }
            }
            _ => {
                // Multi-byte starter other than the minus handled above.
                let ch = text[i..].chars().next().unwrap();
                return Err(ExprError::BadCharacter { ch, pos: i });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(usize::MAX)
    }

    fn advance(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t);
        self.pos += 1;
        t
    }

    // sum := product (('+'|'-') product)*
    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // product := unary (('*'|'/') unary)*
    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Expr, ExprError> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // power := atom ('^' unary)?   (right-associative)
    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let pos = self.here();
        match self.advance() {
            Some(Token::Num(v)) => Ok(Expr::Num(*v)),
            Some(Token::X) => Ok(Expr::X),
            Some(Token::Ident(name)) => {
                let name = name.clone();
                if name == "exp" {
                    match self.advance() {
                        Some(Token::LParen) => {}
                        _ => {
                            return Err(ExprError::UnexpectedToken {
                                pos,
                                expected: "'(' after exp",
                            })
                        }
                    }
                    let inner = self.sum()?;
                    match self.advance() {
                        Some(Token::RParen) => Ok(Expr::Exp(Box::new(inner))),
                        _ => Err(ExprError::UnexpectedToken {
                            pos,
                            expected: "closing ')'",
                        }),
                    }
                } else {
                    Err(ExprError::UnknownFunction { name, pos })
                }
            }
            Some(Token::LParen) => {
                let inner = self.sum()?;
                match self.advance() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(ExprError::UnexpectedToken {
                        pos,
                        expected: "closing ')'",
                    }),
                }
            }
            Some(_) => Err(ExprError::UnexpectedToken {
                pos,
                expected: "number, 'x', '(', or function",
            }),
            None => Err(ExprError::UnexpectedEnd),
        }
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
        };
        let expr = parser.sum()?;
        if parser.pos != tokens.len() {
            return Err(ExprError::TrailingInput { pos: parser.here() });
        }
        Ok(expr)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Expr::Neg(a) => -a.eval(x),
            Expr::Exp(a) => a.eval(x).exp(),
        }
    }

    /// True when the expression contains no `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::X => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_constant() && b.is_constant(),
            Expr::Neg(a) | Expr::Exp(a) => a.is_constant(),
        }
    }

    /// Symbolic derivative d/dx. Fails only for `u^v` with non-constant v.
    pub fn derivative(&self) -> Result<Expr, ExprError> {
        let d = match self {
            Expr::Num(_) => Expr::Num(0.0),
            Expr::X => Expr::Num(1.0),
            Expr::Add(a, b) => Expr::Add(Box::new(a.derivative()?), Box::new(b.derivative()?)),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.derivative()?), Box::new(b.derivative()?)),
            Expr::Mul(a, b) => Expr::Add(
                Box::new(Expr::Mul(Box::new(a.derivative()?), b.clone())),
                Box::new(Expr::Mul(a.clone(), Box::new(b.derivative()?))),
            ),
            Expr::Div(a, b) => Expr::Div(
                Box::new(Expr::Sub(
                    Box::new(Expr::Mul(Box::new(a.derivative()?), b.clone())),
                    Box::new(Expr::Mul(a.clone(), Box::new(b.derivative()?))),
                )),
                Box::new(Expr::Mul(b.clone(), b.clone())),
            ),
            Expr::Pow(base, exponent) => {
                if !exponent.is_constant() {
                    return Err(ExprError::NonConstantExponent);
                }
                let n = exponent.eval(0.0);
                // n·u^(n−1)·u'
                Expr::Mul(
                    Box::new(Expr::Mul(
                        Box::new(Expr::Num(n)),
                        Box::new(Expr::Pow(base.clone(), Box::new(Expr::Num(n - 1.0)))),
                    )),
                    Box::new(base.derivative()?),
                )
            }
            Expr::Neg(a) => Expr::Neg(Box::new(a.derivative()?)),
            Expr::Exp(a) => Expr::Mul(
                Box::new(Expr::Exp(a.clone())),
                Box::new(a.derivative()?),
            ),
        };
        Ok(d.simplified())
    }

    /// Constant folding and identity elimination; keeps derivative trees small.
    pub fn simplified(&self) -> Expr {
        match self {
            Expr::Add(a, b) => match (a.simplified(), b.simplified()) {
                (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
                (Expr::Num(z), rhs) if z == 0.0 => rhs,
                (lhs, Expr::Num(z)) if z == 0.0 => lhs,
                (lhs, rhs) => Expr::Add(Box::new(lhs), Box::new(rhs)),
            },
            Expr::Sub(a, b) => match (a.simplified(), b.simplified()) {
                (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
                (lhs, Expr::Num(z)) if z == 0.0 => lhs,
                (lhs, rhs) => Expr::Sub(Box::new(lhs), Box::new(rhs)),
            },
            Expr::Mul(a, b) => match (a.simplified(), b.simplified()) {
                (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
                (Expr::Num(z), _) | (_, Expr::Num(z)) if z == 0.0 => Expr::Num(0.0),
                (Expr::Num(o), rhs) if o == 1.0 => rhs,
                (lhs, Expr::Num(o)) if o == 1.0 => lhs,
                (lhs, rhs) => Expr::Mul(Box::new(lhs), Box::new(rhs)),
            },
            Expr::Div(a, b) => match (a.simplified(), b.simplified()) {
                (Expr::Num(x), Expr::Num(y)) if y != 0.0 => Expr::Num(x / y),
                (lhs, Expr::Num(o)) if o == 1.0 => lhs,
                (lhs, rhs) => Expr::Div(Box::new(lhs), Box::new(rhs)),
            },
            Expr::Pow(a, b) => match (a.simplified(), b.simplified()) {
                (base, Expr::Num(o)) if o == 1.0 => base,
                (_, Expr::Num(z)) if z == 0.0 => Expr::Num(1.0),
                (Expr::Num(x), Expr::Num(y)) => Expr::Num(x.powf(y)),
                (lhs, rhs) => Expr::Pow(Box::new(lhs), Box::new(rhs)),
            },
            Expr::Neg(a) => match a.simplified() {
                Expr::Num(v) => Expr::Num(-v),
                inner => Expr::Neg(Box::new(inner)),
            },
            Expr::Exp(a) => Expr::Exp(Box::new(a.simplified())),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => write!(f, "x"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}
