//! Arithmetic expressions in one variable `x`.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?            // right-associative
//! atom    := number | 'pi' | 'x' | name '(' expr ')' | '(' expr ')'
//! name    := 'sin' | 'cos' | 'exp' | 'log' | 'sqrt' | 'tanh'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("domain error evaluating {op} at x = {x}: {detail}")]
    Domain {
        op: &'static str,
        x: f64,
        detail: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Tanh,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
        }
    }
}

/// Expression syntax tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Number(f64),
    Pi,
    Var,
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Call(Func, Box<Expression>),
}

impl Expression {
    /// Parses `text` into an expression tree.
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        let tokens = lex(text)?;
        let mut p = Parser { tokens, cursor: 0 };
        let e = p.expr()?;
        match p.peek() {
            (Token::Eof, _) => Ok(e),
            (tok, pos) => Err(ExprError::Parse {
                pos,
                message: format!("unexpected {tok} after complete expression"),
            }),
        }
    }

    /// Evaluates at `x`. Domain violations (log of a non-positive value,
    /// division by zero, and friends) come back as errors instead of NaN.
    pub fn eval(&self, x: f64) -> Result<f64, ExprError> {
        let v = match self {
            Expression::Number(c) => *c,
            Expression::Pi => std::f64::consts::PI,
            Expression::Var => x,
            Expression::Neg(inner) => -inner.eval(x)?,
            Expression::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(ExprError::Domain {
                                op: "division",
                                x,
                                detail: "division by zero".into(),
                            });
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        let v = a.powf(b);
                        if !v.is_finite() {
                            return Err(ExprError::Domain {
                                op: "power",
                                x,
                                detail: format!("{a}^{b} is not finite"),
                            });
                        }
                        v
                    }
                }
            }
            Expression::Call(f, arg) => {
                let a = arg.eval(x)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(ExprError::Domain {
                                op: "log",
                                x,
                                detail: format!("log({a}) undefined"),
                            });
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(ExprError::Domain {
                                op: "sqrt",
                                x,
                                detail: format!("sqrt({a}) undefined"),
                            });
                        }
                        a.sqrt()
                    }
                    Func::Tanh => a.tanh(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::Domain {
                op: "evaluation",
                x,
                detail: "non-finite result".into(),
            })
        }
    }
}

/// Fully parenthesized rendering; re-parses to the identical tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Number(c) => write!(f, "{c}"),
            Expression::Pi => write!(f, "pi"),
            Expression::Var => write!(f, "x"),
            Expression::Neg(inner) => write!(f, "(-{inner})"),
            Expression::Binary(op, l, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({l} {sym} {r})")
            }
            Expression::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Number(v) => write!(f, "number {v}"),
            Token::Ident(s) => write!(f, "identifier `{s}`"),
            Token::Plus => write!(f, "`+`"),
            Token::Minus => write!(f, "`-`"),
            Token::Star => write!(f, "`*`"),
            Token::Slash => write!(f, "`/`"),
            Token::Caret => write!(f, "`^`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // optional exponent
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let slice = &text[start..i];
                let value = slice.parse::<f64>().map_err(|_| ExprError::Parse {
                    pos: start,
                    message: format!("malformed number `{slice}`"),
                })?;
                out.push((Token::Number(value), start));
            }
            'a'..='z' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_lowercase() {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
            }
            other => {
                return Err(ExprError::Parse {
                    pos: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push((Token::Eof, text.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> (Token, usize) {
        self.tokens[self.cursor].clone()
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.cursor].clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().0 {
                Token::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expression::Binary(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Token::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expression::Binary(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().0 {
                Token::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expression::Binary(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Token::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expression::Binary(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expression, ExprError> {
        if self.peek().0 == Token::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expression::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ExprError> {
        let base = self.atom()?;
        if self.peek().0 == Token::Caret {
            self.bump();
            // allow a unary minus in the exponent: x^-2
            let exp = self.unary()?;
            return Ok(Expression::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(exp),
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expression, ExprError> {
        let (tok, pos) = self.bump();
        match tok {
            Token::Number(v) => Ok(Expression::Number(v)),
            Token::Ident(name) => match name.as_str() {
                "x" => Ok(Expression::Var),
                "pi" => Ok(Expression::Pi),
                "sin" | "cos" | "exp" | "log" | "sqrt" | "tanh" => {
                    let func = match name.as_str() {
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        "exp" => Func::Exp,
                        "log" => Func::Log,
                        "sqrt" => Func::Sqrt,
                        _ => Func::Tanh,
                    };
                    match self.bump() {
                        (Token::LParen, _) => {}
                        (tok, pos) => {
                            return Err(ExprError::Parse {
                                pos,
                                message: format!("expected `(` after `{name}`, found {tok}"),
                            })
                        }
                    }
                    let arg = self.expr()?;
                    match self.bump() {
                        (Token::RParen, _) => Ok(Expression::Call(func, Box::new(arg))),
                        (tok, pos) => Err(ExprError::Parse {
                            pos,
                            message: format!("expected `)`, found {tok}"),
                        }),
                    }
                }
                _ => Err(ExprError::UnknownIdentifier { pos, name }),
            },
            Token::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    (Token::RParen, _) => Ok(inner),
                    (tok, pos) => Err(ExprError::Parse {
                        pos,
                        message: format!("expected `)`, found {tok}"),
                    }),
                }
            }
            tok => Err(ExprError::Parse {
                pos,
                message: format!("expected a value, found {tok}"),
            }),
        }
    }
}
