//! A small expression language for candidate solutions and parameter functions.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?          exponent binds tighter than unary minus
//! exponent:= '-'? INTEGER | '(' '-'? INTEGER ')'
//! atom    := NUMBER | VAR | FUNC '(' expr ')' | '(' expr ')'
//! VAR     := 'x1' | 'x2' | 'x3'
//! FUNC    := 'exp' | 'ln' | 'sqrt'
//! ```
//!
//! `^` is right-associative (`x1^2^3` is rejected because exponents must be
//! integer literals). There is no implicit multiplication: `2x1` is an error.

use std::fmt;

use thiserror::Error;

use crate::fields::ScalarField;
use crate::jets::Jet3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Num(f64),
    /// 0-based coordinate index.
    Var(usize),
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, i32),
    Call(Func, Box<Expression>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected one of {}", .expected.join(", "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at byte {offset} must be an integer literal")]
    NonIntegerExponent { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::NonIntegerExponent { offset } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool), // value, written as an integer literal
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Returns the next token and its starting offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        let single = |t| Ok((t, start));
        match c {
            '+' => {
                self.pos += 1;
                single(Tok::Plus)
            }
            '-' => {
                self.pos += 1;
                single(Tok::Minus)
            }
            '*' => {
                self.pos += 1;
                single(Tok::Star)
            }
            '/' => {
                self.pos += 1;
                single(Tok::Slash)
            }
            '^' => {
                self.pos += 1;
                single(Tok::Caret)
            }
            '(' => {
                self.pos += 1;
                single(Tok::LParen)
            }
            ')' => {
                self.pos += 1;
                single(Tok::RParen)
            }
            c if c.is_ascii_digit() || c == '.' => {
                let bytes = rest.as_bytes();
                let mut n = 0;
                let mut integral = true;
                while n < bytes.len() && bytes[n].is_ascii_digit() {
                    n += 1;
                }
                if n < bytes.len() && bytes[n] == b'.' {
                    integral = false;
                    n += 1;
                    while n < bytes.len() && bytes[n].is_ascii_digit() {
                        n += 1;
                    }
                }
                if n < bytes.len() && (bytes[n] == b'e' || bytes[n] == b'E') {
                    let mut m = n + 1;
                    if m < bytes.len() && (bytes[m] == b'+' || bytes[m] == b'-') {
                        m += 1;
                    }
                    if m < bytes.len() && bytes[m].is_ascii_digit() {
                        integral = false;
                        while m < bytes.len() && bytes[m].is_ascii_digit() {
                            m += 1;
                        }
                        n = m;
                    }
                }
                let text = &rest[..n];
                let v: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    expected: vec!["number"],
                })?;
                self.pos += n;
                // A literal glued to an identifier ("2x1") is implicit multiplication.
                if let Some(next) = self.src[self.pos..].chars().next() {
                    if next.is_ascii_alphabetic() || next == '_' {
                        return Err(ParseError::Syntax {
                            offset: self.pos,
                            expected: vec!["operator", "')'", "end of input"],
                        });
                    }
                }
                Ok((Tok::Num(v, integral), start))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let n = rest
                    .char_indices()
                    .find(|&(_, ch)| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .map_or(rest.len(), |(i, _)| i);
                self.pos += n;
                Ok((Tok::Ident(rest[..n].to_string()), start))
            }
            _ => Err(ParseError::Syntax {
                offset: start,
                expected: vec!["number", "variable", "function", "'('", "'-'"],
            }),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

const OPERAND: &[&str] = &["number", "variable", "function", "'('", "'-'"];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, at) = lexer.next()?;
        Ok(Parser { lexer, tok, at })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, expected: &[&'static str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.at,
            expected: expected.to_vec(),
        })
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(Expression::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.atom()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let n = self.exponent()?;
        Ok(Expression::Pow(Box::new(base), n))
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let parenthesized = self.tok == Tok::LParen;
        if parenthesized {
            self.bump()?;
        }
        let negative = self.tok == Tok::Minus;
        if negative {
            self.bump()?;
        }
        let at = self.at;
        let n = match self.tok {
            Tok::Num(v, true) if v <= i32::MAX as f64 => v as i32,
            Tok::Num(..) => return Err(ParseError::NonIntegerExponent { offset: at }),
            Tok::Ident(_) | Tok::LParen => {
                return Err(ParseError::NonIntegerExponent { offset: at })
            }
            _ => return self.fail(&["integer exponent"]),
        };
        self.bump()?;
        if parenthesized {
            if self.tok != Tok::RParen {
                return self.fail(&["')'"]);
            }
            self.bump()?;
        }
        if self.tok == Tok::Caret {
            return Err(ParseError::NonIntegerExponent { offset: self.at });
        }
        Ok(if negative { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        match self.tok.clone() {
            Tok::Num(v, _) => {
                self.bump()?;
                Ok(Expression::Num(v))
            }
            Tok::Ident(name) => {
                let at = self.at;
                let func = match name.as_str() {
                    "x1" => return self.var(0),
                    "x2" => return self.var(1),
                    "x3" => return self.var(2),
                    "exp" => Func::Exp,
                    "ln" => Func::Ln,
                    "sqrt" => Func::Sqrt,
                    _ => return Err(ParseError::UnknownIdentifier { name, offset: at }),
                };
                self.bump()?;
                if self.tok != Tok::LParen {
                    return self.fail(&["'('"]);
                }
                self.bump()?;
                let arg = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.fail(&["')'", "operator"]);
                }
                self.bump()?;
                Ok(Expression::Call(func, Box::new(arg)))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.fail(&["')'", "operator"]);
                }
                self.bump()?;
                Ok(e)
            }
            _ => self.fail(OPERAND),
        }
    }

    fn var(&mut self, k: usize) -> Result<Expression, ParseError> {
        self.bump()?;
        Ok(Expression::Var(k))
    }
}

pub fn parse(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(e)
}

impl Expression {
    /// Direct evaluation on values, without derivatives.
    pub fn eval(&self, p: [f64; 3]) -> f64 {
        match self {
            Expression::Num(v) => *v,
            Expression::Var(k) => p[*k],
            Expression::Neg(e) => -e.eval(p),
            Expression::Binary(op, a, b) => {
                let (a, b) = (a.eval(p), b.eval(p));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            Expression::Pow(e, n) => e.eval(p).powi(*n),
            Expression::Call(f, e) => {
                let v = e.eval(p);
                match f {
                    Func::Exp => v.exp(),
                    Func::Ln => v.ln(),
                    Func::Sqrt => v.sqrt(),
                }
            }
        }
    }

    fn eval_jets(&self, x: &[Jet3; 3]) -> crate::Result<Jet3> {
        Ok(match self {
            Expression::Num(v) => Jet3::constant(*v),
            Expression::Var(k) => x[*k],
            Expression::Neg(e) => -e.eval_jets(x)?,
            Expression::Binary(op, a, b) => {
                let (a, b) = (a.eval_jets(x)?, b.eval_jets(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.try_div(&b)?,
                }
            }
            Expression::Pow(e, n) => e.eval_jets(x)?.powi(*n)?,
            Expression::Call(f, e) => {
                let a = e.eval_jets(x)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Ln => a.ln()?,
                    Func::Sqrt => a.sqrt()?,
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expression::Binary(op, ..) => op.precedence(),
            Expression::Neg(_) => 3,
            Expression::Pow(..) => 4,
            Expression::Num(v) if *v < 0.0 => 3,
            _ => 5,
        }
    }
}

/// The resulting field reports domain errors (division by zero, `ln` of a
/// non-positive value) at evaluation time.
pub fn to_field(e: &Expression) -> ScalarField {
    let tree = e.clone();
    ScalarField::new(move |x| tree.eval_jets(x)).with_source(e.to_string())
}

pub fn parse_field(text: &str) -> Result<ScalarField, ParseError> {
    Ok(to_field(&parse(text)?).with_source(text))
}

fn write_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // `{:?}` keeps a decimal point or exponent, so the literal re-parses to the same f64.
    if v.fract() == 0.0 && v.abs() < 1e15 {
        write!(f, "{}", v.abs() as i64)
    } else {
        write!(f, "{:?}", v.abs())
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expression, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expression::Num(v) => {
                if *v < 0.0 {
                    f.write_str("-")?;
                }
                write_num(f, *v)
            }
            Expression::Var(k) => write!(f, "x{}", k + 1),
            Expression::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, 3)
            }
            Expression::Binary(op, a, b) => {
                let p = op.precedence();
                wrap(f, a, p)?;
                write!(f, " {} ", op.symbol())?;
                // Left associativity: an equal-precedence right operand needs parentheses.
                wrap(f, b, p + 1)
            }
            Expression::Pow(e, n) => {
                wrap(f, e, 5)?;
                write!(f, "^{n}")
            }
            Expression::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}
