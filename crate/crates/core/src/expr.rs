//! A small expression language for scalar functions of chart coordinates.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | var | func '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)` and `2^-1` is allowed. Variables are `x1, x2, …`; `x`, `y`
//! and `z` alias `x1`, `x2`, `x3`.

use std::fmt;

use crate::error::{GeomError, Result};
use crate::field::{ScalarField, VectorField};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
    Pow,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Pow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        if self == Func::Pow {
            2
        } else {
            1
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Zero-based coordinate index.
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(GeomError::Parse { offset, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat(b'^') {
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let start = match self.peek() {
            None => return self.error(self.src.len(), "unexpected end of input"),
            Some(_) => self.pos,
        };
        let bytes = self.src.as_bytes();
        let c = bytes[start];
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(b')') {
                return self.error(self.pos, "expected `)`");
            }
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            let ident = &self.src[start..end];
            self.pos = end;
            if let Some(func) = Func::from_name(ident) {
                if !self.eat(b'(') {
                    return self.error(self.pos, format!("expected `(` after `{ident}`"));
                }
                let mut args = vec![self.expr()?];
                while self.eat(b',') {
                    args.push(self.expr()?);
                }
                if !self.eat(b')') {
                    return self.error(self.pos, "expected `)` or `,`");
                }
                if args.len() != func.arity() {
                    return self.error(start, format!("`{ident}` takes {} argument(s), got {}", func.arity(), args.len()));
                }
                return Ok(Expr::Call(func, args));
            }
            return match variable_index(ident) {
                Some(i) => Ok(Expr::Var(i)),
                None => self.error(start, format!("unknown identifier `{ident}`")),
            };
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        self.error(start, format!("unexpected character `{ch}`"))
    }

    fn number(&mut self) -> Result<Expr> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut end = start;
        let digits = |mut i: usize| {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        end = digits(end);
        if end < bytes.len() && bytes[end] == b'.' {
            end = digits(end + 1);
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            let after = digits(k);
            if after > k {
                end = after;
            }
        }
        match self.src[start..end].parse::<f64>() {
            Ok(v) => {
                self.pos = end;
                Ok(Expr::Num(v))
            }
            Err(_) => self.error(start, format!("malformed number `{}`", &self.src[start..end])),
        }
    }
}

fn variable_index(ident: &str) -> Option<usize> {
    match ident {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => {
            let digits = ident.strip_prefix('x')?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
                return None;
            }
            digits.parse::<usize>().ok().map(|k| k - 1)
        }
    }
}

/// Parses `text`; errors carry the byte offset of the offending token.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.error(p.pos, "unexpected trailing input");
    }
    Ok(e)
}

fn domain_error<T: Scalar, R>(message: &str, x: &[T]) -> Result<R> {
    Err(GeomError::EvalDomain { message: message.to_string(), point: x.iter().map(Scalar::re).collect() })
}

impl Expr {
    /// Number of coordinates the expression needs (largest index + 1).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(e) => e.arity(),
            Expr::Bin(_, a, b) => a.arity().max(b.arity()),
            Expr::Call(_, args) => args.iter().map(Expr::arity).max().unwrap_or(0),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Var(_) => 1,
            Expr::Neg(e) => 1 + e.depth(),
            Expr::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
            Expr::Call(_, args) => 1 + args.iter().map(Expr::depth).max().unwrap_or(0),
        }
    }

    pub fn eval<T: Scalar>(&self, x: &[T]) -> Result<T> {
        match self {
            Expr::Num(v) => Ok(T::cst(*v)),
            Expr::Var(i) => x.get(*i).copied().ok_or(GeomError::Dimension { expected: i + 1, got: x.len() }),
            Expr::Neg(e) => Ok(-e.eval(x)?),
            Expr::Bin(op, a, b) => {
                if *op == BinOp::Pow {
                    return power(a.eval(x)?, b, x);
                }
                let (u, v) = (a.eval(x)?, b.eval(x)?);
                match op {
                    BinOp::Add => Ok(u + v),
                    BinOp::Sub => Ok(u - v),
                    BinOp::Mul => Ok(u * v),
                    BinOp::Div if v.re() == 0.0 => domain_error("division by zero", x),
                    BinOp::Div => Ok(u / v),
                    BinOp::Pow => unreachable!(),
                }
            }
            Expr::Call(f, args) => {
                if *f == Func::Pow {
                    return power(args[0].eval(x)?, &args[1], x);
                }
                let u = args[0].eval(x)?;
                match f {
                    Func::Sin => Ok(u.sin()),
                    Func::Cos => Ok(u.cos()),
                    Func::Sinh => Ok(u.sinh()),
                    Func::Cosh => Ok(u.cosh()),
                    Func::Exp => Ok(u.exp()),
                    Func::Log if u.re() <= 0.0 => domain_error("log of a non-positive argument", x),
                    Func::Log => Ok(u.ln()),
                    Func::Sqrt if u.re() <= 0.0 => domain_error("sqrt of a non-positive argument", x),
                    Func::Sqrt => Ok(u.sqrt()),
                    Func::Pow => unreachable!(),
                }
            }
        }
    }
}

/// Exponents without variables are constants: integer ones use repeated
/// multiplication and accept any base, others need a positive base.
fn power<T: Scalar>(base: T, exponent: &Expr, x: &[T]) -> Result<T> {
    if exponent.arity() == 0 {
        let k = &exponent.eval::<f64>(&[])?;
        if k.fract() == 0.0 && k.abs() <= i32::MAX as f64 {
            if *k < 0.0 && base.re() == 0.0 {
                return domain_error("zero raised to a negative power", x);
            }
            return Ok(base.powi(*k as i32));
        }
        if base.re() <= 0.0 {
            return domain_error("non-integer power of a non-positive base", x);
        }
        return Ok(base.powf(*k));
    }
    if base.re() <= 0.0 {
        return domain_error("variable power of a non-positive base", x);
    }
    Ok((exponent.eval(x)? * base.ln()).exp())
}

/// Fully parenthesized; literals use the shortest round-trip form.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `-2 ^ 2` would read back as `-(2 ^ 2)`
            Expr::Num(v) if v.is_sign_negative() => write!(f, "({v:?})"),
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A parsed scalar function of the coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprScalar {
    pub text: String,
    pub expr: Expr,
}

impl ExprScalar {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(ExprScalar { text: text.to_string(), expr: parse_expr(text)? })
    }
}

impl ScalarField for ExprScalar {
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<T> {
        self.expr.eval(x)
    }
}

/// A vector field given by one expression per coordinate component.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprField {
    pub components: Vec<ExprScalar>,
}

impl ExprField {
    /// Parses the components and checks they only use the first `dim`
    /// coordinates.
    pub fn parse(texts: &[impl AsRef<str>], dim: usize) -> Result<Self> {
        if texts.len() != dim {
            return Err(GeomError::Dimension { expected: dim, got: texts.len() });
        }
        let components = texts.iter().map(|t| ExprScalar::parse(t.as_ref())).collect::<Result<Vec<_>>>()?;
        for c in &components {
            if c.expr.arity() > dim {
                return Err(GeomError::UnknownId(format!(
                    "coordinate x{} in `{}` on a {dim}-dimensional chart",
                    c.expr.arity(),
                    c.text
                )));
            }
        }
        Ok(ExprField { components })
    }
}

impl VectorField for ExprField {
    fn dim(&self) -> usize {
        self.components.len()
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        self.components.iter().map(|c| c.expr.eval(x)).collect()
    }
    fn label(&self) -> String {
        let parts: Vec<&str> = self.components.iter().map(|c| c.text.as_str()).collect();
        format!("[{}]", parts.join(", "))
    }
}
