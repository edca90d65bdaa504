//! Arithmetic expressions over chart coordinates `x0..x3` and named constants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::smooth::Field;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("constant `{0}` has no value")]
    Unresolved(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

/// Half-integer exponent stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfPower(pub i32);

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Coord(usize),
    Const(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// Base and exponent; the exponent is a coordinate-free, constant-free
    /// expression whose value is an integer or half-integer.
    Pow(Box<Expr>, Box<Expr>, HalfPower),
    Call(Func, Box<Expr>),
}

/// Identifiers a parse may refer to besides `x0..x3` and the built-in
/// function names.
#[derive(Debug, Clone)]
pub struct Scope {
    names: BTreeSet<String>,
}

impl Default for Scope {
    fn default() -> Self {
        Scope::with_constants(["m", "q", "hbar", "c"])
    }
}

impl Scope {
    pub fn with_constants<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Scope { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn insert(&mut self, name: &str) {
        self.names.insert(name.to_string());
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ExprError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let done = t.0 == Tok::End;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(b) = self.peek() else { return Ok((Tok::End, start)) };
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.peek().is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_') {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        if b"+-*/^()".contains(&b) {
            self.pos += 1;
            return Ok((Tok::Op(b as char), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(ExprError::Syntax { offset: start, message: format!("unexpected character `{ch}`") })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ExprError> {
        let digits = |lx: &mut Self| {
            let s = lx.pos;
            while lx.peek().is_some_and(|b| b.is_ascii_digit()) {
                lx.pos += 1;
            }
            lx.pos - s
        };
        let mut count = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(ExprError::Syntax { offset: start, message: "malformed number".into() });
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        let v: f64 = text
            .parse()
            .map_err(|_| ExprError::Syntax { offset: start, message: format!("malformed number `{text}`") })?;
        Ok((Tok::Num(v), start))
    }
}

struct Parser<'s> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    scope: &'s Scope,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, op: char) -> Result<(), ExprError> {
        if *self.peek() == Tok::Op(op) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected `{op}`"))
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = if *self.peek() == Tok::Op('-') {
            self.bump();
            Expr::Neg(Box::new(self.power()?))
        } else {
            self.power()?
        };
        let half = half_power(&exponent).ok_or(ExprError::Syntax {
            offset: at,
            message: "exponent must be a numeric integer or half-integer".into(),
        })?;
        Ok(Expr::Pow(Box::new(base), Box::new(exponent), half))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Op('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(f) = Func::from_name(&name) {
                    self.expect('(')?;
                    let arg = self.sum()?;
                    self.expect(')')?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                if let Some(i) = coordinate_index(&name) {
                    return Ok(Expr::Coord(i));
                }
                if self.scope.contains(&name) {
                    return Ok(Expr::Const(name));
                }
                Err(ExprError::UnknownIdentifier { name, offset: at })
            }
            Tok::End => Err(ExprError::Syntax { offset: at, message: "unexpected end of input".into() }),
            Tok::Op(c) => Err(ExprError::Syntax { offset: at, message: format!("unexpected `{c}`") }),
        }
    }
}

fn coordinate_index(name: &str) -> Option<usize> {
    match name {
        "x0" => Some(0),
        "x1" => Some(1),
        "x2" => Some(2),
        "x3" => Some(3),
        _ => None,
    }
}

fn numeric_value(e: &Expr) -> Option<f64> {
    Some(match e {
        Expr::Num(v) => *v,
        Expr::Neg(a) => -numeric_value(a)?,
        Expr::Bin(op, a, b) => {
            let (a, b) = (numeric_value(a)?, numeric_value(b)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
            }
        }
        Expr::Pow(a, _, h) => {
            let a = numeric_value(a)?;
            if h.0 % 2 == 0 {
                a.powi(h.0 / 2)
            } else {
                a.sqrt().powi(h.0)
            }
        }
        _ => return None,
    })
}

fn half_power(e: &Expr) -> Option<HalfPower> {
    let twice = 2.0 * numeric_value(e)?;
    let r = twice.round();
    if (twice - r).abs() < 1e-12 && r.abs() < 1e6 {
        Some(HalfPower(r as i32))
    } else {
        None
    }
}

/// Parses with the default scope (`x0..x3`, `m`, `q`, `hbar`, `c`).
pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    parse_expr_in(src, &Scope::default())
}

pub fn parse_expr_in(src: &str, scope: &Scope) -> Result<Expr, ExprError> {
    let toks = Lexer::tokens(src)?;
    let mut p = Parser { toks, i: 0, scope };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(e)
}

impl fmt::Display for Expr {
    /// Fully parenthesized; parsing the output yields the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Coord(i) => write!(f, "x{i}"),
            Expr::Const(n) => write!(f, "{n}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Pow(a, e, _) => write!(f, "({a}^{e})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl Expr {
    /// Builds the symbolic field; every named constant must have a value.
    pub fn compile(&self, consts: &BTreeMap<String, f64>) -> Result<Field, ExprError> {
        Ok(match self {
            Expr::Num(v) => Field::constant(*v),
            Expr::Coord(i) => Field::var(*i),
            Expr::Const(n) => Field::constant(*consts.get(n).ok_or_else(|| ExprError::Unresolved(n.clone()))?),
            Expr::Neg(a) => -a.compile(consts)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.compile(consts)?, b.compile(consts)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            Expr::Pow(a, _, h) => {
                let a = a.compile(consts)?;
                if h.0 % 2 == 0 {
                    a.powi(h.0 / 2)
                } else {
                    a.sqrt().powi(h.0)
                }
            }
            Expr::Call(func, a) => {
                let a = a.compile(consts)?;
                match func {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Sqrt => a.sqrt(),
                    Func::Abs => a.abs(),
                }
            }
        })
    }
}

/// Compiles an expression into a field on the spacetime chart.
pub fn compile_field(e: &Expr, consts: &BTreeMap<String, f64>) -> Result<Field, ExprError> {
    e.compile(consts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn sum_of_squares_tree() {
        let e = parse_expr("x1^2 + x2^2").unwrap();
        let sq = |i| Expr::Pow(b(Expr::Coord(i)), b(Expr::Num(2.0)), HalfPower(4));
        assert_eq!(e, Expr::Bin(BinOp::Add, b(sq(1)), b(sq(2))));
    }

    #[test]
    fn nested_calls_evaluate() {
        let e = parse_expr("1/sqrt(abs(1 - x1^2))").unwrap();
        let f = compile_field(&e, &BTreeMap::new()).unwrap();
        assert_eq!(f.value(&[0.0; 4]).unwrap(), 1.0);
        // 1/sqrt(1 - 0.25) by hand
        assert!((f.value(&[0.0, 0.5, 0.0, 0.0]).unwrap() - 1.154_700_538_379_251_5).abs() < 1e-15);
    }

    #[test]
    fn unknown_identifier() {
        assert_eq!(parse_expr("x5 + 1"), Err(ExprError::UnknownIdentifier { name: "x5".into(), offset: 0 }));
        assert!(matches!(parse_expr("B*x1"), Err(ExprError::UnknownIdentifier { .. })));
        assert!(parse_expr_in("B*x1", &Scope::with_constants(["B"])).is_ok());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert!(matches!(parse_expr("x1 + "), Err(ExprError::Syntax { offset: 5, .. })));
        assert!(matches!(parse_expr("(x1"), Err(ExprError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_expr("x1 $ 2"), Err(ExprError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_expr("x1^x2"), Err(ExprError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_expr("x1^0.3"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn precedence() {
        let f =
            |s| compile_field(&parse_expr(s).unwrap(), &BTreeMap::new()).unwrap().value(&[0.0, 3.0, 0.0, 0.0]).unwrap();
        assert_eq!(f("-x1^2"), -9.0);
        assert_eq!(f("2*x1+1"), 7.0);
        assert_eq!(f("2^3^2"), 512.0);
        assert_eq!(f("x1^-1"), 1.0 / 3.0);
        assert_eq!(f("4^(1/2)"), 2.0);
        assert_eq!(f("1.5e1 - 6/x1/2"), 14.0);
        assert!((f("x1^(3/2)") - 27f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn constant_field_has_zero_gradient() {
        let f = compile_field(&parse_expr("3").unwrap(), &BTreeMap::new()).unwrap();
        let j = f.jet(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!((j.value, j.grad), (3.0, [0.0; 4]));
    }

    #[test]
    fn sin_jet_and_product_hessian() {
        let consts = BTreeMap::new();
        let s = compile_field(&parse_expr("sin(x0)").unwrap(), &consts).unwrap();
        let j = s.jet(&[0.0; 4]).unwrap();
        assert_eq!((j.value, j.grad[0], j.hess[0][0]), (0.0, 1.0, 0.0));
        let p = compile_field(&parse_expr("x1*x2").unwrap(), &consts).unwrap();
        let h = p.jet(&[0.0, 0.7, -0.2, 0.0]).unwrap().hess;
        assert_eq!((h[1][2], h[2][1], h[1][1]), (1.0, 1.0, 0.0));
    }

    #[test]
    fn constants_resolve() {
        let e = parse_expr("hbar/m").unwrap();
        let consts = BTreeMap::from([("hbar".to_string(), 2.0), ("m".to_string(), 4.0)]);
        assert_eq!(compile_field(&e, &consts).unwrap().as_constant(), Some(0.5));
        assert!(matches!(compile_field(&e, &BTreeMap::new()), Err(ExprError::Unresolved(n)) if n == "hbar"));
    }

    #[test]
    fn printer_round_trip_examples() {
        for s in ["-x1^2", "2^3^2", "x1^-1/2", "sin(x0)*exp(-x1)+1e-7", "-(x1 - -x2)", ".5*x3"] {
            let e = parse_expr(s).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{s}");
        }
    }
}
