use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use super::jet::{Jet, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    DivisionByZero,
    NegativeSqrt,
    NonFinite,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Fault::DivisionByZero => "division by zero",
            Fault::NegativeSqrt => "square root of a negative number",
            Fault::NonFinite => "non-finite value",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{fault} at {point:?}")]
pub struct EvalError {
    pub fault: Fault,
    pub point: Vec<f64>,
}

#[derive(Debug)]
enum Node {
    Const(f64),
    Var(usize),
    Add(Field, Field),
    Mul(Field, Field),
    Neg(Field),
    Recip(Field),
    Powi(Field, i32),
    Sqrt(Field),
    Sin(Field),
    Cos(Field),
    Exp(Field),
    Abs(Field),
    /// Sign of the argument; locally constant, used as the derivative of `abs`.
    Sign(Field),
}

/// A smooth real function on a chart, stored as an expression DAG over the
/// chart coordinates.
///
/// Evaluating into [`Jet`] yields exact first and second partial derivatives;
/// [`Field::diff`] builds the partial derivative as a new field so that
/// derivative orders can be stacked.
#[derive(Clone, Debug)]
pub struct Field(Arc<Node>);

impl Field {
    fn wrap(node: Node) -> Field {
        Field(Arc::new(node))
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(c: f64) -> Field {
        Field::wrap(Node::Const(c))
    }

    pub fn zero() -> Field {
        Field::constant(0.0)
    }

    pub fn one() -> Field {
        Field::constant(1.0)
    }

    /// The coordinate function `x^i`.
    pub fn var(i: usize) -> Field {
        Field::wrap(Node::Var(i))
    }

    pub fn as_constant(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    fn is_one(&self) -> bool {
        self.as_constant() == Some(1.0)
    }

    pub fn recip(&self) -> Field {
        match self.as_constant() {
            Some(c) if c != 0.0 => Field::constant(1.0 / c),
            _ => Field::wrap(Node::Recip(self.clone())),
        }
    }

    pub fn powi(&self, n: i32) -> Field {
        if n == 0 {
            return Field::one();
        }
        if n == 1 {
            return self.clone();
        }
        match self.as_constant() {
            Some(c) => Field::constant(c.powi(n)),
            None => Field::wrap(Node::Powi(self.clone(), n)),
        }
    }

    pub fn sqrt(&self) -> Field {
        match self.as_constant() {
            Some(c) if c >= 0.0 => Field::constant(c.sqrt()),
            _ => Field::wrap(Node::Sqrt(self.clone())),
        }
    }

    pub fn sin(&self) -> Field {
        match self.as_constant() {
            Some(c) => Field::constant(c.sin()),
            None => Field::wrap(Node::Sin(self.clone())),
        }
    }

    pub fn cos(&self) -> Field {
        match self.as_constant() {
            Some(c) => Field::constant(c.cos()),
            None => Field::wrap(Node::Cos(self.clone())),
        }
    }

    pub fn exp(&self) -> Field {
        match self.as_constant() {
            Some(c) => Field::constant(c.exp()),
            None => Field::wrap(Node::Exp(self.clone())),
        }
    }

    pub fn abs(&self) -> Field {
        match self.as_constant() {
            Some(c) => Field::constant(c.abs()),
            None => Field::wrap(Node::Abs(self.clone())),
        }
    }

    fn sign(&self) -> Field {
        match self.as_constant() {
            Some(c) => Field::constant(if c < 0.0 { -1.0 } else { 1.0 }),
            None => Field::wrap(Node::Sign(self.clone())),
        }
    }

    /// Balanced sum, keeping the DAG shallow for long sums.
    pub fn sum<I: IntoIterator<Item = Field>>(terms: I) -> Field {
        let mut items: Vec<Field> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        if items.is_empty() {
            return Field::zero();
        }
        while items.len() > 1 {
            let mut next = Vec::with_capacity(items.len() / 2 + 1);
            let mut it = items.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(a + b),
                    None => next.push(a),
                }
            }
            items = next;
        }
        items.pop().unwrap()
    }

    /// Partial derivative with respect to coordinate `var`.
    pub fn diff(&self, var: usize) -> Field {
        let mut memo = HashMap::new();
        self.diff_memo(var, &mut memo)
    }

    fn diff_memo(&self, var: usize, memo: &mut HashMap<usize, Field>) -> Field {
        if let Some(d) = memo.get(&self.key()) {
            return d.clone();
        }
        let d = match &*self.0 {
            Node::Const(_) | Node::Sign(_) => Field::zero(),
            Node::Var(i) => Field::constant(if *i == var { 1.0 } else { 0.0 }),
            Node::Add(a, b) => a.diff_memo(var, memo) + b.diff_memo(var, memo),
            Node::Mul(a, b) => {
                let da = a.diff_memo(var, memo);
                let db = b.diff_memo(var, memo);
                da * b.clone() + a.clone() * db
            }
            Node::Neg(a) => -a.diff_memo(var, memo),
            Node::Recip(a) => {
                let da = a.diff_memo(var, memo);
                if da.is_zero() {
                    Field::zero()
                } else {
                    -(da * self.powi(2))
                }
            }
            Node::Powi(a, n) => {
                let da = a.diff_memo(var, memo);
                if da.is_zero() {
                    Field::zero()
                } else {
                    Field::constant(*n as f64) * a.powi(n - 1) * da
                }
            }
            Node::Sqrt(a) => {
                let da = a.diff_memo(var, memo);
                if da.is_zero() {
                    Field::zero()
                } else {
                    da * (Field::constant(2.0) * self.clone()).recip()
                }
            }
            Node::Sin(a) => a.diff_memo(var, memo) * a.cos(),
            Node::Cos(a) => -(a.diff_memo(var, memo) * a.sin()),
            Node::Exp(a) => a.diff_memo(var, memo) * self.clone(),
            Node::Abs(a) => a.diff_memo(var, memo) * a.sign(),
        };
        memo.insert(self.key(), d.clone());
        d
    }

    /// Replaces coordinate `i` by `map(i)` wherever `map` returns a field.
    pub fn substitute(&self, map: &dyn Fn(usize) -> Option<Field>) -> Field {
        let mut memo = HashMap::new();
        self.subst_memo(map, &mut memo)
    }

    fn subst_memo(&self, map: &dyn Fn(usize) -> Option<Field>, memo: &mut HashMap<usize, Field>) -> Field {
        if let Some(d) = memo.get(&self.key()) {
            return d.clone();
        }
        let out = match &*self.0 {
            Node::Const(_) => self.clone(),
            Node::Var(i) => map(*i).unwrap_or_else(|| self.clone()),
            Node::Add(a, b) => a.subst_memo(map, memo) + b.subst_memo(map, memo),
            Node::Mul(a, b) => a.subst_memo(map, memo) * b.subst_memo(map, memo),
            Node::Neg(a) => -a.subst_memo(map, memo),
            Node::Recip(a) => a.subst_memo(map, memo).recip(),
            Node::Powi(a, n) => a.subst_memo(map, memo).powi(*n),
            Node::Sqrt(a) => a.subst_memo(map, memo).sqrt(),
            Node::Sin(a) => a.subst_memo(map, memo).sin(),
            Node::Cos(a) => a.subst_memo(map, memo).cos(),
            Node::Exp(a) => a.subst_memo(map, memo).exp(),
            Node::Abs(a) => a.subst_memo(map, memo).abs(),
            Node::Sign(a) => a.subst_memo(map, memo).sign(),
        };
        memo.insert(self.key(), out.clone());
        out
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        fn walk(f: &Field, seen: &mut std::collections::HashSet<usize>) {
            if !seen.insert(f.key()) {
                return;
            }
            match &*f.0 {
                Node::Const(_) | Node::Var(_) => {}
                Node::Add(a, b) | Node::Mul(a, b) => {
                    walk(a, seen);
                    walk(b, seen);
                }
                Node::Neg(a)
                | Node::Recip(a)
                | Node::Powi(a, _)
                | Node::Sqrt(a)
                | Node::Sin(a)
                | Node::Cos(a)
                | Node::Exp(a)
                | Node::Abs(a)
                | Node::Sign(a) => walk(a, seen),
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    pub fn eval<S: Scalar>(&self, vars: &[S]) -> Result<S, EvalError> {
        Evaluator::new(vars.to_vec()).eval(self)
    }

    pub fn value(&self, point: &[f64]) -> Result<f64, EvalError> {
        self.eval(point)
    }

    /// Value, gradient and Hessian at `point`.
    pub fn jet<const N: usize>(&self, point: &[f64; N]) -> Result<Jet<N>, EvalError> {
        self.eval(&Jet::seed(point))
    }
}

/// Evaluates many fields at one point, sharing common subexpressions.
pub struct Evaluator<S> {
    vars: Vec<S>,
    /// Keyed by node address; the stored handle keeps the node alive so an
    /// address is never reused while cached.
    cache: HashMap<usize, (Field, S)>,
}

impl<S: Scalar> Evaluator<S> {
    pub fn new(vars: Vec<S>) -> Self {
        Evaluator { vars, cache: HashMap::new() }
    }

    fn fault(&self, fault: Fault) -> EvalError {
        EvalError { fault, point: self.vars.iter().map(|v| v.value()).collect() }
    }

    pub fn eval(&mut self, f: &Field) -> Result<S, EvalError> {
        if let Some((_, v)) = self.cache.get(&f.key()) {
            return Ok(v.clone());
        }
        let out = match &*f.0 {
            Node::Const(c) => S::constant(*c),
            Node::Var(i) => self.vars.get(*i).cloned().unwrap_or_else(|| S::constant(f64::NAN)),
            Node::Add(a, b) => {
                let a = self.eval(a)?;
                a + self.eval(b)?
            }
            Node::Mul(a, b) => {
                let a = self.eval(a)?;
                a * self.eval(b)?
            }
            Node::Neg(a) => -self.eval(a)?,
            Node::Recip(a) => {
                let a = self.eval(a)?;
                if a.value() == 0.0 {
                    return Err(self.fault(Fault::DivisionByZero));
                }
                a.recip()
            }
            Node::Powi(a, n) => {
                let a = self.eval(a)?;
                if *n < 0 && a.value() == 0.0 {
                    return Err(self.fault(Fault::DivisionByZero));
                }
                a.powi(*n)
            }
            Node::Sqrt(a) => {
                let a = self.eval(a)?;
                if a.value() < 0.0 {
                    return Err(self.fault(Fault::NegativeSqrt));
                }
                a.sqrt()
            }
            Node::Sin(a) => self.eval(a)?.sin(),
            Node::Cos(a) => self.eval(a)?.cos(),
            Node::Exp(a) => self.eval(a)?.exp(),
            Node::Abs(a) => self.eval(a)?.abs(),
            Node::Sign(a) => {
                let v = self.eval(a)?.value();
                S::constant(if v < 0.0 { -1.0 } else { 1.0 })
            }
        };
        if !out.value().is_finite() {
            return Err(self.fault(Fault::NonFinite));
        }
        self.cache.insert(f.key(), (f.clone(), out.clone()));
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Const(f64),
    Var(usize),
    Add(usize, usize),
    Mul(usize, usize),
    Neg(usize),
    Recip(usize),
    Powi(usize, i32),
    Sqrt(usize),
    Sin(usize),
    Cos(usize),
    Exp(usize),
    Abs(usize),
    Sign(usize),
}

/// A set of fields flattened into one straight-line program, for repeated
/// point evaluation. Shared subexpressions are evaluated once.
#[derive(Clone, Debug)]
pub struct Tape {
    ops: Vec<Op>,
    outputs: Vec<usize>,
}

impl Tape {
    pub fn new<'a>(fields: impl IntoIterator<Item = &'a Field>) -> Tape {
        let mut tape = Tape { ops: Vec::new(), outputs: Vec::new() };
        let mut slots: HashMap<usize, (Field, usize)> = HashMap::new();
        for f in fields {
            let slot = tape.push(f, &mut slots);
            tape.outputs.push(slot);
        }
        tape
    }

    fn push(&mut self, f: &Field, slots: &mut HashMap<usize, (Field, usize)>) -> usize {
        if let Some((_, s)) = slots.get(&f.key()) {
            return *s;
        }
        let op = match &*f.0 {
            Node::Const(c) => Op::Const(*c),
            Node::Var(i) => Op::Var(*i),
            Node::Add(a, b) => {
                let a = self.push(a, slots);
                Op::Add(a, self.push(b, slots))
            }
            Node::Mul(a, b) => {
                let a = self.push(a, slots);
                Op::Mul(a, self.push(b, slots))
            }
            Node::Neg(a) => Op::Neg(self.push(a, slots)),
            Node::Recip(a) => Op::Recip(self.push(a, slots)),
            Node::Powi(a, n) => Op::Powi(self.push(a, slots), *n),
            Node::Sqrt(a) => Op::Sqrt(self.push(a, slots)),
            Node::Sin(a) => Op::Sin(self.push(a, slots)),
            Node::Cos(a) => Op::Cos(self.push(a, slots)),
            Node::Exp(a) => Op::Exp(self.push(a, slots)),
            Node::Abs(a) => Op::Abs(self.push(a, slots)),
            Node::Sign(a) => Op::Sign(self.push(a, slots)),
        };
        self.ops.push(op);
        let slot = self.ops.len() - 1;
        slots.insert(f.key(), (f.clone(), slot));
        slot
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Values of the recorded fields at `point`, in order; faults exactly
    /// where [`Evaluator`] would.
    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        let fault = |fault| EvalError { fault, point: point.to_vec() };
        let mut vals: Vec<f64> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match *op {
                Op::Const(c) => c,
                Op::Var(i) => point.get(i).copied().unwrap_or(f64::NAN),
                Op::Add(a, b) => vals[a] + vals[b],
                Op::Mul(a, b) => vals[a] * vals[b],
                Op::Neg(a) => -vals[a],
                Op::Recip(a) => {
                    if vals[a] == 0.0 {
                        return Err(fault(Fault::DivisionByZero));
                    }
                    vals[a].recip()
                }
                Op::Powi(a, n) => {
                    if n < 0 && vals[a] == 0.0 {
                        return Err(fault(Fault::DivisionByZero));
                    }
                    vals[a].powi(n)
                }
                Op::Sqrt(a) => {
                    if vals[a] < 0.0 {
                        return Err(fault(Fault::NegativeSqrt));
                    }
                    vals[a].sqrt()
                }
                Op::Sin(a) => vals[a].sin(),
                Op::Cos(a) => vals[a].cos(),
                Op::Exp(a) => vals[a].exp(),
                Op::Abs(a) => vals[a].abs(),
                Op::Sign(a) => {
                    if vals[a] < 0.0 {
                        -1.0
                    } else {
                        1.0
                    }
                }
            };
            if !v.is_finite() {
                return Err(fault(Fault::NonFinite));
            }
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|&s| vals[s]).collect())
    }
}

impl From<f64> for Field {
    fn from(c: f64) -> Field {
        Field::constant(c)
    }
}

fn add(a: &Field, b: &Field) -> Field {
    match (a.as_constant(), b.as_constant()) {
        (Some(x), Some(y)) => Field::constant(x + y),
        (Some(x), _) if x == 0.0 => b.clone(),
        (_, Some(y)) if y == 0.0 => a.clone(),
        _ => Field::wrap(Node::Add(a.clone(), b.clone())),
    }
}

fn mul(a: &Field, b: &Field) -> Field {
    match (a.as_constant(), b.as_constant()) {
        (Some(x), Some(y)) => Field::constant(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Field::zero(),
        _ if a.is_one() => b.clone(),
        _ if b.is_one() => a.clone(),
        (Some(x), _) if x == -1.0 => -b,
        (_, Some(y)) if y == -1.0 => -a,
        _ => Field::wrap(Node::Mul(a.clone(), b.clone())),
    }
}

fn neg(a: &Field) -> Field {
    match &*a.0 {
        Node::Const(c) => Field::constant(-c),
        Node::Neg(inner) => inner.clone(),
        _ => Field::wrap(Node::Neg(a.clone())),
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<Field> for Field {
            type Output = Field;
            fn $method(self, rhs: Field) -> Field {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Field> for Field {
            type Output = Field;
            fn $method(self, rhs: &Field) -> Field {
                $body(&self, rhs)
            }
        }
        impl $tr<Field> for &Field {
            type Output = Field;
            fn $method(self, rhs: Field) -> Field {
                $body(self, &rhs)
            }
        }
        impl $tr<&Field> for &Field {
            type Output = Field;
            fn $method(self, rhs: &Field) -> Field {
                $body(self, rhs)
            }
        }
        impl $tr<f64> for Field {
            type Output = Field;
            fn $method(self, rhs: f64) -> Field {
                $body(&self, &Field::constant(rhs))
            }
        }
        impl $tr<f64> for &Field {
            type Output = Field;
            fn $method(self, rhs: f64) -> Field {
                $body(self, &Field::constant(rhs))
            }
        }
        impl $tr<Field> for f64 {
            type Output = Field;
            fn $method(self, rhs: Field) -> Field {
                $body(&Field::constant(self), &rhs)
            }
        }
        impl $tr<&Field> for f64 {
            type Output = Field;
            fn $method(self, rhs: &Field) -> Field {
                $body(&Field::constant(self), rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Mul, mul, mul);
binop!(Sub, sub, |a: &Field, b: &Field| add(a, &neg(b)));
binop!(Div, div, |a: &Field, b: &Field| mul(a, &b.recip()));

impl Neg for Field {
    type Output = Field;
    fn neg(self) -> Field {
        neg(&self)
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Field {
        Field::var(i)
    }

    #[test]
    fn constant_folding() {
        let f = (Field::constant(2.0) + 3.0) * Field::one();
        assert_eq!(f.as_constant(), Some(5.0));
        assert!((x(0) * 0.0).is_zero());
        assert!((x(0) - x(0)).diff(1).is_zero());
    }

    #[test]
    fn symbolic_derivative_matches_jet() {
        let f = (x(0) * x(1)).sin() + (x(0).powi(2) + 1.0).sqrt() / x(1).exp();
        let p = [0.3, -0.7];
        let j = f.jet(&p).unwrap();
        for i in 0..2 {
            let d = f.diff(i);
            assert!((d.value(&p).unwrap() - j.grad[i]).abs() < 1e-14);
            for k in 0..2 {
                let dd = d.diff(k).value(&p).unwrap();
                assert!((dd - j.hess[i][k]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn abs_derivative_is_sign() {
        let f = x(0).abs();
        assert_eq!(f.diff(0).value(&[-2.0]).unwrap(), -1.0);
        assert_eq!(f.diff(0).value(&[2.0]).unwrap(), 1.0);
    }

    #[test]
    fn evaluation_faults_carry_point() {
        let f = (x(0) - 1.0).recip();
        let err = f.value(&[1.0]).unwrap_err();
        assert_eq!(err.fault, Fault::DivisionByZero);
        assert_eq!(err.point, vec![1.0]);
        let g = x(0).sqrt();
        assert_eq!(g.value(&[-1.0]).unwrap_err().fault, Fault::NegativeSqrt);
    }

    #[test]
    fn substitution() {
        let f = x(0) * x(4);
        let g = f.substitute(&|i| if i == 4 { Some(x(1) + 2.0) } else { None });
        assert_eq!(g.value(&[3.0, 1.0]).unwrap(), 9.0);
    }

    #[test]
    fn balanced_sum() {
        let f = Field::sum((0..100).map(|k| x(0) * (k as f64)));
        assert_eq!(f.value(&[1.0]).unwrap(), 4950.0);
    }

    #[test]
    fn tape_agrees_with_evaluator() {
        let f = (x(0) * x(1)).sin() + x(2).powi(3) / (x(0).exp() + 1.0);
        let g = (&f * &f).sqrt() - x(1).abs();
        let tape = Tape::new([&f, &g]);
        let p = [0.3, -1.2, 0.7];
        let got = tape.eval(&p).unwrap();
        assert_eq!(got, vec![f.value(&p).unwrap(), g.value(&p).unwrap()]);
    }

    #[test]
    fn tape_faults_like_evaluator() {
        let f = Field::from(1.0) / x(0);
        let err = Tape::new([&f]).eval(&[0.0]).unwrap_err();
        assert_eq!(err.fault, Fault::DivisionByZero);
    }
}
