//! Expression trees for the disjunct functions and their interval evaluation.

use std::ops;

use thiserror::Error;

use crate::domain::IntervalBox;
use crate::interval::{Interval, IntervalError};

/// A decimal constant: the literal text as written plus its enclosure.
#[derive(Debug, Clone, PartialEq)]
pub struct Constant {
    text: String,
    value: Interval,
}

impl Constant {
    pub fn new(text: &str) -> Result<Self, IntervalError> {
        Ok(Self {
            text: text.to_string(),
            value: Interval::from_literal(text)?,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> Interval {
        self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sqrt,
    Sin,
    Cos,
    Atn,
    Acs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Two-argument arctangent; the left operand is the abscissa.
    Atn2,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Atn => "atn",
            UnaryOp::Acs => "acs",
        }
    }

    pub fn apply(self, x: &Interval) -> Result<Interval, IntervalError> {
        match self {
            UnaryOp::Neg => Ok(x.neg()),
            UnaryOp::Sqrt => x.sqrt(),
            UnaryOp::Sin => x.sin(),
            UnaryOp::Cos => x.cos(),
            UnaryOp::Atn => x.atn(),
            UnaryOp::Acs => x.acs(),
        }
    }
}

impl BinaryOp {
    pub fn apply(self, a: &Interval, b: &Interval) -> Result<Interval, IntervalError> {
        match self {
            BinaryOp::Add => a.add(b),
            BinaryOp::Sub => a.sub(b),
            BinaryOp::Mul => a.mul(b),
            BinaryOp::Div => a.div(b),
            BinaryOp::Atn2 => Interval::atn2(a, b),
        }
    }
}

/// Expression over variables `x0 .. x{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Constant),
    Var(usize),
    Pi,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    /// Constant from a decimal literal. Panics on a malformed literal; use
    /// [`Constant::new`] for fallible construction.
    pub fn num(text: &str) -> Expr {
        Expr::Const(Constant::new(text).expect("valid decimal literal"))
    }

    pub fn unary(op: UnaryOp, arg: Expr) -> Expr {
        Expr::Unary(op, Box::new(arg))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(self, n: u32) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    pub fn sqrt(self) -> Expr {
        Expr::unary(UnaryOp::Sqrt, self)
    }

    pub fn sin(self) -> Expr {
        Expr::unary(UnaryOp::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::unary(UnaryOp::Cos, self)
    }

    pub fn atn(self) -> Expr {
        Expr::unary(UnaryOp::Atn, self)
    }

    pub fn acs(self) -> Expr {
        Expr::unary(UnaryOp::Acs, self)
    }

    pub fn atn2(abscissa: Expr, ordinate: Expr) -> Expr {
        Expr::binary(BinaryOp::Atn2, abscissa, ordinate)
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) | Expr::Pi => None,
            Expr::Var(i) => Some(*i),
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.max_var(),
            Expr::Binary(_, a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Pi | Expr::Var(_) => 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => 1 + a.depth(),
            Expr::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Evaluates bottom-up with an arbitrary arithmetic.
    pub fn eval<E: Evaluator>(&self, ev: &E) -> Result<E::Value, IntervalError> {
        match self {
            Expr::Const(c) => Ok(ev.constant(c.value())),
            Expr::Pi => Ok(ev.constant(Interval::pi())),
            Expr::Var(i) => ev.variable(*i),
            Expr::Unary(op, a) => ev.unary(*op, a.eval(ev)?),
            Expr::Binary(op, a, b) => ev.binary(*op, a.eval(ev)?, b.eval(ev)?),
            Expr::Pow(a, n) => ev.pow(a.eval(ev)?, *n),
        }
    }
}

/// An arithmetic that expressions can be evaluated in: plain intervals,
/// interval jets carrying derivatives, and so on.
pub trait Evaluator {
    type Value;

    fn constant(&self, value: Interval) -> Self::Value;
    fn variable(&self, index: usize) -> Result<Self::Value, IntervalError>;
    fn unary(&self, op: UnaryOp, arg: Self::Value) -> Result<Self::Value, IntervalError>;
    fn binary(&self, op: BinaryOp, lhs: Self::Value, rhs: Self::Value) -> Result<Self::Value, IntervalError>;
    fn pow(&self, base: Self::Value, exponent: u32) -> Result<Self::Value, IntervalError>;
}

/// Plain interval evaluation over a box.
pub struct IntervalEval<'a> {
    vars: &'a [Interval],
}

impl<'a> IntervalEval<'a> {
    pub fn new(vars: &'a [Interval]) -> Self {
        Self { vars }
    }
}

impl Evaluator for IntervalEval<'_> {
    type Value = Interval;

    fn constant(&self, value: Interval) -> Interval {
        value
    }

    fn variable(&self, index: usize) -> Result<Interval, IntervalError> {
        self.vars.get(index).copied().ok_or(IntervalError::InvalidEndpoints)
    }

    fn unary(&self, op: UnaryOp, arg: Interval) -> Result<Interval, IntervalError> {
        op.apply(&arg)
    }

    fn binary(&self, op: BinaryOp, lhs: Interval, rhs: Interval) -> Result<Interval, IntervalError> {
        op.apply(&lhs, &rhs)
    }

    fn pow(&self, base: Interval, exponent: u32) -> Result<Interval, IntervalError> {
        base.powi(exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("expression uses x{index} but the point has dimension {dim}")]
    Dimension { index: usize, dim: usize },
}

fn check_dim(e: &Expr, dim: usize) -> Result<(), EvalError> {
    match e.max_var() {
        Some(index) if index >= dim => Err(EvalError::Dimension { index, dim }),
        _ => Ok(()),
    }
}

/// Interval enclosure of `e` over a box.
pub fn eval_box(e: &Expr, domain: &IntervalBox) -> Result<Interval, EvalError> {
    check_dim(e, domain.dim())?;
    Ok(e.eval(&IntervalEval::new(domain.components()))?)
}

/// Thin-interval enclosure of `e` at a point.
pub fn eval_point(e: &Expr, point: &[f64]) -> Result<Interval, EvalError> {
    check_dim(e, point.len())?;
    let vars = point
        .iter()
        .map(|&x| Interval::point(x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(e.eval(&IntervalEval::new(&vars))?)
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Add, self, rhs)
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Sub, self, rhs)
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Mul, self, rhs)
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Div, self, rhs)
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::unary(UnaryOp::Neg, self)
    }
}
