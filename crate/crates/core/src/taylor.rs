//! Second-order Taylor models from forward-mode automatic differentiation
//! over intervals.
//!
//! A [`Jet`] carries enclosures of a value, its gradient and (optionally) its
//! Hessian. Evaluating an expression on jets seeded over a whole box gives
//! enclosures of the derivatives over that box; seeding at a thin center gives
//! tight center values. Together they bound `f` on the box through the
//! Lagrange form
//!
//! ```text
//! f(x) in f(c) + sum_j g_j (x_j - c_j) + 1/2 sum_ij H_ij (x_i - c_i)(x_j - c_j)
//! ```
//!
//! with `g` taken at the center and `H` enclosing the Hessian over the box.
//!
//! Derivative rules (`u` is the argument enclosure, `r = x^2 + y^2`):
//!
//! | function     | first derivative     | second derivative        |
//! |--------------|----------------------|--------------------------|
//! | `sqrt u`     | `1 / (2 sqrt u)`     | `-1 / (4 u sqrt u)`      |
//! | `sin u`      | `cos u`              | `-sin u`                 |
//! | `cos u`      | `-sin u`             | `-cos u`                 |
//! | `atn u`      | `1 / (1 + u^2)`      | `-2u / (1 + u^2)^2`      |
//! | `acs u`      | `-1 / sqrt(1 - u^2)` | `-u / (1 - u^2)^(3/2)`   |
//! | `u^n`        | `n u^(n-1)`          | `n (n-1) u^(n-2)`        |
//! | `1 / u`      | `-1 / u^2`           | `2 / u^3`                |
//! | `atn2(x, y)` | `(-y / r, x / r)`    | `xx: 2xy/r^2, yy: -2xy/r^2, xy: (y^2 - x^2)/r^2` |
//!
//! Non-constant arguments at points where a rule is singular (`sqrt` at 0,
//! `acs` at +-1, `atn2` across its branch cut) are reported as
//! [`IntervalError::PartialDomain`]: the function is not analytic there.

use std::sync::Arc;

use thiserror::Error;

use crate::domain::IntervalBox;
use crate::expr::{BinaryOp, Evaluator, Expr, UnaryOp};
use crate::interval::{add_up, mul_up, sub_up, Interval, IntervalError, Sign};

type IResult<T> = Result<T, IntervalError>;

/// Index of `H[i][j]`, `j <= i`, in packed lower-triangular storage.
#[inline]
pub fn hess_index(i: usize, j: usize) -> usize {
    let (i, j) = if j > i { (j, i) } else { (i, j) };
    i * (i + 1) / 2 + j
}

fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Value, gradient and optional Hessian enclosures.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: Interval,
    pub grad: Vec<Interval>,
    /// Packed lower triangle; empty for first-order jets.
    pub hess: Vec<Interval>,
}

impl Jet {
    fn is_constant(&self) -> bool {
        self.grad.iter().chain(&self.hess).all(Interval::is_zero)
    }

    fn with_value(&self, value: Interval) -> Jet {
        Jet {
            value,
            grad: vec![Interval::ZERO; self.grad.len()],
            hess: vec![Interval::ZERO; self.hess.len()],
        }
    }

    fn neg(&self) -> Jet {
        Jet {
            value: self.value.neg(),
            grad: self.grad.iter().map(Interval::neg).collect(),
            hess: self.hess.iter().map(Interval::neg).collect(),
        }
    }

    fn zip(&self, other: &Jet, op: fn(&Interval, &Interval) -> IResult<Interval>) -> IResult<Jet> {
        Ok(Jet {
            value: op(&self.value, &other.value)?,
            grad: zip_with(&self.grad, &other.grad, op)?,
            hess: zip_with(&self.hess, &other.hess, op)?,
        })
    }

    fn mul(&self, other: &Jet) -> IResult<Jet> {
        let (a, b) = (self, other);
        let n = a.grad.len();
        let mut grad = Vec::with_capacity(n);
        for i in 0..n {
            grad.push(a.grad[i].mul(&b.value)?.add(&a.value.mul(&b.grad[i])?)?);
        }
        let mut hess = Vec::with_capacity(a.hess.len());
        if !a.hess.is_empty() {
            for i in 0..n {
                for j in 0..=i {
                    let k = hess_index(i, j);
                    let cross = a.grad[i].mul(&b.grad[j])?.add(&a.grad[j].mul(&b.grad[i])?)?;
                    let h = a.hess[k].mul(&b.value)?.add(&a.value.mul(&b.hess[k])?)?.add(&cross)?;
                    hess.push(h);
                }
            }
        }
        Ok(Jet {
            value: a.value.mul(&b.value)?,
            grad,
            hess,
        })
    }

    /// `phi(u)` given enclosures of `phi`, `phi'` and `phi''` over `u.value`.
    fn chain(&self, f0: Interval, f1: Interval, f2: Option<Interval>) -> IResult<Jet> {
        let n = self.grad.len();
        let grad = self.grad.iter().map(|g| f1.mul(g)).collect::<IResult<Vec<_>>>()?;
        let mut hess = Vec::with_capacity(self.hess.len());
        if !self.hess.is_empty() {
            let f2 = f2.expect("second derivative required for second-order jets");
            for i in 0..n {
                for j in 0..=i {
                    let k = hess_index(i, j);
                    let h = f2
                        .mul(&self.grad[i].mul(&self.grad[j])?)?
                        .add(&f1.mul(&self.hess[k])?)?;
                    hess.push(h);
                }
            }
        }
        Ok(Jet { value: f0, grad, hess })
    }

    /// Bivariate chain rule for `phi(x, y)`.
    #[allow(clippy::too_many_arguments)]
    fn chain2(
        x: &Jet,
        y: &Jet,
        f0: Interval,
        fx: Interval,
        fy: Interval,
        fxx: Interval,
        fxy: Interval,
        fyy: Interval,
    ) -> IResult<Jet> {
        let n = x.grad.len();
        let mut grad = Vec::with_capacity(n);
        for i in 0..n {
            grad.push(fx.mul(&x.grad[i])?.add(&fy.mul(&y.grad[i])?)?);
        }
        let mut hess = Vec::with_capacity(x.hess.len());
        if !x.hess.is_empty() {
            for i in 0..n {
                for j in 0..=i {
                    let k = hess_index(i, j);
                    let (xi, xj, yi, yj) = (x.grad[i], x.grad[j], y.grad[i], y.grad[j]);
                    let mixed = xi.mul(&yj)?.add(&xj.mul(&yi)?)?;
                    let h = fxx
                        .mul(&xi.mul(&xj)?)?
                        .add(&fxy.mul(&mixed)?)?
                        .add(&fyy.mul(&yi.mul(&yj)?)?)?
                        .add(&fx.mul(&x.hess[k])?)?
                        .add(&fy.mul(&y.hess[k])?)?;
                    hess.push(h);
                }
            }
        }
        Ok(Jet { value: f0, grad, hess })
    }
}

fn zip_with(
    a: &[Interval],
    b: &[Interval],
    op: fn(&Interval, &Interval) -> IResult<Interval>,
) -> IResult<Vec<Interval>> {
    a.iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Derivative order carried by jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// Evaluates expressions on jets seeded at the given variable enclosures.
pub struct JetEval<'a> {
    vars: &'a [Interval],
    order: Order,
}

impl<'a> JetEval<'a> {
    pub fn new(vars: &'a [Interval], order: Order) -> Self {
        Self { vars, order }
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn hess_len(&self) -> usize {
        match self.order {
            Order::First => 0,
            Order::Second => packed_len(self.n()),
        }
    }
}

impl Evaluator for JetEval<'_> {
    type Value = Jet;

    fn constant(&self, value: Interval) -> Jet {
        Jet {
            value,
            grad: vec![Interval::ZERO; self.n()],
            hess: vec![Interval::ZERO; self.hess_len()],
        }
    }

    fn variable(&self, index: usize) -> IResult<Jet> {
        let value = *self.vars.get(index).ok_or(IntervalError::InvalidEndpoints)?;
        let mut jet = self.constant(value);
        jet.grad[index] = Interval::ONE;
        Ok(jet)
    }

    fn unary(&self, op: UnaryOp, u: Jet) -> IResult<Jet> {
        if op == UnaryOp::Neg {
            return Ok(u.neg());
        }
        let v = u.value;
        let f0 = op.apply(&v)?;
        if u.is_constant() {
            return Ok(u.with_value(f0));
        }
        let (f1, f2) = match op {
            UnaryOp::Neg => unreachable!(),
            UnaryOp::Sqrt => {
                if v.lo() <= 0.0 {
                    return Err(IntervalError::PartialDomain);
                }
                let two_root = f0.scale(2.0)?;
                let f1 = two_root.recip()?;
                let f2 = v.mul(&two_root)?.scale(2.0)?.recip()?.neg();
                (f1, f2)
            }
            UnaryOp::Sin => (v.cos()?, f0.neg()),
            UnaryOp::Cos => (v.sin()?.neg(), f0.neg()),
            UnaryOp::Atn => {
                let d = Interval::ONE.add(&v.sqr()?)?;
                let f1 = d.recip()?;
                let f2 = v.scale(-2.0)?.div(&d.sqr()?)?;
                (f1, f2)
            }
            UnaryOp::Acs => {
                let t = Interval::ONE.sub(&v.sqr()?)?;
                if t.lo() <= 0.0 {
                    return Err(IntervalError::PartialDomain);
                }
                let root = t.sqrt()?;
                let f1 = root.recip()?.neg();
                let f2 = v.div(&t.mul(&root)?)?.neg();
                (f1, f2)
            }
        };
        u.chain(f0, f1, Some(f2))
    }

    fn binary(&self, op: BinaryOp, a: Jet, b: Jet) -> IResult<Jet> {
        match op {
            BinaryOp::Add => a.zip(&b, Interval::add),
            BinaryOp::Sub => a.zip(&b, Interval::sub),
            BinaryOp::Mul => a.mul(&b),
            BinaryOp::Div => {
                let value = a.value.div(&b.value)?;
                let r = b.value.recip()?;
                let recip = if b.is_constant() {
                    b.with_value(r)
                } else {
                    let r2 = r.sqr()?;
                    b.chain(r, r2.neg(), Some(r2.mul(&r)?.scale(2.0)?))?
                };
                let mut q = a.mul(&recip)?;
                q.value = value;
                Ok(q)
            }
            BinaryOp::Atn2 => {
                let (x, y) = (&a.value, &b.value);
                let f0 = Interval::atn2(x, y)?;
                if a.is_constant() && b.is_constant() {
                    return Ok(a.with_value(f0));
                }
                if x.lo() < 0.0 && y.lo() < 0.0 && y.hi() >= 0.0 {
                    return Err(IntervalError::PartialDomain);
                }
                let r = x.sqr()?.add(&y.sqr()?)?;
                let r2 = r.sqr()?;
                let fx = y.div(&r)?.neg();
                let fy = x.div(&r)?;
                let fxx = x.mul(y)?.scale(2.0)?.div(&r2)?;
                let fyy = fxx.neg();
                let fxy = y.sqr()?.sub(&x.sqr()?)?.div(&r2)?;
                Jet::chain2(&a, &b, f0, fx, fy, fxx, fxy, fyy)
            }
        }
    }

    fn pow(&self, u: Jet, n: u32) -> IResult<Jet> {
        let v = u.value;
        let f0 = v.powi(n)?;
        if n == 0 || u.is_constant() {
            return Ok(u.with_value(f0));
        }
        if n == 1 {
            return Ok(u);
        }
        let f1 = v.powi(n - 1)?.scale(n as f64)?;
        let f2 = v.powi(n - 2)?.scale(n as f64 * (n - 1) as f64)?;
        u.chain(f0, f1, Some(f2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TaylorError {
    #[error("floating-point overflow while building a Taylor model")]
    Overflow,
    #[error("child box is not contained in the parent box")]
    NotASubBox,
    #[error("expansion center lies outside the box")]
    CenterOutsideBox,
    #[error("dimension mismatch between expression, box and center")]
    DimensionMismatch,
    #[error("the box is not certified to lie in the function's domain")]
    DomainNotCertified,
}

/// Maps an evaluation outcome to "defined / undefined / hard failure".
fn classify<T>(r: IResult<T>) -> Result<Option<T>, TaylorError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(IntervalError::PartialDomain | IntervalError::DivisionByZero) => Ok(None),
        Err(IntervalError::Overflow | IntervalError::InvalidEndpoints) => Err(TaylorError::Overflow),
    }
}

/// Derivative enclosures over a whole box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDerivatives {
    pub value: Interval,
    pub grad: Vec<Interval>,
    /// Packed lower triangle, see [`hess_index`].
    pub hess: Vec<Interval>,
}

impl BoxDerivatives {
    /// Second-order jet evaluation over the box. `Ok(None)` when some
    /// operation leaves its natural domain somewhere in the box.
    pub fn compute(expr: &Expr, domain: &IntervalBox) -> Result<Option<Arc<Self>>, TaylorError> {
        let jet = classify(expr.eval(&JetEval::new(domain.components(), Order::Second)))?;
        Ok(jet.map(|j| {
            Arc::new(Self {
                value: j.value,
                grad: j.grad,
                hess: j.hess,
            })
        }))
    }

    pub fn hess(&self, i: usize, j: usize) -> Interval {
        self.hess[hess_index(i, j)]
    }
}

/// Gradient enclosure over a box from first-order jets, a quarter of the
/// work of [`BoxDerivatives::compute`] in six dimensions. Where both are
/// defined the gradients are the same bits: gradient propagation never reads
/// second derivatives.
pub fn box_gradient(expr: &Expr, domain: &IntervalBox) -> Result<Option<Vec<Interval>>, TaylorError> {
    let jet = classify(expr.eval(&JetEval::new(domain.components(), Order::First)))?;
    Ok(jet.map(|j| j.grad))
}

/// Value and gradient enclosures at the expansion center.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterValues {
    pub value: Interval,
    pub grad: Vec<Interval>,
}

impl CenterValues {
    pub fn compute(expr: &Expr, center: &[f64], order: Order) -> Result<Option<Self>, TaylorError> {
        let vars = center
            .iter()
            .map(|&c| Interval::point(c))
            .collect::<IResult<Vec<_>>>()
            .map_err(|_| TaylorError::Overflow)?;
        let jet = classify(expr.eval(&JetEval::new(&vars, order)))?;
        Ok(jet.map(|j| Self {
            value: j.value,
            grad: j.grad,
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Expansion {
    center: CenterValues,
    derivs: Arc<BoxDerivatives>,
}

/// Second-order Taylor model of a function on a box.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorModel {
    domain: IntervalBox,
    center: Vec<f64>,
    /// `None` when the box is not certified to lie in the natural domain.
    expansion: Option<Expansion>,
}

fn check_inputs(expr: &Expr, domain: &IntervalBox, center: &[f64]) -> Result<(), TaylorError> {
    if center.len() != domain.dim() || expr.max_var().is_some_and(|i| i >= domain.dim()) {
        return Err(TaylorError::DimensionMismatch);
    }
    if !domain.contains_point(center) {
        return Err(TaylorError::CenterOutsideBox);
    }
    Ok(())
}

impl TaylorModel {
    /// Full model: second-order jets at the thin center and over the box.
    pub fn eval_taylor(expr: &Expr, domain: &IntervalBox, center: &[f64]) -> Result<Self, TaylorError> {
        Self::build(expr, domain, center, Order::Second)
    }

    /// Same bounds as [`eval_taylor`](Self::eval_taylor), but second
    /// derivatives are only computed over the box; the center pass carries
    /// values and gradients.
    pub fn compute(expr: &Expr, domain: &IntervalBox, center: &[f64]) -> Result<Self, TaylorError> {
        Self::build(expr, domain, center, Order::First)
    }

    fn build(expr: &Expr, domain: &IntervalBox, center: &[f64], center_order: Order) -> Result<Self, TaylorError> {
        check_inputs(expr, domain, center)?;
        let derivs = BoxDerivatives::compute(expr, domain)?;
        Self::assemble(expr, domain, center, derivs, center_order)
    }

    fn assemble(
        expr: &Expr,
        domain: &IntervalBox,
        center: &[f64],
        derivs: Option<Arc<BoxDerivatives>>,
        center_order: Order,
    ) -> Result<Self, TaylorError> {
        let expansion = match derivs {
            None => None,
            Some(derivs) => {
                CenterValues::compute(expr, center, center_order)?.map(|center| Expansion { center, derivs })
            }
        };
        Ok(Self {
            domain: domain.clone(),
            center: center.to_vec(),
            expansion,
        })
    }

    /// Model from box derivatives computed earlier for the same expression
    /// and box (`None` when the box is not certified).
    pub fn with_box_derivatives(
        expr: &Expr,
        domain: &IntervalBox,
        center: &[f64],
        derivs: Option<Arc<BoxDerivatives>>,
    ) -> Result<Self, TaylorError> {
        check_inputs(expr, domain, center)?;
        if derivs.as_ref().is_some_and(|d| d.grad.len() != domain.dim()) {
            return Err(TaylorError::DimensionMismatch);
        }
        Self::assemble(expr, domain, center, derivs, Order::First)
    }

    /// Model for a sub-box reusing this model's box derivatives, which stay
    /// valid by inclusion. Only the center values are recomputed.
    pub fn inherit(&self, expr: &Expr, child_box: &IntervalBox, child_center: &[f64]) -> Result<Self, TaylorError> {
        if !child_box.is_subset_of(&self.domain) {
            return Err(TaylorError::NotASubBox);
        }
        check_inputs(expr, child_box, child_center)?;
        let derivs = self.expansion.as_ref().map(|e| e.derivs.clone());
        Self::assemble(expr, child_box, child_center, derivs, Order::First)
    }

    /// `sum_i weights[i] * models[i]`; all models must share box and center.
    pub fn weighted_sum(models: &[&TaylorModel], weights: &[Interval]) -> Result<Self, TaylorError> {
        let first = models.first().ok_or(TaylorError::DimensionMismatch)?;
        if models.len() != weights.len()
            || models
                .iter()
                .any(|m| m.domain != first.domain || m.center != first.center)
        {
            return Err(TaylorError::DimensionMismatch);
        }
        let n = first.domain.dim();
        let zero = Expansion {
            center: CenterValues {
                value: Interval::ZERO,
                grad: vec![Interval::ZERO; n],
            },
            derivs: Arc::new(BoxDerivatives {
                value: Interval::ZERO,
                grad: vec![Interval::ZERO; n],
                hess: vec![Interval::ZERO; packed_len(n)],
            }),
        };
        let mut acc = zero;
        for (m, w) in models.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            let e = m.expansion.as_ref().ok_or(TaylorError::DomainNotCertified)?;
            acc = add_scaled(&acc, e, w).map_err(|_| TaylorError::Overflow)?;
        }
        Ok(Self {
            domain: first.domain.clone(),
            center: first.center.clone(),
            expansion: Some(acc),
        })
    }

    pub fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn domain_ok(&self) -> bool {
        self.expansion.is_some()
    }

    pub fn f_center(&self) -> Option<Interval> {
        self.expansion.as_ref().map(|e| e.center.value)
    }

    pub fn grad_center(&self) -> Option<&[Interval]> {
        self.expansion.as_ref().map(|e| e.center.grad.as_slice())
    }

    pub fn box_derivatives(&self) -> Option<&Arc<BoxDerivatives>> {
        self.expansion.as_ref().map(|e| &e.derivs)
    }

    pub fn grad_box(&self) -> Option<&[Interval]> {
        self.expansion.as_ref().map(|e| e.derivs.grad.as_slice())
    }

    pub fn hess_box(&self, i: usize, j: usize) -> Option<Interval> {
        self.expansion.as_ref().map(|e| e.derivs.hess(i, j))
    }

    /// Certified upper bound of the function over the box:
    ///
    /// `sup f(c) + sum_j |g_j| w_j + 1/2 (sum_i max(H_ii, 0) w_i^2 + 2 sum_{i>j} |H_ij| w_i w_j)`
    ///
    /// with `w_j = max(c_j - lo_j, hi_j - c_j)`, all rounded upward. Diagonal
    /// terms use `(x_i - c_i)^2 in [0, w_i^2]`.
    pub fn upper_bound(&self) -> Result<f64, TaylorError> {
        let e = self.expansion.as_ref().ok_or(TaylorError::DomainNotCertified)?;
        let w: Vec<f64> = self
            .domain
            .components()
            .iter()
            .zip(&self.center)
            .map(|(x, &c)| sub_up(c, x.lo()).max(sub_up(x.hi(), c)))
            .collect();
        let mut bound = e.center.value.hi();
        for (g, &wj) in e.center.grad.iter().zip(&w) {
            bound = add_up(bound, mul_up(g.mag(), wj));
        }
        let mut quad = 0.0;
        for i in 0..w.len() {
            let hii = e.derivs.hess(i, i).hi().max(0.0);
            quad = add_up(quad, mul_up(hii, mul_up(w[i], w[i])));
            for j in 0..i {
                let hij = e.derivs.hess(i, j).mag();
                quad = add_up(quad, mul_up(2.0 * hij, mul_up(w[i], w[j])));
            }
        }
        bound = add_up(bound, 0.5 * quad);
        if bound.is_finite() {
            Ok(bound)
        } else {
            Err(TaylorError::Overflow)
        }
    }

    /// Sign of the partial derivative along `dim` over the whole box.
    pub fn partial_sign(&self, dim: usize) -> Option<Sign> {
        self.grad_box().and_then(|g| g.get(dim)).map(Interval::sign)
    }
}

fn add_scaled(acc: &Expansion, e: &Expansion, w: &Interval) -> IResult<Expansion> {
    let axpy = |a: &Interval, b: &Interval| a.add(&w.mul(b)?);
    let zip = |a: &[Interval], b: &[Interval]| -> IResult<Vec<Interval>> {
        a.iter().zip(b).map(|(x, y)| axpy(x, y)).collect()
    };
    Ok(Expansion {
        center: CenterValues {
            value: axpy(&acc.center.value, &e.center.value)?,
            grad: zip(&acc.center.grad, &e.center.grad)?,
        },
        derivs: Arc::new(BoxDerivatives {
            value: axpy(&acc.derivs.value, &e.derivs.value)?,
            grad: zip(&acc.derivs.grad, &e.derivs.grad)?,
            hess: zip(&acc.derivs.hess, &e.derivs.hess)?,
        }),
    })
}
