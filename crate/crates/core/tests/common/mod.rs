//! Shared helpers for the integration tests: a high-precision reference
//! evaluator built on MPFR and random generators for expressions and specs.
#![allow(dead_code)]

use ineqcert::cert::CertNode;
use ineqcert::domain::{Direction, IntervalBox};
use ineqcert::dsl;
use ineqcert::expr::{BinaryOp, Expr, UnaryOp};
use ineqcert::interval::{Interval, IntervalError};
use ineqcert::spec::{BoundLiterals, InequalitySpec};
use ineqcert::taylor::{BoxDerivatives, TaylorModel};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

pub const PREC: u32 = 256;

/// Reference value of an expression at a point.
#[derive(Debug, Clone)]
pub struct Reference {
    pub value: Float,
    /// Smallest distance of any partial operation's argument from the edge
    /// of its domain (infinite when there is none).
    pub slack: f64,
}

pub fn float(x: f64) -> Float {
    Float::with_val(PREC, x)
}

pub fn pi() -> Float {
    Float::with_val(PREC, Constant::Pi)
}

/// `None` when some operation is applied outside its natural domain.
pub fn reference(e: &Expr, x: &[f64]) -> Option<Reference> {
    let mut slack = f64::INFINITY;
    let value = eval(e, x, &mut slack)?;
    Some(Reference { value, slack })
}

fn eval(e: &Expr, x: &[f64], slack: &mut f64) -> Option<Float> {
    Some(match e {
        Expr::Const(c) => {
            let text = c.text();
            Float::with_val(PREC, Float::parse(text).ok()?)
        }
        Expr::Var(i) => float(x[*i]),
        Expr::Pi => pi(),
        Expr::Unary(op, a) => {
            let a = eval(a, x, slack)?;
            match op {
                UnaryOp::Neg => -a,
                UnaryOp::Sqrt => {
                    if a.is_sign_negative() && !a.is_zero() {
                        return None;
                    }
                    *slack = slack.min(a.to_f64());
                    a.sqrt()
                }
                UnaryOp::Sin => a.sin(),
                UnaryOp::Cos => a.cos(),
                UnaryOp::Atn => a.atan(),
                UnaryOp::Acs => {
                    let room = Float::with_val(PREC, 1 - a.clone().abs());
                    if room.is_sign_negative() && !room.is_zero() {
                        return None;
                    }
                    *slack = slack.min(room.to_f64());
                    a.acos()
                }
            }
        }
        Expr::Binary(op, a, b) => {
            let a = eval(a, x, slack)?;
            let b = eval(b, x, slack)?;
            match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => {
                    if b.is_zero() {
                        return None;
                    }
                    *slack = slack.min(b.to_f64().abs());
                    a / b
                }
                BinaryOp::Atn2 => {
                    if a.is_zero() && b.is_zero() {
                        return None;
                    }
                    *slack = slack.min(a.to_f64().abs().max(b.to_f64().abs()));
                    // atn2(abscissa, ordinate) = atan2(ordinate, abscissa); the
                    // angle range is (-pi, pi], so a zero ordinate is +0.
                    let b = if b.is_zero() { Float::new(PREC) } else { b };
                    b.atan2(&a)
                }
            }
        }
        Expr::Pow(a, n) => eval(a, x, slack)?.pow(*n),
    })
}

/// Exact containment test of a high-precision value in an interval.
pub fn encloses(iv: &Interval, v: &Float) -> bool {
    *v >= iv.lo() && *v <= iv.hi()
}

/// 50 significant digits of pi, as an exact rational.
pub fn pi_50_digits() -> Rational {
    Rational::from_str_radix("31415926535897932384626433832795028841971693993751", 10).unwrap()
        / Rational::from(10u32).pow(49u32)
}

pub fn random_point<R: Rng>(rng: &mut R, b: &IntervalBox) -> Vec<f64> {
    b.components()
        .iter()
        .map(|c| {
            let x = c.lo() + rng.gen::<f64>() * (c.hi() - c.lo());
            x.clamp(c.lo(), c.hi())
        })
        .collect()
}

pub fn random_box<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> IntervalBox {
    let parts = (0..dim)
        .map(|_| {
            let a = rng.gen_range(-scale..scale);
            let w = rng.gen_range(0.0..scale);
            Interval::new(a, a + w).unwrap()
        })
        .collect();
    IntervalBox::new(parts).unwrap()
}

const LITERALS: &[&str] = &[
    "0", "1", "2", "3", "0.5", "0.1", "0.25", "1.5", "7", "1e-3", "2.5e1", "0.333",
];

pub fn random_literal<R: Rng>(rng: &mut R) -> String {
    LITERALS.choose(rng).unwrap().to_string()
}

/// Random expression over `dim` variables of depth at most `depth`.
/// Constants are nonnegative literals, as the grammar writes negative ones
/// with a unary minus.
pub fn random_expr<R: Rng>(rng: &mut R, dim: usize, depth: usize) -> Expr {
    if depth <= 1 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0..=5 => Expr::var(rng.gen_range(0..dim)),
            6 => Expr::Pi,
            _ => Expr::num(&random_literal(rng)),
        };
    }
    let sub = |rng: &mut R| random_expr(rng, dim, depth - 1);
    match rng.gen_range(0..12) {
        0 => Expr::unary(UnaryOp::Neg, sub(rng)),
        1 => Expr::unary(UnaryOp::Sqrt, sub(rng)),
        2 => Expr::unary(UnaryOp::Sin, sub(rng)),
        3 => Expr::unary(UnaryOp::Cos, sub(rng)),
        4 => Expr::unary(UnaryOp::Atn, sub(rng)),
        5 => Expr::unary(UnaryOp::Acs, sub(rng)),
        6 => Expr::binary(BinaryOp::Add, sub(rng), sub(rng)),
        7 => Expr::binary(BinaryOp::Sub, sub(rng), sub(rng)),
        8 => Expr::binary(BinaryOp::Mul, sub(rng), sub(rng)),
        9 => Expr::binary(BinaryOp::Div, sub(rng), sub(rng)),
        10 => Expr::atn2(sub(rng), sub(rng)),
        _ => sub(rng).pow(rng.gen_range(0..5)),
    }
}

/// Random expression built only from operations defined everywhere and
/// analytic, so Taylor models exist on every box.
pub fn random_smooth_expr<R: Rng>(rng: &mut R, dim: usize, depth: usize) -> Expr {
    if depth <= 1 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..8) {
            0..=5 => Expr::var(rng.gen_range(0..dim)),
            6 => Expr::Pi,
            _ => Expr::num(&random_literal(rng)),
        };
    }
    let sub = |rng: &mut R| random_smooth_expr(rng, dim, depth - 1);
    match rng.gen_range(0..9) {
        0 => -sub(rng),
        1 => sub(rng).sin(),
        2 => sub(rng).cos(),
        3 => sub(rng).atn(),
        4 => sub(rng) + sub(rng),
        5 => sub(rng) - sub(rng),
        6 => sub(rng) * sub(rng),
        7 => sub(rng).pow(rng.gen_range(2..4)),
        // 1 / (1 + u^2) and sqrt(2 + sin u) stay away from their singular points.
        _ => {
            if rng.gen_bool(0.5) {
                Expr::num("1") / (Expr::num("1") + sub(rng).pow(2))
            } else {
                (Expr::num("2") + sub(rng).sin()).sqrt()
            }
        }
    }
}

pub fn random_spec<R: Rng>(rng: &mut R, id: &str, depth: usize) -> InequalitySpec {
    let dim = rng.gen_range(1..4);
    let bounds = (0..dim)
        .map(|_| {
            let lo = rng.gen_range(-3..3);
            let w = *["0.5", "1", "2.25", "3"].choose(rng).unwrap();
            let hi: f64 = lo as f64 + w.parse::<f64>().unwrap();
            BoundLiterals {
                lo: lo.to_string(),
                hi: hi.to_string(),
            }
        })
        .collect();
    let k = rng.gen_range(1..4);
    let disjuncts = (0..k).map(|_| random_expr(rng, dim, depth)).collect();
    let constraints = (0..rng.gen_range(0..2)).map(|_| random_expr(rng, dim, 3)).collect();
    InequalitySpec::new(id, "generated", bounds, disjuncts, constraints).unwrap()
}

/// Checks the inequality at one point in high precision: some disjunct is
/// defined and negative there, and the point satisfies every constraint.
pub fn holds_at(spec: &InequalitySpec, x: &[f64]) -> bool {
    let in_constraints = spec
        .constraints()
        .iter()
        .all(|g| reference(g, x).is_some_and(|r| r.value >= 0));
    in_constraints
        && spec
            .disjuncts()
            .iter()
            .any(|f| reference(f, x).is_some_and(|r| r.value < 0))
}

/// The interval operations exercised by the fuzzers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow(u32),
    Sqrt,
    Sin,
    Cos,
    Atn,
    Acs,
    Atn2,
}

pub const OPS: &[Op] = &[
    Op::Neg,
    Op::Add,
    Op::Sub,
    Op::Mul,
    Op::Div,
    Op::Pow(0),
    Op::Pow(1),
    Op::Pow(2),
    Op::Pow(3),
    Op::Pow(6),
    Op::Sqrt,
    Op::Sin,
    Op::Cos,
    Op::Atn,
    Op::Acs,
    Op::Atn2,
];

pub fn apply_interval(op: Op, x: &Interval, y: &Interval) -> Result<Interval, IntervalError> {
    match op {
        Op::Neg => Ok(x.neg()),
        Op::Add => x.add(y),
        Op::Sub => x.sub(y),
        Op::Mul => x.mul(y),
        Op::Div => x.div(y),
        Op::Pow(n) => x.powi(n),
        Op::Sqrt => x.sqrt(),
        Op::Sin => x.sin(),
        Op::Cos => x.cos(),
        Op::Atn => x.atn(),
        Op::Acs => x.acs(),
        Op::Atn2 => Interval::atn2(x, y),
    }
}

/// Exact (high-precision) value of the operation at a point, `None` outside
/// its domain.
pub fn apply_exact(op: Op, x: f64, y: f64) -> Option<Float> {
    let (fx, fy) = (float(x), float(y));
    Some(match op {
        Op::Neg => -fx,
        Op::Add => fx + fy,
        Op::Sub => fx - fy,
        Op::Mul => fx * fy,
        Op::Div => {
            if y == 0.0 {
                return None;
            }
            fx / fy
        }
        Op::Pow(n) => fx.pow(n),
        Op::Sqrt => {
            if x < 0.0 {
                return None;
            }
            fx.sqrt()
        }
        Op::Sin => fx.sin(),
        Op::Cos => fx.cos(),
        Op::Atn => fx.atan(),
        Op::Acs => {
            if x.abs() > 1.0 {
                return None;
            }
            fx.acos()
        }
        Op::Atn2 => {
            if x == 0.0 && y == 0.0 {
                return None;
            }
            let fy = if y == 0.0 { Float::new(PREC) } else { fy };
            fy.atan2(&fx)
        }
    })
}

/// A double from a mixture of scales, including integers and values near
/// the trigonometric and inverse-trigonometric critical points.
pub fn random_double<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..8) {
        0 => rng.gen_range(-10..=10) as f64,
        1 => rng.gen_range(-1.0..=1.0),
        2 => rng.gen_range(-10.0..10.0),
        3 => rng.gen_range(-1e3..1e3),
        4 => rng.gen_range(-1e-3..1e-3),
        5 => {
            let k = rng.gen_range(-8..=8) as f64;
            k * std::f64::consts::FRAC_PI_2 + rng.gen_range(-1e-9..1e-9)
        }
        6 => {
            let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            s * (1.0 - rng.gen_range(0.0..1e-6))
        }
        _ => {
            let m: f64 = rng.gen_range(-1.0..1.0);
            m * 2f64.powi(rng.gen_range(-40..40))
        }
    }
}

pub fn random_interval<R: Rng>(rng: &mut R) -> Interval {
    let a = random_double(rng);
    let b = match rng.gen_range(0..4) {
        0 => a,
        1 => a + rng.gen_range(0.0..1e-6) * a.abs().max(1.0),
        _ => random_double(rng),
    };
    Interval::new(a.min(b), a.max(b)).unwrap()
}

/// A member of the interval, endpoints included with positive probability.
pub fn random_member<R: Rng>(rng: &mut R, x: &Interval) -> f64 {
    match rng.gen_range(0..6) {
        0 => x.lo(),
        1 => x.hi(),
        _ => (x.lo() + rng.gen::<f64>() * (x.hi() - x.lo())).clamp(x.lo(), x.hi()),
    }
}

/// A random subinterval.
pub fn random_subinterval<R: Rng>(rng: &mut R, x: &Interval) -> Interval {
    let a = random_member(rng, x);
    let b = random_member(rng, x);
    Interval::new(a.min(b), a.max(b)).unwrap()
}

/// One random containment instance; returns a description of the violation
/// if the interval result misses the exact value.
pub fn containment_instance<R: Rng>(rng: &mut R) -> Option<String> {
    let op = *OPS.choose(rng).unwrap();
    let x = random_interval(rng);
    let y = random_interval(rng);
    let (px, py) = (random_member(rng, &x), random_member(rng, &y));
    let exact = apply_exact(op, px, py)?;
    let Ok(r) = apply_interval(op, &x, &y) else {
        return None;
    };
    (!encloses(&r, &exact)).then(|| format!("{op:?} {x:?} {y:?} at ({px:e}, {py:e}): {r:?} misses {exact}"))
}

/// A node of a certificate tree with its implicit box and replay path.
pub struct Located {
    pub index: usize,
    pub path: String,
    pub domain: IntervalBox,
    pub node: CertNode,
}

/// Every node in preorder.
pub fn locate(root: &CertNode, domain: &IntervalBox) -> Vec<Located> {
    fn go(n: &CertNode, domain: &IntervalBox, path: String, out: &mut Vec<Located>) {
        out.push(Located {
            index: out.len(),
            path: path.clone(),
            domain: domain.clone(),
            node: n.clone(),
        });
        match n {
            CertNode::Mono { dim, direction, child } => {
                go(child, &domain.face(*dim, *direction).unwrap(), format!("{path}/M"), out)
            }
            CertNode::Split { dim, left, right } => {
                let (l, r) = domain.bisect(*dim).unwrap();
                go(left, &l, format!("{path}/L"), out);
                go(right, &r, format!("{path}/R"), out);
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(root, domain, "root".into(), &mut out);
    out
}

/// Copy of the tree with the node at preorder `index` replaced.
pub fn replace_at(root: &CertNode, index: usize, new: &CertNode) -> CertNode {
    fn go(n: &CertNode, index: usize, new: &CertNode, next: &mut usize) -> CertNode {
        let me = *next;
        *next += 1;
        if me == index {
            // Keep numbering consistent with `locate` by skipping the subtree.
            *next += n.size() - 1;
            return new.clone();
        }
        match n {
            CertNode::Mono { dim, direction, child } => CertNode::Mono {
                dim: *dim,
                direction: *direction,
                child: Box::new(go(child, index, new, next)),
            },
            CertNode::Split { dim, left, right } => {
                let left = Box::new(go(left, index, new, next));
                let right = Box::new(go(right, index, new, next));
                CertNode::Split { dim: *dim, left, right }
            }
            other => other.clone(),
        }
    }
    go(root, index, new, &mut 0)
}

/// Sampling oracle: whether disjunct `i` is defined, satisfies the
/// constraints and is negative at every sampled point of the box (corners,
/// midpoint and random points).
pub fn sampled_negative<R: Rng>(
    rng: &mut R,
    spec: &InequalitySpec,
    i: usize,
    domain: &IntervalBox,
    samples: usize,
) -> bool {
    let f = &spec.disjuncts()[i];
    let n = domain.dim();
    let corners = (0..1usize << n.min(10)).map(|mask| {
        (0..n)
            .map(|j| {
                if mask >> j & 1 == 1 {
                    domain.get(j).hi()
                } else {
                    domain.get(j).lo()
                }
            })
            .collect::<Vec<_>>()
    });
    let random: Vec<Vec<f64>> = (0..samples).map(|_| random_point(rng, domain)).collect();
    corners
        .chain(std::iter::once(domain.midpoint()))
        .chain(random)
        .all(|x| {
            spec.constraints()
                .iter()
                .all(|g| reference(g, &x).is_some_and(|r| r.value >= 0))
                && reference(f, &x).is_some_and(|r| r.value < 0)
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    /// Semantics-changing: replay must reject at the mutated node.
    Reject,
    /// Semantics-preserving: replay must still accept.
    Accept,
}

pub struct Mutation {
    pub path: String,
    pub what: String,
    pub expect: Expect,
    pub root: CertNode,
}

/// Single-node mutations of a certificate. Mutations whose effect the
/// sampling oracle cannot decide (a replacement leaf whose disjunct does hold
/// on the box) are left out.
pub fn mutations<R: Rng>(rng: &mut R, spec: &InequalitySpec, root: &CertNode) -> Vec<Mutation> {
    let k = spec.disjuncts().len();
    let n = spec.dim();
    let mut out = Vec::new();
    for loc in locate(root, spec.domain()) {
        let mut changes: Vec<(String, Expect, CertNode)> = Vec::new();
        // Replacing the node by a plain leaf proves nothing where the leaf's
        // disjunct is not negative on the box.
        let leaves = |rng: &mut R, label: &str, skip: Option<usize>, center: Option<Vec<f64>>| {
            let mut v = Vec::new();
            for i in (0..=k).filter(|&i| Some(i) != skip) {
                if i < k && sampled_negative(rng, spec, i, &loc.domain, 200) {
                    continue;
                }
                let node = CertNode::Leaf {
                    disjunct: i,
                    bound: -1.0,
                    center: center.clone(),
                };
                v.push((format!("{label} -> leaf {i}"), Expect::Reject, node));
            }
            v
        };
        match &loc.node {
            CertNode::Leaf {
                disjunct,
                bound,
                center,
            } => {
                changes.extend(leaves(
                    rng,
                    &format!("leaf {disjunct}"),
                    Some(*disjunct),
                    center.clone(),
                ));
                let advisory = CertNode::Leaf {
                    disjunct: *disjunct,
                    bound: if *bound == -1.0 { -2.0 } else { -1.0 },
                    center: center.clone(),
                };
                changes.push(("leaf bound".into(), Expect::Accept, advisory));
                let outside: Vec<f64> = loc.domain.components().iter().map(|c| c.hi() + 1.0).collect();
                let moved = CertNode::Leaf {
                    disjunct: *disjunct,
                    bound: *bound,
                    center: Some(outside),
                };
                changes.push(("leaf center outside the box".into(), Expect::Reject, moved));
            }
            CertNode::LinComb { weights, bound, center } => {
                let zero = CertNode::LinComb {
                    weights: vec![Ratio::from_integer(0); weights.len()],
                    bound: *bound,
                    center: center.clone(),
                };
                changes.push(("lincomb weights all zero".into(), Expect::Reject, zero));
                let short = CertNode::LinComb {
                    weights: weights[1..].to_vec(),
                    bound: *bound,
                    center: center.clone(),
                };
                changes.push(("lincomb weight dropped".into(), Expect::Reject, short));
                changes.extend(leaves(rng, "lincomb", None, center.clone()));
            }
            CertNode::Mono { dim, direction, child } => {
                let flipped = match direction {
                    Direction::Upper => Direction::Lower,
                    Direction::Lower => Direction::Upper,
                };
                let node = CertNode::Mono {
                    dim: *dim,
                    direction: flipped,
                    child: child.clone(),
                };
                changes.push((
                    format!("mono direction {direction:?} -> {flipped:?}"),
                    Expect::Reject,
                    node,
                ));
                let node = CertNode::Mono {
                    dim: n,
                    direction: *direction,
                    child: child.clone(),
                };
                changes.push((format!("mono dim {dim} -> {n}"), Expect::Reject, node));
                changes.extend(leaves(rng, "mono", None, None));
            }
            CertNode::Split { dim, left, right } => {
                for d in (0..=n).filter(|d| d != dim) {
                    let node = CertNode::Split {
                        dim: d,
                        left: left.clone(),
                        right: right.clone(),
                    };
                    changes.push((format!("split dim {dim} -> {d}"), Expect::Reject, node));
                }
                changes.extend(leaves(rng, "split", None, None));
            }
        }
        for (what, expect, node) in changes {
            out.push(Mutation {
                path: loc.path.clone(),
                what,
                expect,
                root: replace_at(root, loc.index, &node),
            });
        }
    }
    out
}

pub fn random_center<R: Rng>(rng: &mut R, b: &IntervalBox) -> Vec<f64> {
    if rng.gen_bool(0.5) {
        b.midpoint()
    } else {
        random_point(rng, b)
    }
}

pub fn random_case<R: Rng>(rng: &mut R) -> (Expr, IntervalBox) {
    let dim = rng.gen_range(1..=3);
    let depth = rng.gen_range(1..=5);
    let e = if rng.gen_bool(0.6) {
        random_smooth_expr(rng, dim, depth)
    } else {
        random_expr(rng, dim, depth)
    };
    let scale = [0.01, 0.3, 2.0][rng.gen_range(0..3)];
    (e, random_box(rng, dim, scale))
}

/// Taylor upper bounds against the reference value at one random point for
/// each of `cases` random (expression, box, center) triples. Returns the
/// number of triples with a usable model and any violations.
pub fn taylor_soundness<R: Rng>(rng: &mut R, cases: usize) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut violations = Vec::new();
    for _ in 0..cases {
        let (e, b) = random_case(rng);
        let c = random_center(rng, &b);
        let Ok(m) = TaylorModel::eval_taylor(&e, &b, &c) else {
            continue;
        };
        if !m.domain_ok() {
            continue;
        }
        let Ok(u) = m.upper_bound() else { continue };
        let x = random_point(rng, &b);
        checked += 1;
        match reference(&e, &x) {
            Some(r) if r.value <= u => {}
            Some(r) => violations.push(format!(
                "{} on {b:?}: f({x:?}) = {} > {u}",
                dsl::print_expr(&e),
                r.value
            )),
            None => violations.push(format!("{} undefined at {x:?} in a certified box", dsl::print_expr(&e))),
        }
    }
    (checked, violations)
}

/// One-argument and two-argument builtins with a region of interior points.
pub fn builtins() -> Vec<(&'static str, Expr, IntervalBox)> {
    let (x0, x1) = (Expr::var(0), Expr::var(1));
    let b = |parts: &[(f64, f64)]| {
        IntervalBox::new(parts.iter().map(|&(a, c)| Interval::new(a, c).unwrap()).collect()).unwrap()
    };
    vec![
        ("neg", -x0.clone(), b(&[(-3.0, 3.0)])),
        ("add", x0.clone() + x1.clone(), b(&[(-3.0, 3.0), (-3.0, 3.0)])),
        ("sub", x0.clone() - x1.clone(), b(&[(-3.0, 3.0), (-3.0, 3.0)])),
        ("mul", x0.clone() * x1.clone(), b(&[(-3.0, 3.0), (-3.0, 3.0)])),
        ("div", x0.clone() / x1.clone(), b(&[(-3.0, 3.0), (0.5, 3.0)])),
        ("pow", x0.clone().pow(5), b(&[(-2.0, 2.0)])),
        ("sqrt", x0.clone().sqrt(), b(&[(0.01, 9.0)])),
        ("sin", x0.clone().sin(), b(&[(-7.0, 7.0)])),
        ("cos", x0.clone().cos(), b(&[(-7.0, 7.0)])),
        ("atn", x0.clone().atn(), b(&[(-20.0, 20.0)])),
        ("acs", x0.clone().acs(), b(&[(-0.99, 0.99)])),
        ("atn2", Expr::atn2(x0, x1), b(&[(-3.0, 3.0), (0.1, 3.0)])),
    ]
}

/// Central differences of the reference function (step `1e-6` times the
/// region's width) against box gradients over the thin box spanned by the
/// step, with a relative tolerance of `1e-4`.
pub fn gradient_violations<R: Rng>(rng: &mut R, points: usize) -> Vec<String> {
    let mut violations = Vec::new();
    for (name, e, region) in builtins() {
        for _ in 0..points {
            let x = random_point(rng, &region);
            let h: Vec<f64> = region.components().iter().map(|c| 1e-6 * c.width()).collect();
            let thin = IntervalBox::new(
                x.iter()
                    .zip(&h)
                    .map(|(&xi, &hi)| Interval::new(xi - hi, xi + hi).unwrap())
                    .collect(),
            )
            .unwrap();
            let d = BoxDerivatives::compute(&e, &thin).unwrap().unwrap();
            for j in 0..x.len() {
                let (mut plus, mut minus) = (x.clone(), x.clone());
                plus[j] += h[j];
                minus[j] -= h[j];
                let span = Float::with_val(PREC, plus[j] - minus[j]);
                let fd = (reference(&e, &plus).unwrap().value - reference(&e, &minus).unwrap().value) / span;
                let fd = fd.to_f64();
                let tol = 1e-4 * fd.abs().max(1e-8);
                let g = d.grad[j];
                if !(g.lo() <= fd + tol && fd - tol <= g.hi()) {
                    violations.push(format!("{name}: d/dx{j} at {x:?} is {fd}, box gradient {g:?}"));
                }
            }
        }
    }
    violations
}
