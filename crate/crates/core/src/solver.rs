//! Branch-and-bound verification of an inequality over its domain.
//!
//! Every box is handled by the first rule that applies, in a fixed order:
//!
//! 1. **mono**: every disjunct has a partial derivative of one fixed sign in
//!    some dimension, so the box reduces to the face where all of them are
//!    largest and the dimension drops;
//! 2. **bound**: some disjunct is defined on the box and its Taylor upper
//!    bound is negative;
//! 3. **lincomb** (opt-in): the sum of all defined disjuncts has a negative
//!    upper bound, so at every point one of them is negative;
//! 4. **split**: bisect the widest dimension (relative to its magnitude) and
//!    recurse, up to `max_depth` levels.
//!
//! Monotonicity comes first because it is decided by gradients alone and a
//! face is strictly easier than the box; the bound rule then runs on the
//! face.
//!
//! A box that lies partly outside the constraint set, or outside a
//! disjunct's natural domain, simply skips the rules needing it and is split.
//!
//! Search is data-parallel over subtrees. Results are assembled by tree
//! position and a failure always reports the leftmost failing box, so the
//! certificate, the failure witness and the statistics depend only on the
//! spec and the configuration, never on the number of workers.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cert::{CertNode, Certificate};
use crate::checks::{constraints_hold, lincomb_bound};
use crate::domain::{Direction, IntervalBox};
use crate::expr::{eval_point, Expr};
use crate::interval::{Interval, Sign};
use crate::spec::InequalitySpec;
use crate::taylor::{box_gradient, CenterValues, Order, TaylorError, TaylorModel};

/// Where Taylor expansions are centered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Strategy {
    /// The box midpoint.
    #[default]
    #[serde(rename = "center")]
    CenterMid,
    /// A few gradient-ascent steps toward the maximum of the most promising
    /// disjunct.
    #[serde(rename = "hotspot")]
    HotSpot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_depth: u32,
    pub strategy: Strategy,
    pub lincomb: bool,
    pub jobs: usize,
    /// Try bounds built from the parent's second derivatives before
    /// computing fresh ones.
    pub hessian_reuse: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_depth: 40,
            strategy: Strategy::CenterMid,
            lincomb: false,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            hessian_reuse: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailureReason {
    /// All rules failed at the depth limit.
    MaxDepth,
    /// Arithmetic overflow, or a box too small to bisect.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Proved(Certificate),
    /// `witness` is the leftmost box no rule could settle. It is not a
    /// counterexample.
    Failed {
        witness: IntervalBox,
        reason: FailureReason,
    },
}

impl Outcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, Outcome::Proved(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Proved(c) => Some(c),
            Outcome::Failed { .. } => None,
        }
    }
}

/// Number of nodes of each kind in the decision tree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafCounts {
    pub leaf: u64,
    pub lincomb: u64,
    pub mono: u64,
    pub split: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub boxes_visited: u64,
    pub max_depth_reached: u32,
    pub leaf_counts: LeafCounts,
    #[serde(with = "seconds")]
    pub wall_time: Duration,
}

impl Stats {
    fn absorb(&mut self, other: &Stats) {
        self.boxes_visited += other.boxes_visited;
        self.max_depth_reached = self.max_depth_reached.max(other.max_depth_reached);
        let (a, b) = (&mut self.leaf_counts, &other.leaf_counts);
        a.leaf += b.leaf;
        a.lincomb += b.lincomb;
        a.mono += b.mono;
        a.split += b.split;
    }
}

mod seconds {
    use super::*;

    pub fn serialize<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub stats: Stats,
}

/// Verifies one inequality.
pub fn verify(spec: &InequalitySpec, cfg: &SolverConfig) -> SolveResult {
    with_pool(cfg, || solve(spec, cfg))
}

/// Verifies several inequalities with one worker pool shared by all of
/// them. Results are in input order.
pub fn verify_all(specs: &[InequalitySpec], cfg: &SolverConfig) -> Vec<SolveResult> {
    with_pool(cfg, || {
        #[cfg(feature = "parallel")]
        if cfg.jobs > 1 {
            use rayon::prelude::*;
            return specs.par_iter().map(|s| solve(s, cfg)).collect();
        }
        specs.iter().map(|s| solve(s, cfg)).collect()
    })
}

#[cfg(feature = "parallel")]
fn with_pool<T: Send>(cfg: &SolverConfig, f: impl FnOnce() -> T + Send) -> T {
    if cfg.jobs <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_pool<T>(_cfg: &SolverConfig, f: impl FnOnce() -> T) -> T {
    f()
}

fn solve(spec: &InequalitySpec, cfg: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let search = Search {
        spec,
        cfg,
        parallel: cfg!(feature = "parallel") && cfg.jobs > 1,
        cancel: Cancel::default(),
    };
    let (result, mut stats) = search.visit(spec.domain().clone(), 0, Vec::new(), None);
    stats.wall_time = start.elapsed();
    let outcome = match result {
        Ok(root) => Outcome::Proved(Certificate::new(spec.id(), root)),
        Err(Failure::Box { witness, reason }) => Outcome::Failed { witness, reason },
        Err(Failure::Cancelled) => unreachable!("the root is never cancelled"),
    };
    SolveResult { outcome, stats }
}

/// Tree position: 0 = left child, 1 = monotone face, 2 = right child.
/// Lexicographic order on paths is left-to-right order in the tree.
type Path = Vec<u8>;

/// Remembers the leftmost failing box found so far; work strictly to its
/// right can no longer affect the result and is abandoned.
#[derive(Default)]
struct Cancel {
    any: AtomicBool,
    leftmost: Mutex<Option<Path>>,
}

impl Cancel {
    fn record(&self, path: &Path) {
        let mut slot = self.leftmost.lock().unwrap_or_else(|e| e.into_inner());
        if slot.as_ref().is_none_or(|p| path < p) {
            *slot = Some(path.clone());
        }
        self.any.store(true, Ordering::Release);
    }

    fn is_cancelled(&self, path: &Path) -> bool {
        if !self.any.load(Ordering::Acquire) {
            return false;
        }
        let slot = self.leftmost.lock().unwrap_or_else(|e| e.into_inner());
        slot.as_ref().is_some_and(|p| p < path)
    }
}

enum Failure {
    Box {
        witness: IntervalBox,
        reason: FailureReason,
    },
    /// Abandoned because a box further left failed; always discarded.
    Cancelled,
}

type Visit = (Result<CertNode, Failure>, Stats);

struct Search<'a> {
    spec: &'a InequalitySpec,
    cfg: &'a SolverConfig,
    parallel: bool,
    cancel: Cancel,
}

/// Per-disjunct models of a box, handed to its children for reuse.
type Models = Arc<Vec<Option<TaylorModel>>>;

impl Search<'_> {
    fn fail(&self, path: &Path, witness: IntervalBox, reason: FailureReason, stats: Stats) -> Visit {
        if self.parallel {
            self.cancel.record(path);
        }
        (Err(Failure::Box { witness, reason }), stats)
    }

    fn visit(&self, domain: IntervalBox, depth: u32, path: Path, parent: Option<Models>) -> Visit {
        if self.parallel && self.cancel.is_cancelled(&path) {
            return (Err(Failure::Cancelled), Stats::default());
        }
        let mut stats = Stats {
            boxes_visited: 1,
            max_depth_reached: depth,
            ..Stats::default()
        };
        let inconclusive = |stats| self.fail(&path, domain.clone(), FailureReason::Inconclusive, stats);

        let certified = match constraints_hold(self.spec, &domain) {
            Ok(c) => c,
            Err(_) => return inconclusive(stats),
        };
        let k = self.spec.disjuncts().len();
        let mut fresh: Vec<Option<TaylorModel>> = vec![None; k];
        if certified {
            let center = choose_center(self.spec, &domain, self.cfg);
            // With parent models at hand the full second-order pass may be
            // avoidable, so monotonicity is judged from first-order jets.
            let lean = self.cfg.hessian_reuse && parent.is_some();
            let grads = match self.gradients(&domain, &center, lean, &mut fresh) {
                Ok(g) => g,
                Err(_) => return inconclusive(stats),
            };
            if let Some((dim, direction)) = monotone_reduce(&domain, &grads) {
                let face = domain.face(dim, direction).expect("dimension in range");
                let mut child_path = path;
                child_path.push(1);
                let models = if lean { parent } else { Some(Arc::new(fresh)) };
                let (child, child_stats) = self.visit(face, depth, child_path, models);
                stats.leaf_counts.mono = 1;
                stats.absorb(&child_stats);
                return (
                    child.map(|child| CertNode::Mono {
                        dim,
                        direction,
                        child: Box::new(child),
                    }),
                    stats,
                );
            }
            let defined: Vec<bool> = grads.iter().map(Option::is_some).collect();
            match self.bound_rule(&domain, &center, &defined, parent.as_deref(), &mut fresh) {
                Ok(Some(node)) => {
                    stats.leaf_counts.leaf = 1;
                    return (Ok(node), stats);
                }
                Ok(None) => {}
                Err(_) => return inconclusive(stats),
            }
            if self.cfg.lincomb {
                if let Some(node) = lincomb_rule(&fresh, &center, self.record_center()) {
                    stats.leaf_counts.lincomb = 1;
                    return (Ok(node), stats);
                }
            }
        }

        if depth >= self.cfg.max_depth {
            return self.fail(&path, domain, FailureReason::MaxDepth, stats);
        }
        let dim = domain.widest_relative_dim();
        let Some((left_box, right_box)) = domain.bisect(dim) else {
            return inconclusive(stats);
        };
        let models = fresh.iter().any(Option::is_some).then(|| Arc::new(fresh));
        let child_path = |step| {
            let mut p = path.clone();
            p.push(step);
            p
        };
        let (lp, rp) = (child_path(0), child_path(2));
        let left = || self.visit(left_box, depth + 1, lp, models.clone());
        let right = || self.visit(right_box, depth + 1, rp, models.clone());
        let ((l, ls), (r, rs)) = if self.parallel {
            join(left, right)
        } else {
            let l = left();
            if l.0.is_err() {
                stats.absorb(&l.1);
                return (l.0, stats);
            }
            (l, right())
        };
        stats.absorb(&ls);
        let l = match l {
            Ok(l) => l,
            Err(e) => return (Err(e), stats),
        };
        // A bisection counts once both halves have been searched; after a
        // failure on the left the right half is not part of the result.
        stats.leaf_counts.split += 1;
        stats.absorb(&rs);
        match r {
            Ok(r) => (
                Ok(CertNode::Split {
                    dim,
                    left: Box::new(l),
                    right: Box::new(r),
                }),
                stats,
            ),
            Err(e) => (Err(e), stats),
        }
    }

    fn record_center(&self) -> bool {
        self.cfg.strategy == Strategy::HotSpot
    }

    fn fresh_model(&self, f: &Expr, domain: &IntervalBox, center: &[f64]) -> Result<TaylorModel, TaylorError> {
        if self.cfg.hessian_reuse {
            TaylorModel::compute(f, domain, center)
        } else {
            TaylorModel::eval_taylor(f, domain, center)
        }
    }

    /// Box gradients of every disjunct, `None` where it is undefined. Unless
    /// `lean`, they come from fresh full models, which are kept in `fresh`.
    fn gradients(
        &self,
        domain: &IntervalBox,
        center: &[f64],
        lean: bool,
        fresh: &mut [Option<TaylorModel>],
    ) -> Result<Vec<Option<Vec<Interval>>>, TaylorError> {
        let mut grads = Vec::with_capacity(fresh.len());
        for (f, slot) in self.spec.disjuncts().iter().zip(fresh.iter_mut()) {
            if lean {
                grads.push(box_gradient(f, domain)?);
            } else {
                let m = self.fresh_model(f, domain, center)?;
                grads.push(m.grad_box().map(<[Interval]>::to_vec));
                *slot = Some(m);
            }
        }
        Ok(grads)
    }

    /// Tries each defined disjunct in order. Models computed on the way are
    /// left in `fresh` for the lincomb rule and for the children.
    fn bound_rule(
        &self,
        domain: &IntervalBox,
        center: &[f64],
        defined: &[bool],
        parent: Option<&Vec<Option<TaylorModel>>>,
        fresh: &mut [Option<TaylorModel>],
    ) -> Result<Option<CertNode>, TaylorError> {
        let leaf = |disjunct, bound| CertNode::Leaf {
            disjunct,
            bound,
            center: self.record_center().then(|| center.to_vec()),
        };
        for (i, f) in self.spec.disjuncts().iter().enumerate() {
            if !defined[i] {
                continue;
            }
            // Second derivatives over an enclosing box remain valid here. A
            // bound built from them is never tighter than a fresh one, so
            // falling back to a fresh model on failure keeps every decision
            // identical to running without reuse.
            if self.cfg.hessian_reuse {
                if let Some(p) = parent.and_then(|p| p[i].as_ref()).filter(|p| p.domain_ok()) {
                    let inherited = p.inherit(f, domain, center)?;
                    if let Ok(u) = inherited.upper_bound() {
                        if u < 0.0 {
                            return Ok(Some(leaf(i, u)));
                        }
                    }
                }
            }
            if fresh[i].is_none() {
                fresh[i] = Some(self.fresh_model(f, domain, center)?);
            }
            let model = fresh[i].as_ref().expect("just computed");
            if model.domain_ok() {
                let u = model.upper_bound()?;
                if u < 0.0 {
                    return Ok(Some(leaf(i, u)));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(feature = "parallel")]
fn join<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
fn join<A, B>(a: impl FnOnce() -> A, b: impl FnOnce() -> B) -> (A, B) {
    (a(), b())
}

/// Uniform weights over the disjuncts defined on the box. Needs at least two
/// of them; with one the bound rule has already decided.
fn lincomb_rule(models: &[Option<TaylorModel>], center: &[f64], record_center: bool) -> Option<CertNode> {
    let weights: Vec<Ratio<u64>> = models
        .iter()
        .map(|m| Ratio::from_integer(u64::from(m.as_ref().is_some_and(TaylorModel::domain_ok))))
        .collect();
    if weights.iter().filter(|w| *w.numer() != 0).count() < 2 {
        return None;
    }
    let refs: Vec<_> = models.iter().map(|m| m.as_ref().filter(|m| m.domain_ok())).collect();
    let bound = lincomb_bound(&refs, &weights).ok().filter(|u| *u < 0.0)?;
    Some(CertNode::LinComb {
        weights,
        bound,
        center: record_center.then(|| center.to_vec()),
    })
}

/// The first non-thin dimension in which every disjunct is certified
/// increasing (reduce to the upper face) or decreasing (lower face), given
/// each disjunct's gradient over the box (`None` where it is undefined).
pub fn monotone_reduce(domain: &IntervalBox, grads: &[Option<Vec<Interval>>]) -> Option<(usize, Direction)> {
    if grads.is_empty() || grads.iter().any(Option::is_none) {
        return None;
    }
    (0..domain.dim()).filter(|&j| !domain.get(j).is_thin()).find_map(|j| {
        let mut signs = grads.iter().flatten().map(|g| g[j].sign());
        match signs.next()? {
            Sign::Positive if signs.all(|s| s == Sign::Positive) => Some((j, Direction::Upper)),
            Sign::Negative if signs.all(|s| s == Sign::Negative) => Some((j, Direction::Lower)),
            _ => None,
        }
    })
}

const ASCENT_STEPS: usize = 5;

/// Expansion center for a box. Any point of the box gives a sound bound;
/// this only affects how tight it is.
pub fn choose_center(spec: &InequalitySpec, domain: &IntervalBox, cfg: &SolverConfig) -> Vec<f64> {
    let mid = domain.midpoint();
    if cfg.strategy == Strategy::CenterMid || domain.is_point() {
        return mid;
    }
    // Heuristic, in plain floating point: the disjunct most likely to prove
    // the box is the one lowest at the midpoint; its bound is tightest when
    // expanded around its maximum.
    let value = |f, x: &[f64]| eval_point(f, x).ok().map(|v| v.mid());
    let Some(f) = spec
        .disjuncts()
        .iter()
        .filter_map(|f| value(f, &mid).map(|v| (f, v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(f, _)| f)
    else {
        return mid;
    };
    let widths: Vec<f64> = domain.components().iter().map(|c| c.hi() - c.lo()).collect();
    let mut x = mid;
    let mut fx = value(f, &x).unwrap_or(f64::NEG_INFINITY);
    let mut step = 0.5;
    for _ in 0..ASCENT_STEPS {
        let Ok(Some(cv)) = CenterValues::compute(f, &x, Order::First) else {
            break;
        };
        // Gradient scaled to the box so that a step of 1 spans it.
        let d: Vec<f64> = cv.grad.iter().zip(&widths).map(|(g, w)| g.mid() * w).collect();
        let norm = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(norm > 0.0 && norm.is_finite()) {
            break;
        }
        let trial: Vec<f64> = x
            .iter()
            .zip(&d)
            .zip(domain.components())
            .map(|((xi, di), c)| (xi + step * c.width().min(f64::MAX) * di / norm).clamp(c.lo(), c.hi()))
            .collect();
        match value(f, &trial) {
            Some(ft) if ft > fx => {
                x = trial;
                fx = ft;
            }
            _ => step *= 0.5,
        }
    }
    debug_assert!(domain.contains_point(&x));
    x
}
