//! Decision certificates and their replay.
//!
//! A certificate records the action taken at every box of the search tree,
//! but not the boxes themselves: the root box is the inequality's domain and
//! every other box follows from its parent's action. Replaying a certificate
//! re-derives those boxes and redoes only the final arithmetic at each node,
//! with no search and no strategy choices. Bounds stored in leaves are
//! informational; replay trusts only its own recomputation.
//!
//! On disk a certificate is one JSON object
//!
//! ```text
//! {"ineq_id":"EX1","version":1,"root":{"k":"leaf","disjunct":0,"bound":"-0x1.9999999999998p-4"}}
//! ```
//!
//! with nodes tagged by `"k"` (`leaf`, `lincomb`, `mono`, `split`), doubles as
//! lossless hexadecimal strings and lincomb weights as rational strings.

use num_rational::Ratio;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::{constraints_hold, lincomb_bound};
use crate::domain::{Direction, IntervalBox};
use crate::hexfloat;
use crate::interval::Sign;
use crate::spec::InequalitySpec;
use crate::taylor::{box_gradient, BoxDerivatives, TaylorError, TaylorModel};

pub const VERSION: u32 = 1;

/// One node of the decision tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "k", rename_all = "lowercase", deny_unknown_fields)]
pub enum CertNode {
    /// Disjunct `disjunct` is negative on the whole box.
    Leaf {
        disjunct: usize,
        #[serde(with = "hex")]
        bound: f64,
        /// Expansion center, when it is not the box midpoint.
        #[serde(rename = "c", default, skip_serializing_if = "Option::is_none", with = "hex_point")]
        center: Option<Vec<f64>>,
    },
    /// A nonnegative combination of the disjuncts is negative on the box.
    #[serde(rename = "lincomb")]
    LinComb {
        #[serde(with = "ratios")]
        weights: Vec<Ratio<u64>>,
        #[serde(with = "hex")]
        bound: f64,
        #[serde(rename = "c", default, skip_serializing_if = "Option::is_none", with = "hex_point")]
        center: Option<Vec<f64>>,
    },
    /// Every disjunct is monotone in `dim`; the box reduces to a face.
    Mono {
        dim: usize,
        #[serde(rename = "dir")]
        direction: Direction,
        child: Box<CertNode>,
    },
    /// Bisection of `dim` at its midpoint.
    Split {
        dim: usize,
        left: Box<CertNode>,
        right: Box<CertNode>,
    },
}

impl CertNode {
    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            CertNode::Leaf { .. } | CertNode::LinComb { .. } => 1,
            CertNode::Mono { child, .. } => 1 + child.size(),
            CertNode::Split { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn count_splits(&self) -> usize {
        self.count(&|n| matches!(n, CertNode::Split { .. }))
    }

    pub fn count_monos(&self) -> usize {
        self.count(&|n| matches!(n, CertNode::Mono { .. }))
    }

    fn count(&self, pred: &dyn Fn(&CertNode) -> bool) -> usize {
        let own = usize::from(pred(self));
        own + match self {
            CertNode::Mono { child, .. } => child.count(pred),
            CertNode::Split { left, right, .. } => left.count(pred) + right.count(pred),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub ineq_id: String,
    #[serde(deserialize_with = "version")]
    pub version: u32,
    pub root: CertNode,
}

impl Certificate {
    pub fn new(ineq_id: impl Into<String>, root: CertNode) -> Self {
        Self {
            ineq_id: ineq_id.into(),
            version: VERSION,
            root,
        }
    }

    /// Compact JSON followed by a newline.
    pub fn serialize(&self) -> String {
        let mut s = serde_json::to_string(self).expect("certificates always serialize");
        s.push('\n');
        s
    }

    pub fn deserialize(text: &str) -> Result<Self, MalformedCertificate> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let cert = <Certificate as Deserialize>::deserialize(&mut de).and_then(|c| de.end().map(|()| c));
        cert.map_err(|e| MalformedCertificate {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed certificate at {line}:{column}: {message}")]
pub struct MalformedCertificate {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn version<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
    let v = u32::deserialize(d)?;
    if v == VERSION {
        Ok(v)
    } else {
        Err(de::Error::custom(format!("unsupported certificate version {v}")))
    }
}

mod hex {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hexfloat::format(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        hexfloat::parse(&s).ok_or_else(|| de::Error::custom(format!("invalid hexadecimal float `{s}`")))
    }
}

mod hex_point {
    use super::*;

    pub fn serialize<S: Serializer>(p: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
        let p = p.as_ref().expect("skipped when absent");
        s.collect_seq(p.iter().map(|&x| hexfloat::format(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items
            .iter()
            .map(|s| hexfloat::parse(s).ok_or_else(|| de::Error::custom(format!("invalid hexadecimal float `{s}`"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

mod ratios {
    use super::*;

    pub fn serialize<S: Serializer>(ws: &[Ratio<u64>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(ws.iter().map(|w| w.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Ratio<u64>>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| de::Error::custom(format!("invalid rational weight `{s}`")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    BoundNotNegative,
    SignNotUniform,
    DomainNotCertified,
    StructuralMismatch,
}

/// Why and where replay rejected a certificate. `path` spells the route
/// from the root: `L`/`R` for split children, `M` for a monotone face.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rejected at {path}: {reason:?}")]
pub struct Rejection {
    pub reason: RejectReason,
    pub path: String,
}

/// Checks a certificate against a spec.
pub fn replay(spec: &InequalitySpec, cert: &CertNode) -> Result<(), Rejection> {
    let mut path = String::from("root");
    replay_node(spec, spec.domain(), cert, &mut path, false)
}

/// [`replay`] with independent subtrees checked concurrently (sequentially
/// without the `parallel` feature). The reported rejection is the leftmost
/// one in tree order, as in sequential replay.
pub fn replay_parallel(spec: &InequalitySpec, cert: &CertNode) -> Result<(), Rejection> {
    let mut path = String::from("root");
    replay_node(spec, spec.domain(), cert, &mut path, true)
}

fn reject(reason: RejectReason, path: &str) -> Rejection {
    Rejection {
        reason,
        path: path.to_string(),
    }
}

fn replay_node(
    spec: &InequalitySpec,
    domain: &IntervalBox,
    node: &CertNode,
    path: &mut String,
    parallel: bool,
) -> Result<(), Rejection> {
    use RejectReason::*;
    let fail = |reason| reject(reason, path);
    let taylor = |e: TaylorError| match e {
        TaylorError::DomainNotCertified => fail(DomainNotCertified),
        TaylorError::Overflow => fail(BoundNotNegative),
        _ => fail(StructuralMismatch),
    };
    let certified = || match constraints_hold(spec, domain) {
        Ok(true) => Ok(()),
        Ok(false) => Err(fail(DomainNotCertified)),
        Err(e) => Err(taylor(e)),
    };
    let center_of = |c: &Option<Vec<f64>>| match c {
        None => Ok(domain.midpoint()),
        Some(c) if domain.contains_point(c) => Ok(c.clone()),
        Some(_) => Err(fail(StructuralMismatch)),
    };
    match node {
        CertNode::Leaf { disjunct, center, .. } => {
            let f = spec
                .disjuncts()
                .get(*disjunct)
                .ok_or_else(|| fail(StructuralMismatch))?;
            certified()?;
            let c = center_of(center)?;
            if f.max_var().is_some_and(|i| i >= domain.dim()) {
                return Err(fail(StructuralMismatch));
            }
            // The box pass yields the natural interval enclosure for free;
            // when it is already negative the center pass is not needed.
            let derivs = BoxDerivatives::compute(f, domain).map_err(taylor)?;
            if derivs.as_ref().is_some_and(|d| d.value.hi() < 0.0) {
                return Ok(());
            }
            let model = TaylorModel::with_box_derivatives(f, domain, &c, derivs).map_err(taylor)?;
            match model.upper_bound() {
                Ok(u) if u < 0.0 => Ok(()),
                Ok(_) => Err(fail(BoundNotNegative)),
                Err(e) => Err(taylor(e)),
            }
        }
        CertNode::LinComb { weights, center, .. } => {
            if weights.len() != spec.disjuncts().len() || weights.iter().all(|w| *w.numer() == 0) {
                return Err(fail(StructuralMismatch));
            }
            certified()?;
            let c = center_of(center)?;
            let mut models = Vec::with_capacity(weights.len());
            for (f, w) in spec.disjuncts().iter().zip(weights) {
                models.push(if *w.numer() == 0 {
                    None
                } else {
                    let m = TaylorModel::compute(f, domain, &c).map_err(taylor)?;
                    if !m.domain_ok() {
                        return Err(fail(DomainNotCertified));
                    }
                    Some(m)
                });
            }
            let refs: Vec<_> = models.iter().map(Option::as_ref).collect();
            match lincomb_bound(&refs, weights) {
                Ok(u) if u < 0.0 => Ok(()),
                Ok(_) => Err(fail(BoundNotNegative)),
                Err(e) => Err(taylor(e)),
            }
        }
        CertNode::Mono { dim, direction, child } => {
            if *dim >= domain.dim() || domain.get(*dim).is_thin() {
                return Err(fail(StructuralMismatch));
            }
            certified()?;
            let want = match direction {
                Direction::Upper => Sign::Positive,
                Direction::Lower => Sign::Negative,
            };
            // Signs need first derivatives over the box only.
            for f in spec.disjuncts() {
                match box_gradient(f, domain).map_err(taylor)? {
                    None => return Err(fail(DomainNotCertified)),
                    Some(g) if g[*dim].sign() != want => return Err(fail(SignNotUniform)),
                    Some(_) => {}
                }
            }
            let face = domain.face(*dim, *direction).ok_or_else(|| fail(StructuralMismatch))?;
            path.push_str("/M");
            let r = replay_node(spec, &face, child, path, parallel);
            path.truncate(path.len() - 2);
            r
        }
        CertNode::Split { dim, left, right } => {
            // The split dimension is determined by the box; a certificate
            // cannot choose it.
            if *dim != domain.widest_relative_dim() {
                return Err(fail(StructuralMismatch));
            }
            let (lb, rb) = domain.bisect(*dim).ok_or_else(|| fail(StructuralMismatch))?;
            let mut lpath = format!("{path}/L");
            let mut rpath = format!("{path}/R");
            let (l, r) = if parallel {
                join(
                    || replay_node(spec, &lb, left, &mut lpath, true),
                    || replay_node(spec, &rb, right, &mut rpath, true),
                )
            } else {
                replay_node(spec, &lb, left, &mut lpath, false)?;
                (Ok(()), replay_node(spec, &rb, right, &mut rpath, false))
            };
            l.and(r)
        }
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
