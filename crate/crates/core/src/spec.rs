//! Inequality specifications: a box domain and a disjunction of strict
//! inequalities `f_1(x) < 0 \/ ... \/ f_k(x) < 0`.
//!
//! Each disjunct `f_i` is only defined on part of the domain, `R_i`. That set
//! is the natural domain of the partial operations in `f_i` (sqrt, division,
//! acs, atn2) intersected with `{x : g(x) >= 0}` for every explicit
//! constraint `g`. Constraints belong to the whole inequality, so they
//! restrict every disjunct.

use thiserror::Error;

use crate::domain::IntervalBox;
use crate::expr::Expr;
use crate::interval::Interval;

/// Decimal text of one domain component, kept so specs print back verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundLiterals {
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("an inequality needs at least one domain variable")]
    NoDomain,
    #[error("an inequality needs at least one disjunct")]
    NoDisjuncts,
    #[error("invalid bounds for x{0}")]
    InvalidBounds(usize),
    #[error("x{index} is not bound (dimension {dim})")]
    UnboundVariable { index: usize, dim: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySpec {
    id: String,
    name: String,
    domain: IntervalBox,
    bounds: Vec<BoundLiterals>,
    disjuncts: Vec<Expr>,
    constraints: Vec<Expr>,
}

impl InequalitySpec {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        bounds: Vec<BoundLiterals>,
        disjuncts: Vec<Expr>,
        constraints: Vec<Expr>,
    ) -> Result<Self, SpecError> {
        let components = bounds
            .iter()
            .enumerate()
            .map(|(i, b)| Interval::from_literals(&b.lo, &b.hi).map_err(|_| SpecError::InvalidBounds(i)))
            .collect::<Result<Vec<_>, _>>()?;
        let domain = IntervalBox::new(components).ok_or(SpecError::NoDomain)?;
        if disjuncts.is_empty() {
            return Err(SpecError::NoDisjuncts);
        }
        let dim = domain.dim();
        for e in disjuncts.iter().chain(&constraints) {
            if let Some(index) = e.max_var().filter(|&i| i >= dim) {
                return Err(SpecError::UnboundVariable { index, dim });
            }
        }
        Ok(Self {
            id: id.into(),
            name: name.into(),
            domain,
            bounds,
            disjuncts,
            constraints,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    pub fn bounds(&self) -> &[BoundLiterals] {
        &self.bounds
    }

    pub fn disjuncts(&self) -> &[Expr] {
        &self.disjuncts
    }

    pub fn constraints(&self) -> &[Expr] {
        &self.constraints
    }
}
