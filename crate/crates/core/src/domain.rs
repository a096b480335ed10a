//! Boxes: products of intervals, one per dimension.

use std::fmt;

use crate::interval::{Interval, IntervalError};

/// An n-dimensional box `X_0 x ... x X_{n-1}`.
#[derive(Clone, PartialEq)]
pub struct IntervalBox {
    components: Vec<Interval>,
}

/// Which face of a box a monotonicity reduction moves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

impl IntervalBox {
    /// Returns `None` for an empty component list.
    pub fn new(components: Vec<Interval>) -> Option<Self> {
        (!components.is_empty()).then_some(Self { components })
    }

    /// The degenerate box at a point.
    pub fn from_point(point: &[f64]) -> Result<Self, IntervalError> {
        let components = point
            .iter()
            .map(|&x| Interval::point(x))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(components).ok_or(IntervalError::InvalidEndpoints)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn get(&self, i: usize) -> Interval {
        self.components[i]
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.components.iter().map(Interval::mid).collect()
    }

    pub fn contains_point(&self, point: &[f64]) -> bool {
        point.len() == self.dim() && self.components.iter().zip(point).all(|(c, &x)| c.contains(x))
    }

    pub fn is_subset_of(&self, other: &IntervalBox) -> bool {
        self.dim() == other.dim()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.is_subset_of(b))
    }

    pub fn is_point(&self) -> bool {
        self.components.iter().all(Interval::is_thin)
    }

    /// Dimension with the largest relative width `width / max(1, |mid|)`.
    /// Ties go to the lowest index.
    pub fn widest_relative_dim(&self) -> usize {
        let mut best = 0;
        let mut best_width = f64::NEG_INFINITY;
        for (i, c) in self.components.iter().enumerate() {
            let rel = c.width() / c.mid().abs().max(1.0);
            if rel > best_width {
                best = i;
                best_width = rel;
            }
        }
        best
    }

    /// Bisects dimension `dim` at its midpoint. Returns `None` when the
    /// component cannot be split into two strictly smaller pieces.
    pub fn bisect(&self, dim: usize) -> Option<(IntervalBox, IntervalBox)> {
        let c = *self.components.get(dim)?;
        let m = c.mid();
        if m <= c.lo() || m >= c.hi() {
            return None;
        }
        let mut left = self.clone();
        let mut right = self.clone();
        left.components[dim] = Interval::new(c.lo(), m).ok()?;
        right.components[dim] = Interval::new(m, c.hi()).ok()?;
        Some((left, right))
    }

    /// The face with `dim` pinned to its upper or lower endpoint.
    pub fn face(&self, dim: usize, direction: Direction) -> Option<IntervalBox> {
        let c = *self.components.get(dim)?;
        let x = match direction {
            Direction::Upper => c.hi(),
            Direction::Lower => c.lo(),
        };
        let mut face = self.clone();
        face.components[dim] = Interval::point(x).ok()?;
        Some(face)
    }
}

impl fmt::Debug for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
