//! Outward-rounded interval arithmetic.
//!
//! Every endpoint is computed in native double precision and then moved
//! outward by at most one ulp. For `+`, `*`, `/` and `sqrt` the sign of the
//! exact residual (TwoSum and fused multiply-add) says on which side of the
//! nearest double the exact result lies, so endpoints are the true directed
//! roundings: exact arithmetic stays thin and the operations are monotone.
//!
//! Transcendental endpoints come from the `libm` crate (a port of musl),
//! whose documented error is below one ulp for the functions used here; those
//! endpoints are widened by [`LIBM_ULPS`] ulps. Using `libm` instead of the
//! platform library keeps results bit-identical across platforms.
//!
//! Intervals never contain NaN or infinite endpoints and are never empty. An
//! operation whose result would leave the finite range fails with
//! [`IntervalError::Overflow`].

use std::fmt;

use thiserror::Error;

use crate::decimal;

/// Outward widening applied to endpoints produced by `libm`.
pub const LIBM_ULPS: u32 = 2;

/// Failures of interval operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("invalid interval endpoints")]
    InvalidEndpoints,
    #[error("floating-point overflow")]
    Overflow,
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("argument outside the natural domain of the operation")]
    PartialDomain,
}

type Result<T> = std::result::Result<T, IntervalError>;

/// Certified sign of a quantity, derived from an enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
    Unknown,
}

/// A closed interval `[lo, hi]` with finite double endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

// Rounding primitives. `*_down` returns a double that is <= the exact result,
// `*_up` one that is >= it. Each takes the nearest result together with the
// exact residual `exact - nearest` (NaN when unknown), so the results are the
// directed roundings of the exact value whenever the residual is known.

#[inline]
fn round_down(x: f64, residual: f64) -> f64 {
    if residual >= 0.0 {
        x
    } else {
        x.next_down()
    }
}

#[inline]
fn round_up(x: f64, residual: f64) -> f64 {
    if residual <= 0.0 {
        x
    } else {
        x.next_up()
    }
}

#[inline]
fn sum_residual(a: f64, b: f64, s: f64) -> f64 {
    // TwoSum error term.
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

// Below this magnitude fma residuals may be affected by underflow, so they
// are treated as unknown.
const TINY: f64 = 1e-290;

#[inline]
fn product_residual(a: f64, b: f64, p: f64) -> f64 {
    if p == 0.0 {
        return if a == 0.0 || b == 0.0 { 0.0 } else { f64::NAN };
    }
    if p.abs() < TINY {
        return f64::NAN;
    }
    a.mul_add(b, -p)
}

#[inline]
fn quotient_residual(a: f64, b: f64, q: f64) -> f64 {
    if q == 0.0 {
        return if a == 0.0 { 0.0 } else { f64::NAN };
    }
    if q.abs() < TINY {
        return f64::NAN;
    }
    // a - q b has the sign of b (a/b - q).
    let r = (-q).mul_add(b, a);
    if b > 0.0 {
        r
    } else {
        -r
    }
}

#[inline]
fn sqrt_residual(x: f64, s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    if s < TINY {
        return f64::NAN;
    }
    // x - s^2 has the sign of sqrt(x) - s.
    (-s).mul_add(s, x)
}

pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    round_down(s, sum_residual(a, b, s))
}

pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    round_up(s, sum_residual(a, b, s))
}

pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    round_down(p, product_residual(a, b, p))
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    round_up(p, product_residual(a, b, p))
}

fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    round_down(q, quotient_residual(a, b, q))
}

fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    round_up(q, quotient_residual(a, b, q))
}

fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    round_down(s, sqrt_residual(x, s)).max(0.0)
}

fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    round_up(s, sqrt_residual(x, s))
}

fn libm_down(mut x: f64) -> f64 {
    for _ in 0..LIBM_ULPS {
        x = x.next_down();
    }
    x
}

fn libm_up(mut x: f64) -> f64 {
    for _ in 0..LIBM_ULPS {
        x = x.next_up();
    }
    x
}

/// `x^n` for `x >= 0`, rounded down.
fn pow_down(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, _| mul_down(acc, x))
}

/// `x^n` for `x >= 0`, rounded up.
fn pow_up(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, _| mul_up(acc, x))
}

const PI_LO: f64 = std::f64::consts::PI;
// The double nearest to pi lies below it.
const PI_HI: f64 = 3.141_592_653_589_793_6;

impl Interval {
    /// Builds `[lo, hi]` from exact doubles.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(IntervalError::InvalidEndpoints);
        }
        Ok(Self::raw(lo, hi))
    }

    /// The thin interval `[x, x]`.
    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    /// Smallest interval of doubles containing the real interval denoted by
    /// two decimal literals.
    pub fn from_literals(lo: &str, hi: &str) -> Result<Self> {
        let (lo, _) = decimal::enclose(lo).ok_or(IntervalError::InvalidEndpoints)?;
        let (_, hi) = decimal::enclose(hi).ok_or(IntervalError::InvalidEndpoints)?;
        Self::new(lo, hi)
    }

    /// Enclosure of the real number written as a decimal literal.
    pub fn from_literal(text: &str) -> Result<Self> {
        let (lo, hi) = decimal::enclose(text).ok_or(IntervalError::InvalidEndpoints)?;
        Self::new(lo, hi)
    }

    /// Constructs without validation. Normalizes `-0.0` to `+0.0`.
    #[inline]
    fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "[{lo}, {hi}]");
        Self {
            lo: lo + 0.0,
            hi: hi + 0.0,
        }
    }

    #[inline]
    fn checked(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() {
            Ok(Self::raw(lo, hi))
        } else {
            Err(IntervalError::Overflow)
        }
    }

    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// A double inside the interval, close to its midpoint.
    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Largest absolute value of any member.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn is_thin(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Self::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Self::raw(lo, hi))
    }

    pub fn sign(&self) -> Sign {
        if self.lo > 0.0 {
            Sign::Positive
        } else if self.hi < 0.0 {
            Sign::Negative
        } else {
            Sign::Unknown
        }
    }

    /// Enclosure of pi.
    pub fn pi() -> Interval {
        Self::raw(PI_LO, PI_HI)
    }

    /// Enclosure of pi / 2 (halving is exact).
    pub fn half_pi() -> Interval {
        Self::raw(0.5 * PI_LO, 0.5 * PI_HI)
    }

    pub fn neg(&self) -> Interval {
        Self::raw(-self.hi, -self.lo)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Interval) -> Result<Interval> {
        Self::checked(add_down(self.lo, other.lo), add_up(self.hi, other.hi))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Interval) -> Result<Interval> {
        Self::checked(sub_down(self.lo, other.hi), sub_up(self.hi, other.lo))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Interval) -> Result<Interval> {
        let (a, b, c, d) = (self.lo, self.hi, other.lo, other.hi);
        let lo = mul_down(a, c)
            .min(mul_down(a, d))
            .min(mul_down(b, c))
            .min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Self::checked(lo, hi)
    }

    /// Multiplication by an exact scalar.
    pub fn scale(&self, k: f64) -> Result<Interval> {
        self.mul(&Interval::point(k)?)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let (a, b, c, d) = (self.lo, self.hi, other.lo, other.hi);
        let lo = div_down(a, c)
            .min(div_down(a, d))
            .min(div_down(b, c))
            .min(div_down(b, d));
        let hi = div_up(a, c).max(div_up(a, d)).max(div_up(b, c)).max(div_up(b, d));
        Self::checked(lo, hi)
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    /// Square, tight when the interval straddles zero.
    pub fn sqr(&self) -> Result<Interval> {
        self.powi(2)
    }

    /// Natural-number power.
    pub fn powi(&self, n: u32) -> Result<Interval> {
        if n == 0 {
            return Ok(Interval::ONE);
        }
        let (lo, hi) = (self.lo, self.hi);
        let (rlo, rhi) = if lo >= 0.0 {
            (pow_down(lo, n), pow_up(hi, n))
        } else if hi <= 0.0 {
            if n.is_multiple_of(2) {
                (pow_down(-hi, n), pow_up(-lo, n))
            } else {
                (-pow_up(-lo, n), -pow_down(-hi, n))
            }
        } else if n.is_multiple_of(2) {
            (0.0, pow_up(self.mag(), n))
        } else {
            (-pow_up(-lo, n), pow_up(hi, n))
        };
        Self::checked(rlo, rhi)
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(IntervalError::PartialDomain);
        }
        Self::checked(sqrt_down(self.lo), sqrt_up(self.hi))
    }

    pub fn atn(&self) -> Result<Interval> {
        let lo = libm_down(libm::atan(self.lo));
        let hi = libm_up(libm::atan(self.hi));
        let half = Self::half_pi();
        Self::checked(lo.max(-half.hi), hi.min(half.hi))
    }

    pub fn sin(&self) -> Result<Interval> {
        self.periodic(libm::sin, Self::half_pi(), Self::half_pi().neg())
    }

    pub fn cos(&self) -> Result<Interval> {
        self.periodic(libm::cos, Interval::ZERO, Self::pi())
    }

    /// Shared sin/cos enclosure: endpoint values plus critical-point analysis.
    /// `max_at` and `min_at` are the phases of the maxima and minima within
    /// one period.
    fn periodic(&self, f: fn(f64) -> f64, max_at: Interval, min_at: Interval) -> Result<Interval> {
        let two_pi = Self::pi().scale(2.0)?;
        if self.width() >= two_pi.lo {
            return Ok(Self::raw(-1.0, 1.0));
        }
        let (a, b) = (f(self.lo), f(self.hi));
        let mut lo = libm_down(a.min(b));
        let mut hi = libm_up(a.max(b));
        if self.may_contain_phase(&max_at, &two_pi)? {
            hi = 1.0;
        }
        if self.may_contain_phase(&min_at, &two_pi)? {
            lo = -1.0;
        }
        Ok(Self::raw(lo.max(-1.0), hi.min(1.0)))
    }

    /// Conservatively decides whether the interval contains `phase + 2k*pi`
    /// for some integer `k`. False positives only widen results.
    fn may_contain_phase(&self, phase: &Interval, two_pi: &Interval) -> Result<bool> {
        let first = Interval::point(self.lo)?.sub(phase)?.div(two_pi)?.lo;
        let last = Interval::point(self.hi)?.sub(phase)?.div(two_pi)?.hi;
        Ok(first.ceil() <= last.floor())
    }

    /// Arc cosine, computed from `acs(y) = pi/2 - atn2(sqrt(1 - y^2), y)`
    /// at each endpoint (acs is decreasing).
    pub fn acs(&self) -> Result<Interval> {
        if self.lo < -1.0 || self.hi > 1.0 {
            return Err(IntervalError::PartialDomain);
        }
        let at_hi = acs_point(self.hi)?;
        let at_lo = acs_point(self.lo)?;
        Self::checked(at_hi.lo.max(0.0), at_lo.hi.min(PI_HI))
    }

    /// Angle of the points `(x, y)`, `x` in `abscissa` and `y` in `ordinate`,
    /// in `(-pi, pi]`. The first argument is the abscissa: `atn2(1, 0) = 0`
    /// and `atn2(0, 1) = pi/2`.
    pub fn atn2(abscissa: &Interval, ordinate: &Interval) -> Result<Interval> {
        let (x, y) = (abscissa, ordinate);
        if x.contains_zero() && y.contains_zero() {
            return Err(IntervalError::PartialDomain);
        }
        if x.lo < 0.0 && y.lo < 0.0 && y.hi >= 0.0 {
            // Crosses the branch cut on the negative abscissa.
            return Ok(Self::raw(-PI_HI, PI_HI));
        }
        // Off the cut and away from the origin the angle is a monotone
        // function of y/x (or x/y) along each axis, so corners suffice.
        let corners = [
            libm::atan2(y.lo, x.lo),
            libm::atan2(y.lo, x.hi),
            libm::atan2(y.hi, x.lo),
            libm::atan2(y.hi, x.hi),
        ];
        let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::checked(libm_down(lo).max(-PI_HI), libm_up(hi).min(PI_HI))
    }
}

/// Enclosure of `acs(y)` for a single double `y` in `[-1, 1]`.
fn acs_point(y: f64) -> Result<Interval> {
    let yi = Interval::point(y)?;
    // 1 - y^2 >= 0 on the domain; clip rounding excursions below zero.
    let t = Interval::ONE.sub(&yi.sqr()?)?;
    let t = Interval::raw(t.lo.max(0.0), t.hi.max(0.0));
    let angle = Interval::atn2(&t.sqrt()?, &yi)?;
    Interval::half_pi().sub(&angle)
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn ulp(x: f64) -> f64 {
        x.abs().next_up() - x.abs()
    }

    #[test]
    fn make_exact_and_widened() {
        let a = Interval::from_literals("1", "2").unwrap();
        assert_eq!((a.lo(), a.hi()), (1.0, 2.0));
        let t = Interval::from_literals("0.1", "0.1").unwrap();
        assert!(t.lo() < t.hi());
        assert!(t.width() <= 2.0 * ulp(0.1));
        assert_eq!(Interval::from_literals("3", "1"), Err(IntervalError::InvalidEndpoints));
        assert_eq!(Interval::new(f64::NAN, 1.0), Err(IntervalError::InvalidEndpoints));
        assert_eq!(Interval::new(0.0, f64::INFINITY), Err(IntervalError::InvalidEndpoints));
    }

    #[test]
    fn basic_arithmetic() {
        let s = iv(1.0, 2.0).add(&iv(3.0, 4.0)).unwrap();
        assert_eq!((s.lo(), s.hi()), (4.0, 6.0));
        let p = iv(-1.0, 2.0).mul(&iv(3.0, 4.0)).unwrap();
        assert!(p.lo() <= -4.0 && p.hi() >= 8.0);
        assert_eq!((p.lo(), p.hi()), (-4.0, 8.0));
        let n = iv(-4.0, 8.0).neg();
        assert_eq!((n.lo(), n.hi()), (-8.0, 4.0));
    }

    #[test]
    fn inexact_results_are_directed_roundings() {
        let third = Interval::ONE.div(&iv(3.0, 3.0)).unwrap();
        assert_eq!(third.lo().next_up(), third.hi());
        assert!(third.contains(1.0 / 3.0));
        // The exact sum of the doubles 0.1 and 0.2 lies just below their
        // rounded sum.
        let s = iv(0.1, 0.1).add(&iv(0.2, 0.2)).unwrap();
        assert_eq!((s.lo().next_up(), s.hi()), (0.1 + 0.2, 0.1 + 0.2));
    }

    #[test]
    fn division() {
        let q = iv(1.0, 2.0).div(&iv(2.0, 4.0)).unwrap();
        assert_eq!((q.lo(), q.hi()), (0.25, 1.0));
        assert_eq!(iv(1.0, 1.0).div(&iv(-1.0, 1.0)), Err(IntervalError::DivisionByZero));
        let z = Interval::ZERO.div(&iv(1.0, 2.0)).unwrap();
        assert_eq!((z.lo(), z.hi()), (0.0, 0.0));
    }

    #[test]
    fn square_root() {
        let r = iv(4.0, 9.0).sqrt().unwrap();
        assert_eq!((r.lo(), r.hi()), (2.0, 3.0));
        let z = Interval::ZERO.sqrt().unwrap();
        assert_eq!((z.lo(), z.hi()), (0.0, 0.0));
        assert_eq!(iv(-1.0, 1.0).sqrt(), Err(IntervalError::PartialDomain));
        let two = iv(2.0, 2.0).sqrt().unwrap();
        assert!(two.lo() < std::f64::consts::SQRT_2 || two.hi() > std::f64::consts::SQRT_2);
        assert!(two.contains(std::f64::consts::SQRT_2));
    }

    #[test]
    fn overflow_is_reported() {
        let big = iv(f64::MAX, f64::MAX);
        assert_eq!(big.add(&big), Err(IntervalError::Overflow));
        assert_eq!(big.mul(&iv(2.0, 2.0)), Err(IntervalError::Overflow));
    }

    #[test]
    fn powers() {
        let p = iv(-2.0, 1.0).powi(2).unwrap();
        assert_eq!((p.lo(), p.hi()), (0.0, 4.0));
        let c = iv(-2.0, 1.0).powi(3).unwrap();
        assert_eq!((c.lo(), c.hi()), (-8.0, 1.0));
        let e = iv(-3.0, -2.0).powi(2).unwrap();
        assert_eq!((e.lo(), e.hi()), (4.0, 9.0));
        assert_eq!(iv(-3.0, 5.0).powi(0).unwrap(), Interval::ONE);
    }

    #[test]
    fn pi_is_tight() {
        // The double nearest pi is 3.14159265358979311599796346854...,
        // below the real pi, so the enclosure is that double and its successor.
        let p = Interval::pi();
        assert_eq!(p.lo(), std::f64::consts::PI);
        assert_eq!(p.lo().next_up(), p.hi());
    }

    #[test]
    fn atn_of_zero() {
        let a = Interval::ZERO.atn().unwrap();
        assert!(a.contains(0.0));
        assert!(a.width() < 1e-300);
    }

    #[test]
    fn cosine_over_half_period() {
        let c = iv(0.0, Interval::pi().hi()).cos().unwrap();
        assert!(c.lo() <= -1.0 && c.hi() >= 1.0);
        let s = iv(0.1, 0.2).sin().unwrap();
        assert!(s.contains(0.1f64.sin()) && s.contains(0.2f64.sin()));
        assert!(s.hi() < 0.2);
        let wide = iv(-10.0, 10.0).sin().unwrap();
        assert_eq!((wide.lo(), wide.hi()), (-1.0, 1.0));
    }

    #[test]
    fn sine_peak_inside() {
        let s = iv(1.0, 2.0).sin().unwrap();
        assert_eq!(s.hi(), 1.0);
        assert!(s.lo() <= 1.0f64.sin().min(2.0f64.sin()));
        let c = iv(3.0, 3.5).cos().unwrap();
        assert_eq!(c.lo(), -1.0);
    }

    #[test]
    fn arc_cosine() {
        let half_pi = Interval::ZERO.acs().unwrap();
        let reference = Interval::pi().scale(0.5).unwrap();
        assert!(reference.is_subset_of(&half_pi));
        let zero = Interval::ONE.acs().unwrap();
        assert!(zero.lo() <= 0.0 && 0.0 <= zero.hi());
        let pi = iv(-1.0, -1.0).acs().unwrap();
        assert!(Interval::pi().is_subset_of(&pi));
        assert_eq!(iv(-1.5, 0.0).acs(), Err(IntervalError::PartialDomain));
    }

    #[test]
    fn two_argument_arctangent() {
        let zero = Interval::atn2(&Interval::ONE, &Interval::ZERO).unwrap();
        assert!(zero.contains(0.0));
        let right = Interval::atn2(&Interval::ZERO, &Interval::ONE).unwrap();
        assert!(Interval::half_pi().is_subset_of(&right));
        assert_eq!(
            Interval::atn2(&Interval::ZERO, &Interval::ZERO),
            Err(IntervalError::PartialDomain)
        );
        let down = Interval::atn2(&Interval::ZERO, &iv(-1.0, -1.0)).unwrap();
        assert!(Interval::half_pi().neg().is_subset_of(&down));
        let cut = Interval::atn2(&iv(-2.0, -1.0), &iv(-1.0, 1.0)).unwrap();
        assert!(cut.contains(3.0) && cut.contains(-3.0));
        let closed_side = Interval::atn2(&iv(-2.0, -1.0), &iv(0.0, 1.0)).unwrap();
        assert!(Interval::pi().is_subset_of(&closed_side));
        assert!(closed_side.lo() > 2.0);
    }

    #[test]
    fn signs() {
        assert_eq!(iv(1.0, 2.0).sign(), Sign::Positive);
        assert_eq!(iv(-2.0, -1.0).sign(), Sign::Negative);
        assert_eq!(iv(0.0, 1.0).sign(), Sign::Unknown);
    }

    #[test]
    fn negative_zero_is_normalized() {
        let z = iv(-0.0, -0.0);
        assert!(z.lo().is_sign_positive());
        let a = Interval::atn2(&iv(-2.0, -1.0), &z).unwrap();
        assert!(a.contains(std::f64::consts::PI));
    }
}
