//! Rigorous per-box checks shared by the search and by certificate replay.

use num_rational::Ratio;

use crate::domain::IntervalBox;
use crate::expr::{eval_box, EvalError};
use crate::interval::{Interval, IntervalError};
use crate::spec::InequalitySpec;
use crate::taylor::{TaylorError, TaylorModel};

/// Whether every explicit constraint `g >= 0` is certified on the box.
pub(crate) fn constraints_hold(spec: &InequalitySpec, domain: &IntervalBox) -> Result<bool, TaylorError> {
    for g in spec.constraints() {
        match eval_box(g, domain) {
            Ok(v) if v.lo() >= 0.0 => {}
            Ok(_) => return Ok(false),
            Err(EvalError::Interval(IntervalError::PartialDomain | IntervalError::DivisionByZero)) => return Ok(false),
            Err(_) => return Err(TaylorError::Overflow),
        }
    }
    Ok(true)
}

/// Enclosure of a rational weight.
pub(crate) fn weight_interval(w: &Ratio<u64>) -> Result<Interval, TaylorError> {
    // Every integer below 2^53 is a double.
    const EXACT: u64 = 1 << 53;
    if *w.numer() > EXACT || *w.denom() > EXACT {
        return Err(TaylorError::Overflow);
    }
    let num = Interval::point(*w.numer() as f64).map_err(|_| TaylorError::Overflow)?;
    let den = Interval::point(*w.denom() as f64).map_err(|_| TaylorError::Overflow)?;
    num.div(&den).map_err(|_| TaylorError::Overflow)
}

/// Upper bound of `sum_i w_i f_i` over the models' common box. Models with
/// zero weight may be undefined.
pub(crate) fn lincomb_bound(models: &[Option<&TaylorModel>], weights: &[Ratio<u64>]) -> Result<f64, TaylorError> {
    let mut used = Vec::new();
    let mut ws = Vec::new();
    for (m, w) in models.iter().zip(weights) {
        if *w.numer() == 0 {
            continue;
        }
        used.push(m.ok_or(TaylorError::DomainNotCertified)?);
        ws.push(weight_interval(w)?);
    }
    if used.is_empty() {
        return Err(TaylorError::DimensionMismatch);
    }
    TaylorModel::weighted_sum(&used, &ws)?.upper_bound()
}
