//! The builtin benchmark corpus: small inequalities whose truth is known
//! independently (each file comments on the true maximum), grouped in
//! suites, plus the expected search effort for each.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::dsl;
use crate::solver::Strategy;
use crate::spec::InequalitySpec;

/// `(file name, source)` of every corpus file, in suite order.
pub const FILES: &[(&str, &str)] = &[
    ("ouijtwy.ineq", include_str!("../corpus/ouijtwy.ineq")),
    ("polynomial.ineq", include_str!("../corpus/polynomial.ineq")),
    ("disjunction.ineq", include_str!("../corpus/disjunction.ineq")),
    ("monotone.ineq", include_str!("../corpus/monotone.ineq")),
    ("transcendental.ineq", include_str!("../corpus/transcendental.ineq")),
    ("sixd.ineq", include_str!("../corpus/sixd.ineq")),
];

const GOLDEN: &str = include_str!("../corpus/golden.json");

/// Relative change in boxes visited that is reported as drift.
pub const DRIFT_TOLERANCE: f64 = 0.2;

/// Every corpus inequality, in file order.
pub fn specs() -> Vec<InequalitySpec> {
    FILES
        .iter()
        .flat_map(|(name, src)| dsl::parse(src).unwrap_or_else(|e| panic!("corpus/{name}: {e}")))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct GoldenEntry {
    pub center: u64,
    pub hotspot: u64,
}

/// Expected boxes visited per inequality id with default settings.
pub fn golden() -> BTreeMap<String, GoldenEntry> {
    serde_json::from_str(GOLDEN).expect("corpus/golden.json is valid")
}

/// A warning when `boxes_visited` differs from the golden value by more
/// than [`DRIFT_TOLERANCE`].
pub fn drift(id: &str, strategy: Strategy, boxes_visited: u64) -> Option<String> {
    let entry = golden().get(id).copied()?;
    let expected = match strategy {
        Strategy::CenterMid => entry.center,
        Strategy::HotSpot => entry.hotspot,
    };
    let change = (boxes_visited as f64 - expected as f64).abs() / expected.max(1) as f64;
    (change > DRIFT_TOLERANCE).then(|| {
        format!(
            "{id}: {boxes_visited} boxes visited, golden value {expected} ({:+.0}%)",
            100.0 * (boxes_visited as f64 / expected.max(1) as f64 - 1.0)
        )
    })
}
