//! Run reports: one record per inequality in input order, totals, and the
//! configuration that produced them.

use std::fmt::Write as _;
use std::path::PathBuf;

use ineqcert::solver::{FailureReason, LeafCounts, Outcome, SolveResult, SolverConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    /// `Proved`, `Failed(MaxDepth)` or `Failed(Inconclusive)`.
    pub outcome: String,
    /// The undecided box of a failed run, as `[lo, hi]` per dimension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<[f64; 2]>>,
    pub boxes_visited: u64,
    pub max_depth_reached: u32,
    pub leaf_counts: LeafCounts,
    /// Seconds.
    pub wall_time: f64,
    pub cert_path: Option<PathBuf>,
}

impl Record {
    pub fn new(id: &str, result: &SolveResult, cert_path: Option<PathBuf>) -> Self {
        let (outcome, witness) = match &result.outcome {
            Outcome::Proved(_) => ("Proved".to_string(), None),
            Outcome::Failed { witness, reason } => {
                let reason = match reason {
                    FailureReason::MaxDepth => "MaxDepth",
                    FailureReason::Inconclusive => "Inconclusive",
                };
                let bounds = witness.components().iter().map(|c| [c.lo(), c.hi()]).collect();
                (format!("Failed({reason})"), Some(bounds))
            }
        };
        let stats = &result.stats;
        Self {
            id: id.to_string(),
            outcome,
            witness,
            boxes_visited: stats.boxes_visited,
            max_depth_reached: stats.max_depth_reached,
            leaf_counts: stats.leaf_counts,
            wall_time: stats.wall_time.as_secs_f64(),
            cert_path,
        }
    }

    pub fn proved(&self) -> bool {
        self.outcome == "Proved"
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub inequalities: usize,
    pub proved: usize,
    pub failed: usize,
    pub boxes_visited: u64,
    pub leaf_counts: LeafCounts,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub records: Vec<Record>,
    pub totals: Totals,
    pub config: SolverConfig,
    /// Drift against the golden corpus figures; never a failure.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(records: Vec<Record>, config: SolverConfig) -> Self {
        let mut totals = Totals {
            inequalities: records.len(),
            ..Totals::default()
        };
        for r in &records {
            if r.proved() {
                totals.proved += 1;
            } else {
                totals.failed += 1;
            }
            totals.boxes_visited += r.boxes_visited;
            let (a, b) = (&mut totals.leaf_counts, &r.leaf_counts);
            a.leaf += b.leaf;
            a.lincomb += b.lincomb;
            a.mono += b.mono;
            a.split += b.split;
            totals.wall_time += r.wall_time;
        }
        Self {
            records,
            totals,
            config,
            warnings: Vec::new(),
        }
    }

    pub fn all_proved(&self) -> bool {
        self.totals.failed == 0
    }

    pub fn to_text(&self) -> String {
        let width = self.records.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:width$}  {:<20} {:>9} {:>5} {:>6} {:>6} {:>6} {:>10}  certificate",
            "id", "outcome", "boxes", "depth", "leaf", "mono", "split", "time (s)"
        );
        for r in &self.records {
            let cert = r.cert_path.as_ref().map_or("-".into(), |p| p.display().to_string());
            let _ = writeln!(
                out,
                "{:width$}  {:<20} {:>9} {:>5} {:>6} {:>6} {:>6} {:>10.4}  {cert}",
                r.id,
                r.outcome,
                r.boxes_visited,
                r.max_depth_reached,
                r.leaf_counts.leaf + r.leaf_counts.lincomb,
                r.leaf_counts.mono,
                r.leaf_counts.split,
                r.wall_time,
            );
            if let Some(w) = &r.witness {
                let dims: Vec<_> = w.iter().map(|[lo, hi]| format!("[{lo:e}, {hi:e}]")).collect();
                let _ = writeln!(out, "{:width$}  witness {}", "", dims.join(" x "));
            }
        }
        let t = &self.totals;
        let _ = writeln!(
            out,
            "{} inequalities: {} proved, {} failed; {} boxes, {:.4} s",
            t.inequalities, t.proved, t.failed, t.boxes_visited, t.wall_time
        );
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

/// The corpus run under both strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub center: RunReport,
    pub hotspot: RunReport,
}

impl BenchReport {
    pub fn all_proved(&self) -> bool {
        self.center.all_proved() && self.hotspot.all_proved()
    }

    /// Side-by-side table; `hotspot_first` swaps the column order.
    pub fn to_text(&self, hotspot_first: bool) -> String {
        let (a, b, na, nb) = if hotspot_first {
            (&self.hotspot, &self.center, "HotSpot", "CenterMid")
        } else {
            (&self.center, &self.hotspot, "CenterMid", "HotSpot")
        };
        let width = a.records.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let mut out = String::new();
        let _ = writeln!(out, "{:width$}  {:>21}  {:>21}  {:>8}", "", na, nb, "boxes");
        let _ = writeln!(
            out,
            "{:width$}  {:>9} {:>11}  {:>9} {:>11}  {:>8}",
            "id", "boxes", "time (s)", "boxes", "time (s)", "ratio"
        );
        for (ra, rb) in a.records.iter().zip(&b.records) {
            let cell = |r: &Record| {
                if r.proved() {
                    format!("{:>9} {:>11.6}", r.boxes_visited, r.wall_time)
                } else {
                    format!("{:>21}", r.outcome)
                }
            };
            let ratio = rb.boxes_visited as f64 / ra.boxes_visited.max(1) as f64;
            let _ = writeln!(out, "{:width$}  {}  {}  {:>8.2}", ra.id, cell(ra), cell(rb), ratio);
        }
        let (ta, tb) = (&a.totals, &b.totals);
        let _ = writeln!(
            out,
            "{:width$}  {:>9} {:>11.6}  {:>9} {:>11.6}  {:>8.2}",
            "total",
            ta.boxes_visited,
            ta.wall_time,
            tb.boxes_visited,
            tb.wall_time,
            tb.boxes_visited as f64 / ta.boxes_visited.max(1) as f64
        );
        let _ = writeln!(
            out,
            "proved: {na} {}/{}, {nb} {}/{}",
            ta.proved, ta.inequalities, tb.proved, tb.inequalities
        );
        for w in a.warnings.iter().chain(&b.warnings) {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}
