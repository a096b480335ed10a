//! `ineqcert verify | replay | bench`.
//!
//! Exit codes: 0 when everything was proved (or the certificate was
//! accepted), 1 when something failed (or was rejected), 2 for unreadable
//! or malformed input.

mod report;

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ineqcert::cert::{self, Certificate};
use ineqcert::corpus;
use ineqcert::dsl;
use ineqcert::solver::{self, SolverConfig, Strategy};
use ineqcert::spec::InequalitySpec;

use report::{BenchReport, Record, RunReport};

#[derive(Parser)]
#[command(
    name = "ineqcert",
    version,
    about = "Prove nonlinear inequalities over boxes and check the certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every inequality in the given files.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 40)]
        max_depth: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Center)]
        strategy: StrategyArg,
        /// Try nonnegative combinations of the disjuncts before splitting.
        #[arg(long)]
        lincomb: bool,
        /// Total worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        /// Write `<id>.cert` for every proved inequality into this directory.
        #[arg(long)]
        cert_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check a certificate against the inequality it names.
    Replay { ineq: PathBuf, cert: PathBuf },
    /// Run the builtin corpus under both strategies and compare them.
    Bench {
        /// Strategy shown in the first column; the ratio column is relative
        /// to it.
        #[arg(long, value_enum, default_value_t = StrategyArg::Center)]
        strategy: StrategyArg,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write certificates into `<dir>/center/` and `<dir>/hotspot/`.
        #[arg(long)]
        cert_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Center,
    Hotspot,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Center => Strategy::CenterMid,
            StrategyArg::Hotspot => Strategy::HotSpot,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            files,
            max_depth,
            strategy,
            lincomb,
            jobs,
            cert_out,
            format,
        } => {
            let cfg = config(max_depth, strategy.into(), lincomb, jobs);
            cmd_verify(&files, cfg, cert_out.as_deref(), format)
        }
        Command::Replay { ineq, cert } => cmd_replay(&ineq, &cert),
        Command::Bench {
            strategy,
            jobs,
            cert_out,
            format,
        } => cmd_bench(strategy, jobs, cert_out.as_deref(), format),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn config(max_depth: u32, strategy: Strategy, lincomb: bool, jobs: Option<usize>) -> SolverConfig {
    let defaults = SolverConfig::default();
    SolverConfig {
        max_depth,
        strategy,
        lincomb,
        jobs: jobs.unwrap_or(defaults.jobs).max(1),
        ..defaults
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_file(path: &Path) -> Result<Vec<InequalitySpec>> {
    let src = read(path)?;
    dsl::parse(&src).map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))
}

fn cmd_verify(files: &[PathBuf], cfg: SolverConfig, cert_out: Option<&Path>, format: Format) -> Result<ExitCode> {
    let mut specs = Vec::new();
    let mut seen = HashMap::new();
    for path in files {
        for spec in parse_file(path)? {
            if let Some(first) = seen.insert(spec.id().to_string(), path.clone()) {
                bail!(
                    "{}: inequality id `{}` already defined in {}",
                    path.display(),
                    spec.id(),
                    first.display()
                );
            }
            specs.push(spec);
        }
    }
    let report = run(&specs, cfg, cert_out)?;
    emit(&report, format, RunReport::to_text)?;
    Ok(if report.all_proved() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Verifies `specs` with one shared worker pool and assembles the report in
/// input order.
fn run(specs: &[InequalitySpec], cfg: SolverConfig, cert_out: Option<&Path>) -> Result<RunReport> {
    if let Some(dir) = cert_out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let results = solver::verify_all(specs, &cfg);
    let mut records = Vec::with_capacity(specs.len());
    for (spec, result) in specs.iter().zip(&results) {
        let cert_path = match (cert_out, result.outcome.certificate()) {
            (Some(dir), Some(c)) => {
                let path = dir.join(format!("{}.cert", spec.id()));
                fs::write(&path, c.serialize()).with_context(|| format!("cannot write {}", path.display()))?;
                Some(path)
            }
            _ => None,
        };
        records.push(Record::new(spec.id(), result, cert_path));
    }
    Ok(RunReport::new(records, cfg))
}

fn emit<T: serde::Serialize>(report: &T, format: Format, text: impl Fn(&T) -> String) -> Result<()> {
    match format {
        Format::Text => print!("{}", text(report)),
        Format::Json => println!("{}", serde_json::to_string_pretty(report)?),
    }
    Ok(())
}

fn cmd_replay(ineq: &Path, cert_path: &Path) -> Result<ExitCode> {
    let specs = parse_file(ineq)?;
    let cert =
        Certificate::deserialize(&read(cert_path)?).map_err(|e| anyhow::anyhow!("{}: {e}", cert_path.display()))?;
    let Some(spec) = specs.iter().find(|s| s.id() == cert.ineq_id) else {
        let ids: Vec<_> = specs.iter().map(|s| s.id()).collect();
        bail!(
            "{} certifies `{}`, which is not among the inequalities in {} ({})",
            cert_path.display(),
            cert.ineq_id,
            ineq.display(),
            ids.join(", ")
        );
    };
    match cert::replay_parallel(spec, &cert.root) {
        Ok(()) => {
            println!("{}: accepted", spec.id());
            Ok(ExitCode::SUCCESS)
        }
        Err(r) => {
            println!("{}: rejected at {}: {:?}", spec.id(), r.path, r.reason);
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_bench(first: StrategyArg, jobs: Option<usize>, cert_out: Option<&Path>, format: Format) -> Result<ExitCode> {
    let specs = corpus::specs();
    let run_with = |strategy: Strategy, sub: &str| -> Result<RunReport> {
        let cfg = config(SolverConfig::default().max_depth, strategy, false, jobs);
        let dir = cert_out.map(|d| d.join(sub));
        let mut report = run(&specs, cfg, dir.as_deref())?;
        report.warnings = report
            .records
            .iter()
            .filter_map(|r| corpus::drift(&r.id, strategy, r.boxes_visited))
            .map(|w| format!("{sub}: {w}"))
            .collect();
        Ok(report)
    };
    let bench = BenchReport {
        center: run_with(Strategy::CenterMid, "center")?,
        hotspot: run_with(Strategy::HotSpot, "hotspot")?,
    };
    emit(&bench, format, |b| b.to_text(first == StrategyArg::Hotspot))?;
    Ok(if bench.all_proved() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
