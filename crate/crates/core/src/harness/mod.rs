//! Reproducibility surface: file loading, run orchestration, brute-force
//! enumeration, baseline comparison and the command-line front end.

pub mod cli;
mod compare;
mod enumerate;
mod files;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::filter::FrontierFilter;
use crate::mads::{
    run_mads, run_random_search, IncumbentPolicy, MadsConfig, MadsError, PollOrder, StopReason,
    TraceDecision, TraceRecord,
};
use crate::sim::{FeederEvaluator, NetworkError};

pub use compare::{compare_runs, median, AlgorithmSummary, ComparisonReport, MedianSummary, SeedComparison};
pub use enumerate::{
    enumerate_all, enumerate_evaluator, non_dominated_indices, Enumeration, MAX_ENUMERATION_SWITCHES,
};
pub use files::{
    load_network, network_to_json, parse_network, read_frontier, trace_to_csv, write_frontier,
    write_trace, write_trace_csv, FrontierFile, FrontierFileEntry, Loss, FRONTIER_SCHEMA_VERSION,
    NETWORK_SCHEMA_VERSION, TRACE_HEADER,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}line {line}, column {column}, field `{field}`: {message}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("unsupported schema_version {found} (expected {expected})")]
    UnsupportedSchema { found: u32, expected: u32 },
    #[error("invalid network: {0}")]
    Network(#[from] NetworkError),
    #[error("refusing to enumerate 2^{n} configurations; at most {max} switches are supported")]
    TooManySwitches { n: usize, max: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Mads(#[from] MadsError),
    #[error("malformed output file: {0}")]
    InvalidOutput(String),
}

impl HarnessError {
    pub(crate) fn with_path(self, file: &Path) -> Self {
        match self {
            HarnessError::Parse { line, column, field, message, .. } => HarnessError::Parse {
                path: Some(file.to_path_buf()),
                line,
                column,
                field,
                message,
            },
            other => other,
        }
    }

    /// Process exit status: 3 for evaluator failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Mads(MadsError::Evaluator { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Mads,
    Random,
    Enumerate,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Mads => "mads",
            Algorithm::Random => "random",
            Algorithm::Enumerate => "enumerate",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    pub network_path: PathBuf,
    pub algorithm: Algorithm,
    pub budget: usize,
    pub seed: u64,
    pub poll_order: PollOrder,
    pub incumbent_policy: IncumbentPolicy,
    pub mesh_adaptive: bool,
    pub trace_path: Option<PathBuf>,
    pub frontier_path: Option<PathBuf>,
}

impl HarnessConfig {
    pub fn new(network_path: impl Into<PathBuf>, algorithm: Algorithm) -> Self {
        Self {
            network_path: network_path.into(),
            algorithm,
            budget: 1000,
            seed: 0,
            poll_order: PollOrder::default(),
            incumbent_policy: IncumbentPolicy::default(),
            mesh_adaptive: false,
            trace_path: None,
            frontier_path: None,
        }
    }

    pub fn mads_config(&self) -> MadsConfig {
        MadsConfig {
            budget: self.budget,
            seed: self.seed,
            poll_order: self.poll_order,
            incumbent_policy: self.incumbent_policy,
            mesh_adaptive: self.mesh_adaptive,
            ..MadsConfig::default()
        }
    }
}

/// Outcome of [`execute`], printed as the one-line CLI summary.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub algorithm: Algorithm,
    pub evaluations_used: usize,
    pub frontier_size: usize,
    pub best_feasible_f: Option<f64>,
    pub stop_reason: Option<StopReason>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "algorithm={} evaluations={} frontier={}",
            self.algorithm, self.evaluations_used, self.frontier_size
        )?;
        match self.best_feasible_f {
            Some(v) => write!(f, " best_feasible_f_kw={v:.4}")?,
            None => write!(f, " best_feasible_f_kw=none")?,
        }
        match self.stop_reason {
            Some(StopReason::Budget) => write!(f, " stop=budget"),
            Some(StopReason::Exhaustion) => write!(f, " stop=exhaustion"),
            None => Ok(()),
        }
    }
}

/// Loads the network, runs the configured algorithm and writes any
/// requested output files.
pub fn execute(config: &HarnessConfig) -> Result<RunSummary, HarnessError> {
    let network = load_network(&config.network_path)?;
    if config.algorithm != Algorithm::Enumerate && config.budget == 0 {
        return Err(HarnessError::InvalidConfig("budget must be at least 1".into()));
    }

    let (frontier, trace, summary) = match config.algorithm {
        Algorithm::Mads | Algorithm::Random => {
            let mut evaluator = FeederEvaluator::new(&network);
            let mads_config = config.mads_config();
            let run = if config.algorithm == Algorithm::Mads {
                run_mads(&mads_config, &mut evaluator)?
            } else {
                run_random_search(&mads_config, &mut evaluator)?
            };
            let summary = RunSummary {
                algorithm: config.algorithm,
                evaluations_used: run.evaluations_used,
                frontier_size: run.filter.len(),
                best_feasible_f: run.best_feasible_loss(),
                stop_reason: Some(run.stop_reason),
            };
            let frontier =
                FrontierFile::from_points(run.filter.entries().iter().map(|e| (&e.x, &e.metrics)));
            (frontier, run.trace, summary)
        }
        Algorithm::Enumerate => {
            let all = enumerate_all(&network)?;
            let summary = RunSummary {
                algorithm: Algorithm::Enumerate,
                evaluations_used: all.evaluations.len(),
                frontier_size: all.frontier.len(),
                best_feasible_f: all
                    .frontier_points()
                    .filter(|(_, m)| m.is_feasible())
                    .map(|(_, m)| m.f())
                    .min_by(f64::total_cmp),
                stop_reason: None,
            };
            let trace = if config.trace_path.is_some() {
                sequential_trace(&all)
            } else {
                Vec::new()
            };
            (FrontierFile::from_points(all.frontier_points()), trace, summary)
        }
    };

    if let Some(path) = &config.trace_path {
        write_trace(path, &trace)?;
    }
    if let Some(path) = &config.frontier_path {
        write_frontier(path, &frontier)?;
    }
    Ok(summary)
}

/// Enumeration order replayed through a frontier filter, for trace output.
fn sequential_trace(all: &Enumeration) -> Vec<TraceRecord> {
    let mut filter = FrontierFilter::new();
    all.evaluations
        .iter()
        .enumerate()
        .map(|(i, (x, m))| {
            let decision = filter.insert(x.clone(), *m);
            TraceRecord {
                eval_index: Some(i + 1),
                candidate: x.to_coords(),
                metrics: Some(*m),
                decision: TraceDecision::Filter(decision),
                incumbent_id: None,
                filter_size_after: filter.len(),
            }
        })
        .collect()
}
