//! Mesh adaptive direct search over binary switch vectors, plus the uniform
//! random-search baseline. Both share the frontier filter and trace format.

mod engine;
mod poll;
mod random;

use std::error::Error as StdError;

use thiserror::Error;

use crate::dominance::Metrics;
use crate::filter::{EntryId, FilterDecision, FrontierFilter};
use crate::switches::SwitchVector;

pub use engine::{mads_step, run_mads, select_incumbent, should_stop, OptimizerState, StepOutcome};
pub use poll::{generate_poll_set, PollDirection, PollPoint};
pub use random::run_random_search;

/// Error type returned by evaluators.
pub type EvalError = Box<dyn StdError + Send + Sync>;

/// The black-box boundary: one switch vector in, one metrics pair out.
///
/// Implementations should be pure; `&mut self` exists so scripted or
/// caching evaluators can be written without interior mutability.
pub trait Evaluator {
    /// Number of switches the evaluator expects.
    fn dimension(&self) -> usize;

    fn evaluate(&mut self, x: &SwitchVector) -> Result<Metrics, EvalError>;
}

impl<E: Evaluator + ?Sized> Evaluator for &mut E {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn evaluate(&mut self, x: &SwitchVector) -> Result<Metrics, EvalError> {
        (**self).evaluate(x)
    }
}

/// Adapts a closure into an [`Evaluator`].
pub struct FnEvaluator<F> {
    dimension: usize,
    func: F,
}

impl<F> FnEvaluator<F>
where
    F: FnMut(&SwitchVector) -> Result<Metrics, EvalError>,
{
    pub fn new(dimension: usize, func: F) -> Self {
        Self { dimension, func }
    }
}

impl<F> Evaluator for FnEvaluator<F>
where
    F: FnMut(&SwitchVector) -> Result<Metrics, EvalError>,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&mut self, x: &SwitchVector) -> Result<Metrics, EvalError> {
        (self.func)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PollOrder {
    /// `+e_1, -e_1, +e_2, -e_2, ...`
    #[default]
    Lexicographic,
    /// A permutation keyed on the run seed and the step counter.
    SeededRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IncumbentPolicy {
    /// Lowest-id entry that has not been exhaustively polled.
    #[default]
    RoundRobin,
    /// Smallest violation, then smallest loss, then lowest id.
    FeasibilityFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MadsConfig {
    pub budget: usize,
    pub seed: u64,
    pub poll_order: PollOrder,
    pub incumbent_policy: IncumbentPolicy,
    /// Extension: grow the Hamming radius on success, shrink on failure.
    pub mesh_adaptive: bool,
    /// Upper bound on the adaptive radius (also capped by `n`).
    pub mesh_max_radius: usize,
}

impl Default for MadsConfig {
    fn default() -> Self {
        Self {
            budget: 1000,
            seed: 0,
            poll_order: PollOrder::default(),
            incumbent_policy: IncumbentPolicy::default(),
            mesh_adaptive: false,
            mesh_max_radius: 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum MadsError {
    #[error("the evaluator has no switches to optimize")]
    EmptyDimension,
    #[error("the evaluation budget must be at least 1")]
    ZeroBudget,
    #[error("mesh radius {radius} is outside 1..={n}")]
    RadiusOutOfRange { radius: usize, n: usize },
    #[error("the frontier filter is empty")]
    EmptyFilter,
    #[error("every filter entry has been polled exhaustively")]
    Exhausted,
    #[error("evaluation of candidate {candidate} failed: {source}")]
    Evaluator {
        candidate: SwitchVector,
        #[source]
        source: EvalError,
    },
}

/// Decision column of a trace record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceDecision {
    Filter(FilterDecision),
    /// Poll point outside `{0,1}^n`; dropped without evaluation.
    SkippedInvalid,
}

/// One event of a run: an evaluation or a discarded poll point.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// 1-based evaluation counter; `None` for skipped points.
    pub eval_index: Option<usize>,
    /// Candidate coordinates (entries outside `{0,1}` only when skipped).
    pub candidate: Vec<i32>,
    pub metrics: Option<Metrics>,
    pub decision: TraceDecision,
    pub incumbent_id: Option<EntryId>,
    pub filter_size_after: usize,
}

impl TraceRecord {
    pub fn is_evaluation(&self) -> bool {
        self.eval_index.is_some()
    }

    /// The evaluated switch vector, if this record is an evaluation.
    pub fn switch_vector(&self) -> Option<SwitchVector> {
        self.eval_index?;
        SwitchVector::from_coords(&self.candidate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Budget,
    Exhaustion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub filter: FrontierFilter,
    pub trace: Vec<TraceRecord>,
    pub evaluations_used: usize,
    pub stop_reason: StopReason,
}

impl RunResult {
    /// Lowest loss among frontier members with zero violation.
    pub fn best_feasible_loss(&self) -> Option<f64> {
        self.filter
            .entries()
            .iter()
            .filter(|e| e.metrics.is_feasible())
            .map(|e| e.metrics.f())
            .min_by(f64::total_cmp)
    }

    /// 1-based evaluation index of the first feasible candidate evaluated.
    pub fn evaluations_to_first_feasible(&self) -> Option<usize> {
        self.trace
            .iter()
            .find(|r| r.metrics.is_some_and(|m| m.is_feasible()))
            .and_then(|r| r.eval_index)
    }
}

fn evaluate_checked<E: Evaluator + ?Sized>(
    evaluator: &mut E,
    x: &SwitchVector,
) -> Result<Metrics, MadsError> {
    evaluator.evaluate(x).map_err(|source| MadsError::Evaluator {
        candidate: x.clone(),
        source,
    })
}
