use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::poll::generate_poll_set;
use super::{
    evaluate_checked, Evaluator, IncumbentPolicy, MadsConfig, MadsError, PollOrder, RunResult,
    StopReason, TraceDecision, TraceRecord,
};
use crate::dominance::Metrics;
use crate::filter::{EntryId, FilterDecision, FrontierFilter};
use crate::switches::SwitchVector;

/// Everything a MADS run carries between steps.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    pub filter: FrontierFilter,
    /// Incumbent of the most recent step.
    pub incumbent_id: Option<EntryId>,
    pub eval_count: usize,
    pub budget: usize,
    pub rng_seed: u64,
    pub poll_order: PollOrder,
    pub incumbent_policy: IncumbentPolicy,
    /// Entries whose full poll found nothing since the last filter change.
    pub polled_exhaustively: BTreeSet<EntryId>,
    pub mesh_radius: usize,
    pub mesh_adaptive: bool,
    pub mesh_max_radius: usize,
    /// Number of poll steps started; keys the seeded poll order.
    pub iteration: u64,
    pub trace: Vec<TraceRecord>,
    dimension: usize,
}

/// What one call to [`mads_step`] achieved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    /// A poll point entered the filter; polling stopped there.
    Improved {
        incumbent: EntryId,
        accepted: EntryId,
        decision: FilterDecision,
    },
    /// The whole poll set failed at radius 1; the incumbent is now exhausted.
    Exhausted { incumbent: EntryId },
    /// The whole poll set failed at a larger radius, which was halved.
    MeshShrunk { incumbent: EntryId, radius: usize },
    /// The budget ran out mid-poll.
    BudgetReached { incumbent: EntryId },
}

impl OptimizerState {
    pub fn new(config: &MadsConfig, dimension: usize) -> Result<Self, MadsError> {
        if dimension == 0 {
            return Err(MadsError::EmptyDimension);
        }
        Ok(Self {
            filter: FrontierFilter::new(),
            incumbent_id: None,
            eval_count: 0,
            budget: config.budget,
            rng_seed: config.seed,
            poll_order: config.poll_order,
            incumbent_policy: config.incumbent_policy,
            polled_exhaustively: BTreeSet::new(),
            mesh_radius: 1,
            mesh_adaptive: config.mesh_adaptive,
            mesh_max_radius: config.mesh_max_radius.clamp(1, dimension),
            iteration: 0,
            trace: Vec::new(),
            dimension,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Evaluates the seeded-random starting point and inserts it.
    pub fn initialize<E: Evaluator + ?Sized>(
        &mut self,
        evaluator: &mut E,
    ) -> Result<FilterDecision, MadsError> {
        if self.budget == 0 {
            return Err(MadsError::ZeroBudget);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        let x0 = SwitchVector::random(self.dimension, &mut rng);
        let metrics = evaluate_checked(evaluator, &x0)?;
        Ok(self.record_evaluation(x0, metrics, None))
    }

    fn record_evaluation(
        &mut self,
        x: SwitchVector,
        metrics: Metrics,
        incumbent: Option<EntryId>,
    ) -> FilterDecision {
        self.eval_count += 1;
        let candidate = x.to_coords();
        let decision = self.filter.insert(x, metrics);
        if decision.is_accepted() {
            self.polled_exhaustively.clear();
        }
        self.trace.push(TraceRecord {
            eval_index: Some(self.eval_count),
            candidate,
            metrics: Some(metrics),
            decision: TraceDecision::Filter(decision.clone()),
            incumbent_id: incumbent,
            filter_size_after: self.filter.len(),
        });
        decision
    }

    fn record_skip(&mut self, point: Vec<i32>, incumbent: EntryId) {
        self.trace.push(TraceRecord {
            eval_index: None,
            candidate: point,
            metrics: None,
            decision: TraceDecision::SkippedInvalid,
            incumbent_id: Some(incumbent),
            filter_size_after: self.filter.len(),
        });
    }
}

/// Picks the next poll center among entries not yet exhausted.
pub fn select_incumbent(
    filter: &FrontierFilter,
    policy: IncumbentPolicy,
    polled_exhaustively: &BTreeSet<EntryId>,
) -> Result<EntryId, MadsError> {
    if filter.is_empty() {
        return Err(MadsError::EmptyFilter);
    }
    let open = filter
        .entries()
        .iter()
        .filter(|e| !polled_exhaustively.contains(&e.id));
    let chosen = match policy {
        IncumbentPolicy::RoundRobin => open.min_by_key(|e| e.id),
        IncumbentPolicy::FeasibilityFirst => open.min_by(|a, b| {
            a.metrics
                .h()
                .total_cmp(&b.metrics.h())
                .then(a.metrics.f().total_cmp(&b.metrics.f()))
                .then(a.id.cmp(&b.id))
        }),
    };
    chosen.map(|e| e.id).ok_or(MadsError::Exhausted)
}

/// One poll round around a freshly selected incumbent, stopping at the first
/// candidate the filter accepts.
pub fn mads_step<E: Evaluator + ?Sized>(
    state: &mut OptimizerState,
    evaluator: &mut E,
) -> Result<StepOutcome, MadsError> {
    let incumbent = select_incumbent(
        &state.filter,
        state.incumbent_policy,
        &state.polled_exhaustively,
    )?;
    state.incumbent_id = Some(incumbent);
    let center = state
        .filter
        .get(incumbent)
        .map(|e| e.x.clone())
        .expect("selected incumbent is a filter member");
    let points = generate_poll_set(
        &center,
        state.poll_order,
        state.rng_seed,
        state.iteration,
        state.mesh_radius,
    )?;
    state.iteration += 1;

    for point in points {
        if state.eval_count >= state.budget {
            return Ok(StepOutcome::BudgetReached { incumbent });
        }
        let Some(x) = point.switch_vector() else {
            state.record_skip(point.point, incumbent);
            continue;
        };
        let metrics = evaluate_checked(evaluator, &x)?;
        let accepted = state.filter.next_id();
        let decision = state.record_evaluation(x, metrics, Some(incumbent));
        if decision.is_accepted() {
            if state.mesh_adaptive {
                state.mesh_radius = (state.mesh_radius * 2).min(state.mesh_max_radius);
            }
            return Ok(StepOutcome::Improved {
                incumbent,
                accepted,
                decision,
            });
        }
    }

    if state.mesh_radius > 1 {
        state.mesh_radius /= 2;
        Ok(StepOutcome::MeshShrunk {
            incumbent,
            radius: state.mesh_radius,
        })
    } else {
        state.polled_exhaustively.insert(incumbent);
        Ok(StepOutcome::Exhausted { incumbent })
    }
}

/// Budget spent, or every filter entry exhausted at unit radius.
pub fn should_stop(state: &OptimizerState) -> bool {
    if state.eval_count >= state.budget {
        return true;
    }
    if state.filter.is_empty() {
        return true;
    }
    state.mesh_radius == 1
        && state
            .filter
            .ids()
            .all(|id| state.polled_exhaustively.contains(&id))
}

/// Full MADS run from a seeded-random start.
pub fn run_mads<E: Evaluator + ?Sized>(
    config: &MadsConfig,
    evaluator: &mut E,
) -> Result<RunResult, MadsError> {
    let mut state = OptimizerState::new(config, evaluator.dimension())?;
    state.initialize(evaluator)?;
    while !should_stop(&state) {
        mads_step(&mut state, evaluator)?;
    }
    let stop_reason = if state.eval_count >= state.budget {
        StopReason::Budget
    } else {
        StopReason::Exhaustion
    };
    Ok(RunResult {
        evaluations_used: state.eval_count,
        filter: state.filter,
        trace: state.trace,
        stop_reason,
    })
}
