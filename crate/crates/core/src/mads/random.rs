use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    evaluate_checked, Evaluator, MadsConfig, MadsError, RunResult, StopReason, TraceDecision,
    TraceRecord,
};
use crate::filter::FrontierFilter;
use crate::switches::SwitchVector;

/// Baseline: `budget` independent uniform draws (with replacement) fed
/// through the same frontier filter. Poll and mesh settings are ignored.
pub fn run_random_search<E: Evaluator + ?Sized>(
    config: &MadsConfig,
    evaluator: &mut E,
) -> Result<RunResult, MadsError> {
    let n = evaluator.dimension();
    if n == 0 {
        return Err(MadsError::EmptyDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut filter = FrontierFilter::new();
    let mut trace = Vec::with_capacity(config.budget);

    for eval_index in 1..=config.budget {
        let x = SwitchVector::random(n, &mut rng);
        let metrics = evaluate_checked(evaluator, &x)?;
        let candidate = x.to_coords();
        let decision = filter.insert(x, metrics);
        trace.push(TraceRecord {
            eval_index: Some(eval_index),
            candidate,
            metrics: Some(metrics),
            decision: TraceDecision::Filter(decision),
            incumbent_id: None,
            filter_size_after: filter.len(),
        });
    }

    Ok(RunResult {
        evaluations_used: trace.len(),
        filter,
        trace,
        stop_reason: StopReason::Budget,
    })
}
