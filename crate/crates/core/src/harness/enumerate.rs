use super::HarnessError;
use crate::dominance::Metrics;
use crate::mads::{Evaluator, MadsError};
use crate::sim::{FeederEvaluator, NetworkModel};
use crate::switches::SwitchVector;

/// Largest switch count [`enumerate_all`] accepts.
pub const MAX_ENUMERATION_SWITCHES: usize = 20;

/// Every configuration of a feeder with its metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    /// Indexed by [`SwitchVector::to_index`].
    pub evaluations: Vec<(SwitchVector, Metrics)>,
    /// Indices into `evaluations` of the exact non-dominated set, sorted by
    /// loss ascending. Among identical metric pairs the lowest index is kept.
    pub frontier: Vec<usize>,
}

impl Enumeration {
    pub fn metrics_of(&self, x: &SwitchVector) -> Metrics {
        self.evaluations[x.to_index() as usize].1
    }

    pub fn frontier_points(&self) -> impl Iterator<Item = (&SwitchVector, &Metrics)> {
        self.frontier.iter().map(|&i| {
            let (x, m) = &self.evaluations[i];
            (x, m)
        })
    }

    /// Lowest loss among configurations with zero violation.
    pub fn best_feasible_loss(&self) -> Option<f64> {
        self.evaluations
            .iter()
            .filter(|(_, m)| m.is_feasible())
            .map(|(_, m)| m.f())
            .min_by(f64::total_cmp)
    }
}

/// Exhaustive evaluation of all `2^n` switch vectors of a feeder.
pub fn enumerate_all(network: &NetworkModel) -> Result<Enumeration, HarnessError> {
    enumerate_evaluator(&mut FeederEvaluator::new(network))
}

pub fn enumerate_evaluator<E: Evaluator + ?Sized>(
    evaluator: &mut E,
) -> Result<Enumeration, HarnessError> {
    let n = evaluator.dimension();
    if n > MAX_ENUMERATION_SWITCHES {
        return Err(HarnessError::TooManySwitches { n, max: MAX_ENUMERATION_SWITCHES });
    }
    let evaluations = (0..1u64 << n)
        .map(|index| {
            let x = SwitchVector::from_index(n, index);
            let m = evaluator
                .evaluate(&x)
                .map_err(|source| MadsError::Evaluator { candidate: x.clone(), source })?;
            Ok((x, m))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let metrics: Vec<Metrics> = evaluations.iter().map(|(_, m)| *m).collect();
    let frontier = non_dominated_indices(&metrics);
    Ok(Enumeration { evaluations, frontier })
}

/// Exact non-dominated subset by a sort-and-sweep: after ordering by
/// `(f, h, index)`, a point survives iff its `h` is strictly below every
/// `h` seen so far.
pub fn non_dominated_indices(metrics: &[Metrics]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..metrics.len()).collect();
    order.sort_by(|&a, &b| {
        metrics[a]
            .f()
            .total_cmp(&metrics[b].f())
            .then(metrics[a].h().total_cmp(&metrics[b].h()))
            .then(a.cmp(&b))
    });
    let mut best_h = f64::INFINITY;
    order
        .into_iter()
        .filter(|&i| {
            let keep = metrics[i].h() < best_h;
            if keep {
                best_h = metrics[i].h();
            }
            keep
        })
        .collect()
}
