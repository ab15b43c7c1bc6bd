use serde::Serialize;

use super::HarnessError;
use crate::mads::{run_mads, run_random_search, Evaluator, MadsConfig, RunResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    /// `None` when no frontier member has zero violation.
    pub best_feasible_f: Option<f64>,
    pub frontier_size: usize,
    pub evaluations_used: usize,
    pub evaluations_to_first_feasible: Option<usize>,
}

impl From<&RunResult> for AlgorithmSummary {
    fn from(run: &RunResult) -> Self {
        Self {
            best_feasible_f: run.best_feasible_loss(),
            frontier_size: run.filter.len(),
            evaluations_used: run.evaluations_used,
            evaluations_to_first_feasible: run.evaluations_to_first_feasible(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedComparison {
    pub seed: u64,
    pub mads: AlgorithmSummary,
    pub random: AlgorithmSummary,
}

/// Medians across seeds. Missing values (nothing feasible found) count as
/// +infinity, and an infinite median is reported as `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MedianSummary {
    pub best_feasible_f: Option<f64>,
    pub evaluations_to_first_feasible: Option<f64>,
    pub frontier_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub budget: usize,
    pub seeds: Vec<SeedComparison>,
    pub mads_median: MedianSummary,
    pub random_median: MedianSummary,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Runs MADS and random search at the same budget for every seed.
///
/// `config` supplies the budget and MADS options; its seed is replaced by
/// each entry of `seeds`.
pub fn compare_runs<E: Evaluator + ?Sized>(
    evaluator: &mut E,
    config: &MadsConfig,
    seeds: &[u64],
) -> Result<ComparisonReport, HarnessError> {
    if config.budget == 0 {
        return Err(HarnessError::InvalidConfig("budget must be at least 1".into()));
    }
    if seeds.is_empty() {
        return Err(HarnessError::InvalidConfig("at least one seed is required".into()));
    }
    let mut rows = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let run_config = MadsConfig { seed, ..config.clone() };
        let mads = run_mads(&run_config, evaluator)?;
        let random = run_random_search(&run_config, evaluator)?;
        rows.push(SeedComparison {
            seed,
            mads: AlgorithmSummary::from(&mads),
            random: AlgorithmSummary::from(&random),
        });
    }
    let summarize = |pick: fn(&SeedComparison) -> &AlgorithmSummary| MedianSummary {
        best_feasible_f: finite(median(
            rows.iter().map(|r| pick(r).best_feasible_f.unwrap_or(f64::INFINITY)),
        )),
        evaluations_to_first_feasible: finite(median(rows.iter().map(|r| {
            pick(r)
                .evaluations_to_first_feasible
                .map_or(f64::INFINITY, |v| v as f64)
        }))),
        frontier_size: median(rows.iter().map(|r| pick(r).frontier_size as f64)),
    };
    Ok(ComparisonReport {
        schema_version: 1,
        budget: config.budget,
        mads_median: summarize(|r| &r.mads),
        random_median: summarize(|r| &r.random),
        seeds: rows,
    })
}

/// Median with the even-count midpoint convention; NaN for no values.
pub fn median(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}
