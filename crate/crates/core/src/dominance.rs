//! Bi-objective metrics and the Pareto dominance relation.
//!
//! Both objectives are minimized: `f` is the active-power loss in kW and `h`
//! is the aggregated constraint violation. A configuration for which the
//! simulator cannot produce a loss carries the [`Metrics::INFEASIBLE`]
//! sentinel, which orders above every finite loss.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Loss/violation pair returned by one black-box evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    f: f64,
    h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MetricsError {
    #[error("loss must be nonnegative or the infeasible sentinel, got {0}")]
    InvalidLoss(f64),
    #[error("violation must be finite and nonnegative, got {0}")]
    InvalidViolation(f64),
}

impl Metrics {
    /// Loss sentinel for configurations without a power-flow solution.
    pub const INFEASIBLE: f64 = f64::INFINITY;

    pub fn new(f: f64, h: f64) -> Result<Self, MetricsError> {
        if f.is_nan() || f < 0.0 || f == f64::NEG_INFINITY {
            return Err(MetricsError::InvalidLoss(f));
        }
        if !h.is_finite() || h < 0.0 {
            return Err(MetricsError::InvalidViolation(h));
        }
        // Normalize -0.0 so equality and formatting stay canonical.
        Ok(Self { f: f + 0.0, h: h + 0.0 })
    }

    pub fn infeasible(h: f64) -> Result<Self, MetricsError> {
        Self::new(Self::INFEASIBLE, h)
    }

    /// Active-power loss in kW, or `f64::INFINITY` for the sentinel.
    pub fn f(&self) -> f64 {
        self.f
    }

    /// Aggregated violation; zero means every operational limit holds.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn is_infeasible(&self) -> bool {
        self.f == Self::INFEASIBLE
    }

    pub fn is_feasible(&self) -> bool {
        !self.is_infeasible() && self.h == 0.0
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infeasible() {
            write!(fmt, "(f=inf, h={})", self.h)
        } else {
            write!(fmt, "(f={}, h={})", self.f, self.h)
        }
    }
}

/// Outcome of comparing an ordered pair of metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DominanceRelation {
    FirstDominates,
    SecondDominates,
    Equal,
    Incomparable,
}

impl DominanceRelation {
    /// The relation seen from the other operand.
    pub fn flip(self) -> Self {
        match self {
            Self::FirstDominates => Self::SecondDominates,
            Self::SecondDominates => Self::FirstDominates,
            other => other,
        }
    }
}

/// Weak componentwise dominance with at least one strict improvement.
pub fn compare(a: &Metrics, b: &Metrics) -> DominanceRelation {
    // Metrics never hold NaN, so partial_cmp is total here.
    let by_f = a.f.partial_cmp(&b.f).expect("metrics are never NaN");
    let by_h = a.h.partial_cmp(&b.h).expect("metrics are never NaN");
    match (by_f, by_h) {
        (Ordering::Equal, Ordering::Equal) => DominanceRelation::Equal,
        (Ordering::Less | Ordering::Equal, Ordering::Less | Ordering::Equal) => {
            DominanceRelation::FirstDominates
        }
        (Ordering::Greater | Ordering::Equal, Ordering::Greater | Ordering::Equal) => {
            DominanceRelation::SecondDominates
        }
        _ => DominanceRelation::Incomparable,
    }
}

/// True when `a` dominates `b`.
pub fn dominates(a: &Metrics, b: &Metrics) -> bool {
    compare(a, b) == DominanceRelation::FirstDominates
}
