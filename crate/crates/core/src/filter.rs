//! The frontier filter: an insertion-ordered archive of mutually
//! non-dominated candidates.

use crate::dominance::{compare, DominanceRelation, Metrics};
use crate::switches::SwitchVector;

/// Identifier assigned to an accepted candidate. Unique and increasing.
pub type EntryId = u64;

#[derive(Debug, Clone, PartialEq)]
pub struct FilterEntry {
    pub id: EntryId,
    pub x: SwitchVector,
    pub metrics: Metrics,
}

/// What [`FrontierFilter::insert`] did with a candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterDecision {
    /// Neither dominates nor is dominated by any member.
    AddedNonDominating,
    /// Dominated the listed members, which were removed (never empty).
    AddedReplacing(Vec<EntryId>),
    /// Dominated by the given member; the filter is unchanged.
    Rejected(EntryId),
    /// Same `(f, h)` as an existing member; the earlier entry is kept.
    RejectedDuplicate(EntryId),
}

impl FilterDecision {
    /// Whether the decision changed the filter contents.
    pub fn is_accepted(&self) -> bool {
        matches!(self, Self::AddedNonDominating | Self::AddedReplacing(_))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrontierFilter {
    entries: Vec<FilterEntry>,
    next_id: EntryId,
}

impl FrontierFilter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[FilterEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: EntryId) -> Option<&FilterEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn contains(&self, id: EntryId) -> bool {
        self.get(id).is_some()
    }

    pub fn ids(&self) -> impl Iterator<Item = EntryId> + '_ {
        self.entries.iter().map(|e| e.id)
    }

    /// Offers a candidate to the filter.
    ///
    /// Precedence: exact metric duplicate, then domination by a member, then
    /// domination of members, then plain non-dominated addition.
    pub fn insert(&mut self, x: SwitchVector, metrics: Metrics) -> FilterDecision {
        let mut dominated = Vec::new();
        let mut dominator = None;
        for entry in &self.entries {
            match compare(&metrics, &entry.metrics) {
                DominanceRelation::Equal => return FilterDecision::RejectedDuplicate(entry.id),
                DominanceRelation::SecondDominates => {
                    dominator.get_or_insert(entry.id);
                }
                DominanceRelation::FirstDominates => dominated.push(entry.id),
                DominanceRelation::Incomparable => {}
            }
        }
        if let Some(id) = dominator {
            // A consistent filter never lets a candidate be on both sides.
            debug_assert!(dominated.is_empty(), "candidate both dominates and is dominated");
            return FilterDecision::Rejected(id);
        }

        let id = self.next_id;
        self.next_id += 1;
        self.entries.retain(|e| !dominated.contains(&e.id));
        self.entries.push(FilterEntry { id, x, metrics });
        if dominated.is_empty() {
            FilterDecision::AddedNonDominating
        } else {
            FilterDecision::AddedReplacing(dominated)
        }
    }

    /// Id the next accepted candidate will receive.
    pub fn next_id(&self) -> EntryId {
        self.next_id
    }

    /// Entries ordered by loss ascending (the stair-step view).
    pub fn sorted_by_loss(&self) -> Vec<&FilterEntry> {
        let mut out: Vec<_> = self.entries.iter().collect();
        out.sort_by(|a, b| {
            a.metrics
                .f()
                .total_cmp(&b.metrics.f())
                .then(a.metrics.h().total_cmp(&b.metrics.h()))
                .then(a.id.cmp(&b.id))
        });
        out
    }

    pub fn is_pareto_consistent(&self) -> bool {
        is_pareto_consistent(self.entries.iter().map(|e| &e.metrics))
    }
}

/// True iff every pair of distinct items is incomparable.
pub fn is_pareto_consistent<'a, I>(metrics: I) -> bool
where
    I: IntoIterator<Item = &'a Metrics>,
{
    let all: Vec<&Metrics> = metrics.into_iter().collect();
    all.iter().enumerate().all(|(i, a)| {
        all.iter()
            .enumerate()
            .all(|(j, b)| i == j || compare(a, b) == DominanceRelation::Incomparable)
    })
}
