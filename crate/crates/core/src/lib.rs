//! Bi-objective feeder reconfiguration by mesh adaptive direct search.
//!
//! A configuration is a binary vector of switch states. Each evaluation
//! yields an active-power loss `f` (kW) and an aggregated constraint
//! violation `h`; both are minimized. Accepted candidates live in a
//! [`FrontierFilter`] of mutually non-dominated points, and the search polls
//! the one-bit neighbourhood of a filter member until no member improves.
//!
//! - [`dominance`] and [`filter`]: metrics, Pareto comparison, the archive.
//! - [`mads`]: poll sets, incumbent selection, the search loop and the
//!   random-search baseline.
//! - [`sim`]: the bundled feeder environment (topology, sweep power flow,
//!   limit checks) exposed as an [`mads::Evaluator`].
//! - [`harness`]: file formats, enumeration oracle, comparisons and the CLI.

pub mod dominance;
pub mod filter;
pub mod harness;
pub mod mads;
pub mod sim;
pub mod switches;

pub use dominance::{compare, dominates, DominanceRelation, Metrics};
pub use filter::{is_pareto_consistent, EntryId, FilterDecision, FilterEntry, FrontierFilter};
pub use switches::SwitchVector;
