//! The bundled feeder environment: network model, topology module, radial
//! power flow and limit-violation modules, composed into an evaluator.

mod evaluate;
mod network;
mod power_flow;
mod topology;

pub use evaluate::{evaluate, evaluate_detailed, evaluate_with, violations, Evaluation, FeederEvaluator, Module};
pub use network::{Base, Branch, BranchId, Bus, BusId, NetworkError, NetworkModel, SimError, VoltageLimits};
pub use power_flow::{solve_power_flow, PowerFlowSettings, PowerFlowSolution};
pub use topology::{check_topology, TopologyReport};
