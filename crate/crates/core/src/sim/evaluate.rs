use std::fmt;

use super::network::{NetworkModel, SimError};
use super::power_flow::{solve_closed, PowerFlowSettings, PowerFlowSolution};
use super::topology::{topology_of, TopologyReport};
use crate::dominance::Metrics;
use crate::mads::{EvalError, Evaluator};
use crate::switches::SwitchVector;

/// The evaluation modules whose violations make up `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Module {
    Topology,
    Voltage,
    Thermal,
    Protection,
    VoltageRegulation,
}

impl Module {
    pub fn name(self) -> &'static str {
        match self {
            Module::Topology => "topology",
            Module::Voltage => "voltage",
            Module::Thermal => "thermal",
            Module::Protection => "protection",
            Module::VoltageRegulation => "voltage-regulation",
        }
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Post-power-flow limit checks.
///
/// Voltage: worst per-unit excursion outside `[v_min, v_max]`. Thermal: worst
/// fractional overload `(|I| - rating) / rating` over closed branches.
/// Protection and voltage regulation have no model here and report zero.
pub fn violations(
    solution: &PowerFlowSolution,
    network: &NetworkModel,
) -> Result<Vec<(Module, f64)>, SimError> {
    if !solution.converged {
        return Err(SimError::Unconverged);
    }
    let limits = network.v_limits();
    let voltage = solution
        .bus_voltage
        .iter()
        .map(|v| {
            let mag = v.norm();
            (limits.min - mag).max(mag - limits.max).max(0.0)
        })
        .fold(0.0, f64::max);
    let thermal = network
        .branches()
        .iter()
        .zip(&solution.branch_current)
        .zip(&solution.closed)
        .filter(|(_, &closed)| closed)
        .map(|((branch, current), _)| {
            ((current.norm() - branch.rating_pu) / branch.rating_pu).max(0.0)
        })
        .fold(0.0, f64::max);
    Ok(vec![
        (Module::Voltage, voltage),
        (Module::Thermal, thermal),
        (Module::Protection, 0.0),
        (Module::VoltageRegulation, 0.0),
    ])
}

/// Everything produced while evaluating one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub topology: TopologyReport,
    /// Present only for radial, connected configurations.
    pub power_flow: Option<PowerFlowSolution>,
    /// Per-module violations, including topology.
    pub violations: Vec<(Module, f64)>,
    pub metrics: Metrics,
}

pub fn evaluate(network: &NetworkModel, x: &SwitchVector) -> Result<Metrics, SimError> {
    evaluate_with(network, x, &PowerFlowSettings::default())
}

pub fn evaluate_with(
    network: &NetworkModel,
    x: &SwitchVector,
    settings: &PowerFlowSettings,
) -> Result<Metrics, SimError> {
    evaluate_detailed(network, x, settings).map(|e| e.metrics)
}

/// Topology check, then power flow and limit checks when the topology allows.
///
/// Non-radial configurations get the infeasible loss with `h` equal to the
/// topology violation. A power flow that fails to converge gets the
/// infeasible loss with `h = 1 + topology violation`.
pub fn evaluate_detailed(
    network: &NetworkModel,
    x: &SwitchVector,
    settings: &PowerFlowSettings,
) -> Result<Evaluation, SimError> {
    let closed = network.closed_branches(x)?;
    let topology = topology_of(network, &closed);
    let topo_entry = (Module::Topology, topology.violation);
    if topology.violation > 0.0 {
        return Ok(Evaluation {
            topology,
            power_flow: None,
            violations: vec![topo_entry],
            metrics: infeasible(topology.violation),
        });
    }

    let solution = solve_closed(network, closed, settings)?;
    if !solution.converged {
        return Ok(Evaluation {
            topology,
            power_flow: Some(solution),
            violations: vec![topo_entry],
            metrics: infeasible(1.0 + topology.violation),
        });
    }

    let mut all = vec![topo_entry];
    all.extend(violations(&solution, network)?);
    let h = all.iter().map(|&(_, v)| v).fold(0.0, f64::max);
    let metrics = Metrics::new(solution.total_loss, h).expect("converged loss is finite");
    Ok(Evaluation {
        topology,
        power_flow: Some(solution),
        violations: all,
        metrics,
    })
}

fn infeasible(h: f64) -> Metrics {
    Metrics::infeasible(h).expect("topology violation is a nonnegative count")
}

/// A feeder wrapped as a black-box [`Evaluator`].
#[derive(Debug, Clone)]
pub struct FeederEvaluator<'a> {
    network: &'a NetworkModel,
    settings: PowerFlowSettings,
}

impl<'a> FeederEvaluator<'a> {
    pub fn new(network: &'a NetworkModel) -> Self {
        Self::with_settings(network, PowerFlowSettings::default())
    }

    pub fn with_settings(network: &'a NetworkModel, settings: PowerFlowSettings) -> Self {
        Self { network, settings }
    }

    pub fn network(&self) -> &NetworkModel {
        self.network
    }
}

impl Evaluator for FeederEvaluator<'_> {
    fn dimension(&self) -> usize {
        self.network.switch_count()
    }

    fn evaluate(&mut self, x: &SwitchVector) -> Result<Metrics, EvalError> {
        Ok(evaluate_with(self.network, x, &self.settings)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::network::{Base, Branch, Bus, VoltageLimits};
    use num_complex::Complex64;

    /// Source 1 feeding 2 and 3; switchable tie 2-3.
    fn triangle(load_kw: f64, rating: f64) -> NetworkModel {
        let buses = vec![
            Bus { id: 1, p_kw: 0.0, q_kvar: 0.0 },
            Bus { id: 2, p_kw: load_kw, q_kvar: 0.0 },
            Bus { id: 3, p_kw: load_kw, q_kvar: 0.0 },
        ];
        let branch = |id, from, to, switchable| Branch {
            id,
            from,
            to,
            r_pu: 0.01,
            x_pu: 0.01,
            rating_pu: rating,
            switchable,
        };
        NetworkModel::new(
            Base { s_base_kva: 1000.0, v_base_kv: 12.66 },
            VoltageLimits::default(),
            1,
            buses,
            vec![branch(1, 1, 2, false), branch(2, 1, 3, true), branch(3, 2, 3, true)],
        )
        .unwrap()
    }

    fn sv(s: &str) -> SwitchVector {
        s.parse().unwrap()
    }

    #[test]
    fn radial_within_limits_is_feasible() {
        let net = triangle(100.0, 10.0);
        let m = evaluate(&net, &sv("10")).unwrap();
        assert_eq!(m.h(), 0.0);
        assert!(m.f() > 0.0 && m.f().is_finite());
    }

    #[test]
    fn loop_gives_sentinel_with_unit_violation() {
        let m = evaluate(&triangle(100.0, 10.0), &sv("11")).unwrap();
        assert!(m.is_infeasible());
        assert_eq!(m.h(), 1.0);
    }

    #[test]
    fn island_gives_sentinel_with_island_count() {
        let m = evaluate(&triangle(100.0, 10.0), &sv("00")).unwrap();
        assert!(m.is_infeasible());
        assert_eq!(m.h(), 1.0);
    }

    #[test]
    fn thermal_overload_is_fractional() {
        let net = triangle(100.0, 10.0);
        let mut sol = crate::sim::solve_power_flow(&net, &sv("10"), &Default::default()).unwrap();
        sol.branch_current[0] = Complex64::new(12.0, 0.0);
        let v = violations(&sol, &net).unwrap();
        assert!((v[1].1 - 0.2).abs() < 1e-12);
    }

    #[test]
    fn undervoltage_is_per_unit_shortfall() {
        let net = triangle(100.0, 10.0);
        let mut sol = crate::sim::solve_power_flow(&net, &sv("10"), &Default::default()).unwrap();
        sol.bus_voltage[2] = Complex64::from_polar(0.93, -0.1);
        let v = violations(&sol, &net).unwrap();
        assert_eq!(v[0].0, Module::Voltage);
        assert!((v[0].1 - 0.02).abs() < 1e-12);
        assert_eq!(v[2], (Module::Protection, 0.0));
    }

    #[test]
    fn unconverged_solution_is_refused_and_penalized() {
        let net = triangle(100.0, 10.0);
        let settings = PowerFlowSettings { tolerance: 1e-6, max_iterations: 1 };
        let sol = crate::sim::solve_power_flow(&net, &sv("10"), &settings).unwrap();
        assert_eq!(violations(&sol, &net), Err(SimError::Unconverged));
        let m = evaluate_with(&net, &sv("10"), &settings).unwrap();
        assert!(m.is_infeasible());
        assert_eq!(m.h(), 1.0);
    }

    #[test]
    fn h_is_max_of_module_violations() {
        let net = triangle(2500.0, 1.0);
        let e = evaluate_detailed(&net, &sv("10"), &Default::default()).unwrap();
        let worst = e.violations.iter().map(|v| v.1).fold(0.0, f64::max);
        assert!(worst > 0.0);
        assert_eq!(e.metrics.h(), worst);
    }

    #[test]
    fn wrong_dimension_is_an_error() {
        assert!(matches!(
            evaluate(&triangle(1.0, 1.0), &sv("1")),
            Err(SimError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }
}
