//! Backward/forward sweep power flow for radial feeders.
//!
//! The source bus is held at 1.0∠0° p.u. and every load is constant-PQ.
//! Each sweep computes load currents from the present voltages, accumulates
//! branch currents from the leaves toward the source, then walks back down
//! the tree applying `V_child = V_parent - Z * I`.

use std::collections::VecDeque;

use num_complex::Complex64;

use super::network::{NetworkModel, SimError};
use super::topology::topology_of;
use crate::switches::SwitchVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFlowSettings {
    /// Convergence threshold on the largest per-bus voltage change, p.u.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PowerFlowSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerFlowSolution {
    /// Per-bus voltage, p.u., in network bus order.
    pub bus_voltage: Vec<Complex64>,
    /// Per-branch current, p.u., positive from `from` to `to`; zero when open.
    pub branch_current: Vec<Complex64>,
    /// Closed flag per branch for the solved configuration.
    pub closed: Vec<bool>,
    /// Complex power delivered by the source, p.u.
    pub source_power: Complex64,
    /// Active-power loss, kW.
    pub total_loss: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl PowerFlowSolution {
    pub fn min_voltage(&self) -> f64 {
        self.bus_voltage.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_voltage(&self) -> f64 {
        self.bus_voltage.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Rooted spanning tree of the closed-branch graph.
struct Tree {
    /// Buses in breadth-first order from the source.
    order: Vec<usize>,
    /// (parent bus, branch index, branch points parent->child as from->to).
    parent: Vec<Option<(usize, usize, bool)>>,
}

fn build_tree(network: &NetworkModel, closed: &[bool]) -> Tree {
    let n = network.buses().len();
    let mut adjacency = vec![Vec::new(); n];
    for (k, _) in closed.iter().enumerate().filter(|(_, &c)| c) {
        let (a, b) = network.branch_ends(k);
        adjacency[a].push((b, k, true));
        adjacency[b].push((a, k, false));
    }
    let root = network.source_index();
    let mut parent = vec![None; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    visited[root] = true;
    while let Some(bus) = queue.pop_front() {
        order.push(bus);
        for &(next, k, forward) in &adjacency[bus] {
            if !visited[next] {
                visited[next] = true;
                parent[next] = Some((bus, k, forward));
                queue.push_back(next);
            }
        }
    }
    Tree { order, parent }
}

pub fn solve_power_flow(
    network: &NetworkModel,
    x: &SwitchVector,
    settings: &PowerFlowSettings,
) -> Result<PowerFlowSolution, SimError> {
    let closed = network.closed_branches(x)?;
    solve_closed(network, closed, settings)
}

pub(crate) fn solve_closed(
    network: &NetworkModel,
    closed: Vec<bool>,
    settings: &PowerFlowSettings,
) -> Result<PowerFlowSolution, SimError> {
    if !topology_of(network, &closed).radial {
        return Err(SimError::NotRadial);
    }
    let tree = build_tree(network, &closed);
    let s_base = network.base().s_base_kva;
    let loads: Vec<Complex64> = network
        .buses()
        .iter()
        .map(|b| Complex64::new(b.p_kw, b.q_kvar) / s_base)
        .collect();
    let impedance: Vec<Complex64> = network
        .branches()
        .iter()
        .map(|b| Complex64::new(b.r_pu, b.x_pu))
        .collect();
    let root = network.source_index();
    let n = loads.len();

    // Downstream current of each bus (its own load plus everything below it).
    let backward = |voltage: &[Complex64]| -> Vec<Complex64> {
        let mut downstream: Vec<Complex64> = loads
            .iter()
            .zip(voltage)
            .map(|(s, v)| (s / v).conj())
            .collect();
        for &bus in tree.order.iter().rev() {
            if let Some((up, _, _)) = tree.parent[bus] {
                let carried = downstream[bus];
                downstream[up] += carried;
            }
        }
        downstream
    };

    // Branch currents, loss and source injection consistent with `voltage`.
    let settle = |voltage: &[Complex64]| {
        let downstream = backward(voltage);
        let mut branch_current = vec![Complex64::new(0.0, 0.0); closed.len()];
        let mut loss_pu = 0.0;
        for (bus, link) in tree.parent.iter().enumerate() {
            if let Some((_, k, forward)) = *link {
                let current = downstream[bus];
                branch_current[k] = if forward { current } else { -current };
                loss_pu += network.branches()[k].r_pu * current.norm_sqr();
            }
        }
        (branch_current, loss_pu, voltage[root] * downstream[root].conj())
    };
    let total_load: f64 = loads.iter().map(|s| s.re).sum();

    let mut voltage = vec![Complex64::new(1.0, 0.0); n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < settings.max_iterations {
        iterations += 1;
        let downstream = backward(&voltage);
        let mut updated = voltage.clone();
        for &bus in &tree.order {
            if let Some((up, k, _)) = tree.parent[bus] {
                updated[bus] = updated[up] - impedance[k] * downstream[bus];
            }
        }
        let change = updated
            .iter()
            .zip(&voltage)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        voltage = updated;
        if !change.is_finite() {
            break;
        }
        if change < settings.tolerance {
            // The last update lags the currents by one sweep; keep sweeping
            // until the active-power balance closes to the same tolerance.
            let (_, loss_pu, source) = settle(&voltage);
            if (source.re - total_load - loss_pu).abs() < settings.tolerance {
                converged = true;
                break;
            }
        }
    }

    let (branch_current, loss_pu, source_power) = settle(&voltage);

    Ok(PowerFlowSolution {
        bus_voltage: voltage,
        branch_current,
        closed,
        source_power,
        total_loss: loss_pu * s_base,
        converged,
        iterations,
    })
}
