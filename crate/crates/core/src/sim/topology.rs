use petgraph::unionfind::UnionFind;

use super::network::{NetworkModel, SimError};
use crate::switches::SwitchVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologyReport {
    /// Every bus is reachable from the source over closed branches.
    pub connected: bool,
    /// The closed-branch graph is a spanning tree.
    pub radial: bool,
    /// Buses not reachable from the source.
    pub n_islands: usize,
    /// Independent cycles: closed branches - buses + components.
    pub n_loops: usize,
    /// `n_islands + n_loops`.
    pub violation: f64,
}

pub fn check_topology(network: &NetworkModel, x: &SwitchVector) -> Result<TopologyReport, SimError> {
    let closed = network.closed_branches(x)?;
    Ok(topology_of(network, &closed))
}

pub(crate) fn topology_of(network: &NetworkModel, closed: &[bool]) -> TopologyReport {
    let n_buses = network.buses().len();
    let mut sets = UnionFind::<usize>::new(n_buses);
    let mut n_closed = 0usize;
    for (k, _) in closed.iter().enumerate().filter(|(_, &c)| c) {
        let (a, b) = network.branch_ends(k);
        sets.union(a, b);
        n_closed += 1;
    }
    let labels = sets.into_labeling();
    let source_label = labels[network.source_index()];
    let n_islands = labels.iter().filter(|&&l| l != source_label).count();
    let mut roots = labels.clone();
    roots.sort_unstable();
    roots.dedup();
    let n_components = roots.len();

    let n_loops = n_closed + n_components - n_buses;
    let connected = n_islands == 0;
    TopologyReport {
        connected,
        radial: connected && n_loops == 0,
        n_islands,
        n_loops,
        violation: (n_islands + n_loops) as f64,
    }
}
