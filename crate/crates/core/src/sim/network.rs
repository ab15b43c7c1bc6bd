use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::switches::SwitchVector;

pub type BusId = u32;
pub type BranchId = u32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Base {
    pub s_base_kva: f64,
    pub v_base_kv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoltageLimits {
    pub min: f64,
    pub max: f64,
}

impl Default for VoltageLimits {
    fn default() -> Self {
        Self { min: 0.95, max: 1.05 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bus {
    pub id: BusId,
    pub p_kw: f64,
    pub q_kvar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub id: BranchId,
    pub from: BusId,
    pub to: BusId,
    pub r_pu: f64,
    pub x_pu: f64,
    /// Current limit in per-unit.
    pub rating_pu: f64,
    /// Non-switchable branches are permanently closed.
    pub switchable: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("network has no buses")]
    NoBuses,
    #[error("duplicate bus id {0}")]
    DuplicateBus(BusId),
    #[error("duplicate branch id {0}")]
    DuplicateBranch(BranchId),
    #[error("source bus {0} is not declared")]
    UnknownSourceBus(BusId),
    #[error("branch {branch} references undeclared bus {bus}")]
    UnknownBus { branch: BranchId, bus: BusId },
    #[error("branch {0} connects a bus to itself")]
    SelfLoop(BranchId),
    #[error("branch {0} has a negative or non-finite impedance")]
    InvalidImpedance(BranchId),
    #[error("branch {0} must have a positive finite rating")]
    InvalidRating(BranchId),
    #[error("bus {0} has a non-finite load")]
    InvalidLoad(BusId),
    #[error("voltage limits require 0 < min < max, got min={min}, max={max}")]
    InvalidVoltageLimits { min: f64, max: f64 },
    #[error("base quantities must be positive and finite")]
    InvalidBase,
}

/// Validated, immutable feeder description.
///
/// Switchable branches are indexed in declaration order; that order defines
/// the meaning of each [`SwitchVector`] position.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    base: Base,
    v_limits: VoltageLimits,
    source_bus: BusId,
    buses: Vec<Bus>,
    branches: Vec<Branch>,
    source: usize,
    bus_index: HashMap<BusId, usize>,
    ends: Vec<(usize, usize)>,
    switchable: Vec<usize>,
}

impl NetworkModel {
    pub fn new(
        base: Base,
        v_limits: VoltageLimits,
        source_bus: BusId,
        buses: Vec<Bus>,
        branches: Vec<Branch>,
    ) -> Result<Self, NetworkError> {
        if !(base.s_base_kva.is_finite() && base.s_base_kva > 0.0)
            || !(base.v_base_kv.is_finite() && base.v_base_kv > 0.0)
        {
            return Err(NetworkError::InvalidBase);
        }
        if !(v_limits.min > 0.0 && v_limits.min < v_limits.max && v_limits.max.is_finite()) {
            return Err(NetworkError::InvalidVoltageLimits {
                min: v_limits.min,
                max: v_limits.max,
            });
        }
        if buses.is_empty() {
            return Err(NetworkError::NoBuses);
        }

        let mut bus_index = HashMap::with_capacity(buses.len());
        for (i, bus) in buses.iter().enumerate() {
            if bus_index.insert(bus.id, i).is_some() {
                return Err(NetworkError::DuplicateBus(bus.id));
            }
            if !bus.p_kw.is_finite() || !bus.q_kvar.is_finite() {
                return Err(NetworkError::InvalidLoad(bus.id));
            }
        }
        let source = *bus_index
            .get(&source_bus)
            .ok_or(NetworkError::UnknownSourceBus(source_bus))?;

        let mut seen = HashSet::with_capacity(branches.len());
        let mut ends = Vec::with_capacity(branches.len());
        for br in &branches {
            if !seen.insert(br.id) {
                return Err(NetworkError::DuplicateBranch(br.id));
            }
            let lookup = |bus: BusId| {
                bus_index
                    .get(&bus)
                    .copied()
                    .ok_or(NetworkError::UnknownBus { branch: br.id, bus })
            };
            let (from, to) = (lookup(br.from)?, lookup(br.to)?);
            if from == to {
                return Err(NetworkError::SelfLoop(br.id));
            }
            let impedance_ok = |v: f64| v.is_finite() && v >= 0.0;
            if !impedance_ok(br.r_pu) || !impedance_ok(br.x_pu) {
                return Err(NetworkError::InvalidImpedance(br.id));
            }
            if !(br.rating_pu.is_finite() && br.rating_pu > 0.0) {
                return Err(NetworkError::InvalidRating(br.id));
            }
            ends.push((from, to));
        }
        let switchable = branches
            .iter()
            .enumerate()
            .filter(|(_, b)| b.switchable)
            .map(|(i, _)| i)
            .collect();

        Ok(Self {
            base,
            v_limits,
            source_bus,
            buses,
            branches,
            source,
            bus_index,
            ends,
            switchable,
        })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn v_limits(&self) -> VoltageLimits {
        self.v_limits
    }

    pub fn source_bus(&self) -> BusId {
        self.source_bus
    }

    pub fn buses(&self) -> &[Bus] {
        &self.buses
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Index of the source bus in [`NetworkModel::buses`].
    pub fn source_index(&self) -> usize {
        self.source
    }

    pub fn bus_position(&self, id: BusId) -> Option<usize> {
        self.bus_index.get(&id).copied()
    }

    /// Bus indices at each end of branch `k`.
    pub fn branch_ends(&self, k: usize) -> (usize, usize) {
        self.ends[k]
    }

    /// Branch indices of the switchable branches, in switch-vector order.
    pub fn switchable(&self) -> &[usize] {
        &self.switchable
    }

    pub fn switch_count(&self) -> usize {
        self.switchable.len()
    }

    /// Closed flag per branch for a switch vector.
    pub fn closed_branches(&self, x: &SwitchVector) -> Result<Vec<bool>, SimError> {
        if x.len() != self.switchable.len() {
            return Err(SimError::DimensionMismatch {
                expected: self.switchable.len(),
                got: x.len(),
            });
        }
        let mut closed: Vec<bool> = self.branches.iter().map(|b| !b.switchable).collect();
        for (i, &k) in self.switchable.iter().enumerate() {
            closed[k] = x.is_closed(i);
        }
        Ok(closed)
    }

    /// Same network with every load multiplied by `factor`.
    pub fn scaled_loads(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for bus in &mut out.buses {
            bus.p_kw *= factor;
            bus.q_kvar *= factor;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("switch vector has {got} entries but the network has {expected} switches")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("power flow requires a radial, connected configuration")]
    NotRadial,
    #[error("violation checks require a converged power flow")]
    Unconverged,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bus(id: BusId) -> Bus {
        Bus { id, p_kw: 0.0, q_kvar: 0.0 }
    }

    fn branch(id: BranchId, from: BusId, to: BusId) -> Branch {
        Branch {
            id,
            from,
            to,
            r_pu: 0.01,
            x_pu: 0.01,
            rating_pu: 1.0,
            switchable: false,
        }
    }

    fn build(buses: Vec<Bus>, branches: Vec<Branch>) -> Result<NetworkModel, NetworkError> {
        NetworkModel::new(
            Base { s_base_kva: 1000.0, v_base_kv: 12.66 },
            VoltageLimits::default(),
            1,
            buses,
            branches,
        )
    }

    #[test]
    fn validation_errors_are_specific() {
        assert_eq!(
            build(vec![bus(1), bus(1)], vec![]).unwrap_err(),
            NetworkError::DuplicateBus(1)
        );
        assert_eq!(
            build(vec![bus(1), bus(2)], vec![branch(7, 1, 2), branch(7, 1, 2)]).unwrap_err(),
            NetworkError::DuplicateBranch(7)
        );
        assert_eq!(
            build(vec![bus(1)], vec![branch(3, 1, 9)]).unwrap_err(),
            NetworkError::UnknownBus { branch: 3, bus: 9 }
        );
        assert_eq!(
            build(vec![bus(2)], vec![]).unwrap_err(),
            NetworkError::UnknownSourceBus(1)
        );
        assert_eq!(
            build(vec![bus(1)], vec![branch(3, 1, 1)]).unwrap_err(),
            NetworkError::SelfLoop(3)
        );
        let mut bad = branch(4, 1, 2);
        bad.r_pu = -0.1;
        assert_eq!(
            build(vec![bus(1), bus(2)], vec![bad]).unwrap_err(),
            NetworkError::InvalidImpedance(4)
        );
        let mut bad = branch(5, 1, 2);
        bad.rating_pu = 0.0;
        assert_eq!(
            build(vec![bus(1), bus(2)], vec![bad]).unwrap_err(),
            NetworkError::InvalidRating(5)
        );
    }

    #[test]
    fn switch_vector_maps_onto_branches() {
        let mut tie = branch(3, 2, 3);
        tie.switchable = true;
        let net = build(
            vec![bus(1), bus(2), bus(3)],
            vec![branch(1, 1, 2), tie, branch(2, 1, 3)],
        )
        .unwrap();
        assert_eq!(net.switchable(), &[1]);
        let closed = net.closed_branches(&SwitchVector::all_open(1)).unwrap();
        assert_eq!(closed, vec![true, false, true]);
        assert!(matches!(
            net.closed_branches(&SwitchVector::all_open(2)),
            Err(SimError::DimensionMismatch { expected: 1, got: 2 })
        ));
    }
}
