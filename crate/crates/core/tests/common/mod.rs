//! Test-only oracles. Nothing here calls into the code paths it checks:
//! the reference filter uses raw comparisons instead of `compare`, and the
//! straight-line evaluator solves the feeder with a path-impedance fixed
//! point instead of the sweep.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::PathBuf;

use mads_reconfig::dominance::Metrics;
use mads_reconfig::filter::{EntryId, FilterDecision};
use mads_reconfig::mads::{EvalError, Evaluator};
use mads_reconfig::sim::NetworkModel;
use mads_reconfig::SwitchVector;
use num_complex::Complex64;

pub fn network_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("networks").join(name)
}

pub fn m(f: f64, h: f64) -> Metrics {
    Metrics::new(f, h).unwrap()
}

/// Quadratic re-scan archive applying the update rules literally.
#[derive(Debug, Default, Clone)]
pub struct ReferenceFilter {
    pub entries: Vec<(EntryId, f64, f64)>,
    next_id: EntryId,
}

impl ReferenceFilter {
    pub fn insert(&mut self, fa: f64, ha: f64) -> FilterDecision {
        if let Some(e) = self.entries.iter().find(|e| e.1 == fa && e.2 == ha) {
            return FilterDecision::RejectedDuplicate(e.0);
        }
        if let Some(e) = self
            .entries
            .iter()
            .find(|e| e.1 <= fa && e.2 <= ha && (e.1 < fa || e.2 < ha))
        {
            return FilterDecision::Rejected(e.0);
        }
        let removed: Vec<EntryId> = self
            .entries
            .iter()
            .filter(|e| fa <= e.1 && ha <= e.2)
            .map(|e| e.0)
            .collect();
        self.entries.retain(|e| !removed.contains(&e.0));
        self.entries.push((self.next_id, fa, ha));
        self.next_id += 1;
        if removed.is_empty() {
            FilterDecision::AddedNonDominating
        } else {
            FilterDecision::AddedReplacing(removed)
        }
    }
}

/// Evaluator replaying a fixed metric sequence in call order.
pub struct ScriptedEvaluator {
    pub dimension: usize,
    pub script: Vec<Metrics>,
    pub calls: usize,
}

impl Evaluator for ScriptedEvaluator {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&mut self, _: &SwitchVector) -> Result<Metrics, EvalError> {
        let out = self
            .script
            .get(self.calls)
            .copied()
            .ok_or("script exhausted")?;
        self.calls += 1;
        Ok(out)
    }
}

/// The eight candidate metrics of the filter-evolution narrative.
pub fn narrative_metrics() -> Vec<Metrics> {
    vec![
        m(120.0, 0.8),
        m(100.0, 1.2),
        m(95.0, 0.6),
        m(90.0, 0.9),
        m(98.0, 0.4),
        m(105.0, 0.7),
        m(85.0, 0.6),
        m(98.0, 0.3),
    ]
}

/// Receiving-end voltage magnitude and loss (p.u.) of a single line with
/// series impedance `r + jx` from a 1.0 p.u. source to a constant load
/// `p + jq`, from the closed-form biquadratic
/// `|V|^4 + (2(rp + xq) - 1)|V|^2 + |Z|^2 |S|^2 = 0` (high-voltage root).
pub fn single_line_oracle(r: f64, x: f64, p: f64, q: f64) -> (f64, f64) {
    let b = 2.0 * (r * p + x * q) - 1.0;
    let c = (r * r + x * x) * (p * p + q * q);
    let v2 = (-b + (b * b - 4.0 * c).sqrt()) / 2.0;
    let current2 = (p * p + q * q) / v2;
    (v2.sqrt(), r * current2)
}

/// Feeder evaluation written independently of the library: BFS topology,
/// and a fixed point `V = 1 - Zpath * conj(S / V)` where `Zpath[i][j]` is
/// the impedance shared by the source paths of buses `i` and `j`.
pub struct StraightLineEvaluator<'a> {
    pub network: &'a NetworkModel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StraightLineResult {
    pub f_kw: f64,
    pub h: f64,
    pub radial: bool,
}

impl StraightLineEvaluator<'_> {
    pub fn evaluate(&self, x: &SwitchVector) -> StraightLineResult {
        let net = self.network;
        let nb = net.buses().len();
        let index = |id| net.buses().iter().position(|b| b.id == id).unwrap();
        let mut closed = Vec::new();
        let mut s = 0;
        for br in net.branches() {
            let on = if br.switchable {
                s += 1;
                x.bits()[s - 1]
            } else {
                true
            };
            if on {
                closed.push(br);
            }
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nb];
        for (k, br) in closed.iter().enumerate() {
            adj[index(br.from)].push((index(br.to), k));
            adj[index(br.to)].push((index(br.from), k));
        }
        // Components by BFS.
        let mut comp = vec![usize::MAX; nb];
        let mut n_comp = 0;
        for start in 0..nb {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            comp[start] = n_comp;
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = n_comp;
                        queue.push_back(v);
                    }
                }
            }
            n_comp += 1;
        }
        let src = index(net.source_bus());
        let islands = comp.iter().filter(|&&c| c != comp[src]).count();
        let loops = closed.len() + n_comp - nb;
        if islands + loops > 0 {
            return StraightLineResult {
                f_kw: f64::INFINITY,
                h: (islands + loops) as f64,
                radial: false,
            };
        }

        // Source path (list of closed-branch indices) for each bus.
        let mut path: Vec<Vec<usize>> = vec![Vec::new(); nb];
        let mut seen = vec![false; nb];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &(v, k) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    let mut p = path[u].clone();
                    p.push(k);
                    path[v] = p;
                    queue.push_back(v);
                }
            }
        }
        let z = |k: usize| Complex64::new(closed[k].r_pu, closed[k].x_pu);
        let mut zpath = vec![vec![Complex64::new(0.0, 0.0); nb]; nb];
        for i in 0..nb {
            for j in 0..nb {
                zpath[i][j] = path[i].iter().filter(|k| path[j].contains(k)).map(|&k| z(k)).sum();
            }
        }
        let sb = net.base().s_base_kva;
        let load: Vec<Complex64> =
            net.buses().iter().map(|b| Complex64::new(b.p_kw, b.q_kvar) / sb).collect();
        let mut v = vec![Complex64::new(1.0, 0.0); nb];
        for _ in 0..500 {
            let inj: Vec<Complex64> = (0..nb).map(|i| (load[i] / v[i]).conj()).collect();
            let next: Vec<Complex64> = (0..nb)
                .map(|i| Complex64::new(1.0, 0.0) - (0..nb).map(|j| zpath[i][j] * inj[j]).sum::<Complex64>())
                .collect();
            let change = next.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            v = next;
            if change < 1e-13 {
                break;
            }
        }
        let inj: Vec<Complex64> = (0..nb).map(|i| (load[i] / v[i]).conj()).collect();
        // Branch current = sum of injections of buses whose path uses it.
        let mut loss = 0.0;
        let mut thermal: f64 = 0.0;
        for (k, br) in closed.iter().enumerate() {
            let current: Complex64 = (0..nb).filter(|&j| path[j].contains(&k)).map(|j| inj[j]).sum();
            loss += br.r_pu * current.norm_sqr();
            thermal = thermal.max((current.norm() - br.rating_pu) / br.rating_pu);
        }
        let lim = net.v_limits();
        let voltage = v
            .iter()
            .map(|v| (lim.min - v.norm()).max(v.norm() - lim.max))
            .fold(0.0, f64::max);
        StraightLineResult {
            f_kw: loss * sb,
            h: voltage.max(thermal).max(0.0),
            radial: true,
        }
    }
}
