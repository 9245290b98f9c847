//! The container function `f_m`: a cascade of degree thresholds
//!
//! ```text
//! D_k    = V(H)
//! D_{k'} = { v ∈ D_{k'+1} : deg_{k'}(v, D_{k'+1}, F_{k'}) < t_{k'} / N }   (k' = k−1 … 1)
//! D_0    = { v ∈ D_1     : deg_{H[D_1]}(v)               < t_0 / N }
//! ```
//!
//! The container is `D_0`. A vertex of degree zero is never pruned, which
//! only matters when a threshold is itself zero (i.e. `e(H) = 0`).

use super::fingerprint::Fingerprint;
use super::schedule::ConstantSchedule;
use crate::hypergraph::{Hypergraph, VertexSet};

#[derive(Debug, Clone, PartialEq)]
pub struct ContainerTrace {
    /// `levels[k'] = D_{k'}` for `k' = 0..=k`.
    pub levels: Vec<VertexSet>,
    /// `e(D_{k'})` for `k' = 0..=k`.
    pub level_edges: Vec<usize>,
}

impl ContainerTrace {
    pub fn container(&self) -> &VertexSet {
        &self.levels[0]
    }

    pub fn container_edges(&self) -> usize {
        self.level_edges[0]
    }

    pub fn level(&self, level: usize) -> &VertexSet {
        &self.levels[level]
    }

    /// `D_0 ⊆ D_1 ⊆ … ⊆ D_k`.
    pub fn is_nested(&self) -> bool {
        self.levels.windows(2).all(|w| w[0].is_subset(&w[1]))
    }
}

/// One cascade step: the members of `parent` whose `deg_{k'}` against `f`
/// stays below `threshold / N`.
pub fn prune_level(
    h: &Hypergraph,
    parent: &VertexSet,
    f: &VertexSet,
    level: usize,
    threshold: f64,
) -> VertexSet {
    let n = h.vertex_count() as f64;
    let mut kept = parent.clone();
    for v in parent.iter() {
        let deg = h.deg_at_least(v, level, parent, f);
        if deg > 0 && deg as f64 * n >= threshold {
            kept.remove(v);
        }
    }
    kept
}

/// Runs the cascade with explicit thresholds `t_0, …, t_{k−1}` and tuple
/// `F_1, …, F_{k−1}`.
pub fn cascade(h: &Hypergraph, tuple: &[VertexSet], thresholds: &[f64]) -> ContainerTrace {
    let k = h.uniformity();
    assert_eq!(tuple.len() + 1, k, "tuple must have k-1 entries");
    assert_eq!(thresholds.len(), k, "need thresholds t_0..t_(k-1)");
    let n = h.vertex_count();
    let mut levels = vec![VertexSet::empty(n); k + 1];
    levels[k] = h.all_vertices();
    let empty = VertexSet::empty(n);
    for level in (0..k).rev() {
        let f = if level == 0 {
            &empty
        } else {
            &tuple[level - 1]
        };
        levels[level] = prune_level(h, &levels[level + 1], f, level, thresholds[level]);
    }
    let level_edges = levels.iter().map(|d| h.induced_edge_count(d)).collect();
    ContainerTrace {
        levels,
        level_edges,
    }
}

/// `f_m(F_1, …, F_{k−1})` under `schedule`; a pure function of its
/// arguments.
pub fn compute_container(
    h: &Hypergraph,
    fp: &Fingerprint,
    schedule: &ConstantSchedule,
) -> ContainerTrace {
    cascade(h, &fp.tuple, &schedule.cascade_thresholds(h, fp.m))
}
