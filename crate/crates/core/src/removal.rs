//! Removability. `H` is `(s, r)`-removable when every `I` with `e(I) < s`
//! contains `X`, `|X| ≤ r`, with `I ∖ X` independent — i.e. the vertex
//! cover number of `H[I]` is at most `r`.
//!
//! Because the cover number is monotone under taking subsets and the
//! family `{I : e(I) < s}` is closed under subsets, it suffices to check
//! the inclusion-maximal members of that family. Both the pre-audit and the
//! per-trial check of the transference experiment rely on this.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::generators::{h_copy_hypergraph, sample_binomial_set, GeneratorError};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::janson::{pair_census, JansonProfile};
use crate::seeds::stream;

/// Exact search is used up to these sizes.
pub const EXACT_EDGE_LIMIT: usize = 10_000;
pub const EXACT_BUDGET_LIMIT: usize = 20;
/// Largest `|W|` (and `N` for the pre-audit) whose subsets are enumerated.
pub const ENUMERATION_BITS: usize = 18;
/// Random maximal subsets drawn per trial above the enumeration limit.
pub const SAMPLED_SUBSETS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RemovalError {
    #[error("no subgraph has more than k vertices")]
    NoValidSubgraph,
    #[error("pattern has {0} edges; at most 20 can be enumerated")]
    PatternTooLarge(usize),
    #[error("H is not ({s}, {r})-removable: {witness:?} needs more than {r} deletions")]
    PreAuditFailed {
        s: f64,
        r: usize,
        witness: Vec<usize>,
    },
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemovabilityReport {
    /// `e(H[I])`, the edge count the witness has to destroy.
    pub s: f64,
    pub r: usize,
    /// Sorted ids of `X`, when one of size `≤ r` was found.
    pub witness: Option<Vec<usize>>,
    /// True when the search was exhaustive: a present witness is minimum
    /// and an absent one proves no `X` of size `≤ r` exists.
    pub exact: bool,
}

/// Edges of `H[I]`, as vertex lists.
fn induced_edges(h: &Hypergraph, i: &VertexSet) -> Vec<Vec<usize>> {
    h.induced_edges(i)
        .into_iter()
        .map(|idx| h.edge(idx).to_vec())
        .collect()
}

/// Exact minimum vertex cover of size at most `limit`, if one exists.
/// Branches on the vertices of the first uncovered edge (lowest id first),
/// with iterative deepening and a disjoint-edges lower bound.
pub fn min_cover(edges: &[Vec<usize>], n: usize, limit: usize) -> Option<Vec<usize>> {
    fn lower_bound(edges: &[Vec<usize>], taken: &[bool], n: usize) -> usize {
        let mut used = vec![false; n];
        let mut count = 0;
        for e in edges {
            if e.iter().any(|&v| taken[v]) || e.iter().any(|&v| used[v]) {
                continue;
            }
            for &v in e {
                used[v] = true;
            }
            count += 1;
        }
        count
    }
    fn search(
        edges: &[Vec<usize>],
        taken: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        depth_left: usize,
        n: usize,
    ) -> bool {
        let Some(e) = edges.iter().find(|e| e.iter().all(|&v| !taken[v])) else {
            return true;
        };
        if depth_left == 0 || lower_bound(edges, taken, n) > depth_left {
            return false;
        }
        for &v in e {
            taken[v] = true;
            chosen.push(v);
            if search(edges, taken, chosen, depth_left - 1, n) {
                return true;
            }
            chosen.pop();
            taken[v] = false;
        }
        false
    }
    for size in 0..=limit {
        let mut taken = vec![false; n];
        let mut chosen = Vec::new();
        if search(edges, &mut taken, &mut chosen, size, n) {
            chosen.sort_unstable();
            return Some(chosen);
        }
    }
    None
}

/// Greedy cover: repeatedly take the vertex in most uncovered edges
/// (lowest id on ties).
pub fn greedy_cover(edges: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut covered = vec![false; edges.len()];
    let mut chosen = Vec::new();
    loop {
        let mut degree = vec![0usize; n];
        for (e, _) in edges.iter().zip(&covered).filter(|(_, &c)| !c) {
            for &v in e {
                degree[v] += 1;
            }
        }
        let Some((best, &d)) = degree.iter().enumerate().rev().max_by_key(|(_, &d)| d) else {
            break;
        };
        if d == 0 {
            break;
        }
        chosen.push(best);
        for (e, c) in edges.iter().zip(covered.iter_mut()) {
            if e.contains(&best) {
                *c = true;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

pub fn min_removal_witness(h: &Hypergraph, i: &VertexSet, r_budget: usize) -> RemovabilityReport {
    let edges = induced_edges(h, i);
    let s = edges.len() as f64;
    if edges.len() <= EXACT_EDGE_LIMIT && r_budget <= EXACT_BUDGET_LIMIT {
        RemovabilityReport {
            s,
            r: r_budget,
            witness: min_cover(&edges, h.vertex_count(), r_budget),
            exact: true,
        }
    } else {
        let cover = greedy_cover(&edges, h.vertex_count());
        RemovabilityReport {
            s,
            r: r_budget,
            witness: (cover.len() <= r_budget).then_some(cover),
            exact: false,
        }
    }
}

/// `m_k(H) = max (e(H') − 1)/(v(H') − k)` over subgraphs with `v(H') > k`;
/// subgraphs are enumerated as edge subsets with isolated vertices dropped.
pub fn m_k_density(pattern: &Hypergraph) -> Result<Ratio<i64>, RemovalError> {
    let e = pattern.edge_count();
    if e > 20 {
        return Err(RemovalError::PatternTooLarge(e));
    }
    let k = pattern.uniformity();
    let mut best: Option<Ratio<i64>> = None;
    for mask in 1u32..(1 << e) {
        let mut support = VertexSet::empty(pattern.vertex_count());
        for idx in (0..e).filter(|&idx| mask >> idx & 1 == 1) {
            for &v in pattern.edge(idx) {
                support.insert(v);
            }
        }
        let v = support.len();
        if v <= k {
            continue;
        }
        let ratio = Ratio::new(mask.count_ones() as i64 - 1, (v - k) as i64);
        if best.is_none_or(|b| ratio > b) {
            best = Some(ratio);
        }
    }
    best.ok_or(RemovalError::NoValidSubgraph)
}

/// Numerical check of `Δ(m₀) ≤ B μ(m₀)²/m₀` at `m₀ = n^{k − 1/m_k}` for the
/// copy hypergraph of `pattern` in `K_n^{(k)}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M0Relation {
    pub n: usize,
    pub density: f64,
    pub m0: f64,
    /// `m₀` rounded to an integer in `[1, N]`.
    pub m0_rounded: usize,
    /// Smallest `B` for which the relation holds at `m0_rounded`.
    pub b_required: f64,
}

pub fn m0_relation(pattern: &Hypergraph, n: usize) -> Result<M0Relation, RemovalError> {
    let density = m_k_density(pattern)?;
    let density = *density.numer() as f64 / *density.denom() as f64;
    let h = h_copy_hypergraph(pattern, n)?;
    let k = pattern.uniformity() as f64;
    let m0 = (n as f64).powf(k - 1.0 / density);
    let m0_rounded = (m0.round() as usize).clamp(1, h.vertex_count());
    let profile = JansonProfile::from_census(&pair_census(&h), m0_rounded);
    Ok(M0Relation {
        n,
        density,
        m0,
        m0_rounded,
        b_required: profile.ratio(),
    })
}

/// Edge masks over a local index of at most 64 vertices.
struct LocalHypergraph {
    members: Vec<usize>,
    edges: Vec<u64>,
    /// `by_vertex[j]`: masks of edges containing local vertex `j`.
    by_vertex: Vec<Vec<u64>>,
}

impl LocalHypergraph {
    fn new(h: &Hypergraph, w: &VertexSet) -> Self {
        let members = w.to_vec();
        assert!(members.len() <= 64);
        let mut local = vec![usize::MAX; h.vertex_count()];
        for (j, &v) in members.iter().enumerate() {
            local[v] = j;
        }
        let edges: Vec<u64> = h
            .induced_edges(w)
            .into_iter()
            .map(|idx| h.edge(idx).iter().fold(0u64, |m, &v| m | 1 << local[v]))
            .collect();
        let mut by_vertex = vec![Vec::new(); members.len()];
        for &mask in &edges {
            for (j, list) in by_vertex.iter_mut().enumerate() {
                if mask >> j & 1 == 1 {
                    list.push(mask);
                }
            }
        }
        LocalHypergraph {
            members,
            edges,
            by_vertex,
        }
    }

    fn edge_count(&self, mask: u64) -> usize {
        self.edges.iter().filter(|&&e| e & mask == e).count()
    }

    /// Edges gained by adding local vertex `j` to `mask`.
    fn gain(&self, mask: u64, j: usize) -> usize {
        let with = mask | 1 << j;
        self.by_vertex[j].iter().filter(|&&e| e & with == e).count()
    }

    fn to_global(&self, mask: u64) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&j| mask >> j & 1 == 1)
            .map(|j| self.members[j])
            .collect()
    }

    fn edges_of(&self, mask: u64) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .filter(|&&e| e & mask == e)
            .map(|&e| self.to_global(e))
            .collect()
    }

    /// Inclusion-maximal local masks with fewer than `s` edges.
    fn maximal_in_scope(&self, s: f64) -> Vec<u64> {
        let w = self.members.len();
        let mut counts = vec![0u32; 1 << w];
        let mut out = Vec::new();
        for mask in 1u64..(1 << w) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            counts[mask as usize] = counts[rest as usize] + self.gain(rest, low) as u32;
        }
        for mask in 0u64..(1 << w) {
            if (counts[mask as usize] as f64) >= s {
                continue;
            }
            let maximal = (0..w)
                .filter(|&j| mask >> j & 1 == 0)
                .all(|j| (counts[mask as usize] as usize + self.gain(mask, j)) as f64 >= s);
            if maximal {
                out.push(mask);
            }
        }
        out
    }

    /// A random maximal in-scope mask: add vertices in random order while
    /// the edge count stays below `s`.
    fn random_maximal<R: Rng + ?Sized>(&self, s: f64, rng: &mut R) -> u64 {
        let mut order: Vec<usize> = (0..self.members.len()).collect();
        order.shuffle(rng);
        let mut mask = 0u64;
        let mut edges = 0usize;
        for j in order {
            let g = self.gain(mask, j);
            if ((edges + g) as f64) < s {
                mask |= 1 << j;
                edges += g;
            }
        }
        debug_assert_eq!(edges, self.edge_count(mask));
        mask
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreAudit {
    pub s: f64,
    pub r: usize,
    /// Maximal sets `I` with `e(I) < s` that were checked.
    pub checked: usize,
    /// Largest cover number among them.
    pub max_cover: usize,
}

/// Verifies that `H` is `(s, r)`-removable by checking every maximal `I`
/// with `e(I) < s`. Needs `N ≤ 18`.
pub fn audit_removable(h: &Hypergraph, s: f64, r: usize) -> Result<PreAudit, RemovalError> {
    let n = h.vertex_count();
    if n > ENUMERATION_BITS {
        return Err(RemovalError::InstanceTooLarge(format!(
            "pre-audit enumerates all subsets; N = {n} exceeds {ENUMERATION_BITS}"
        )));
    }
    let local = LocalHypergraph::new(h, &h.all_vertices());
    let mut max_cover = 0;
    let maximal = local.maximal_in_scope(s);
    for &mask in &maximal {
        match min_cover(&local.edges_of(mask), n, r) {
            Some(cover) => max_cover = max_cover.max(cover.len()),
            None => {
                return Err(RemovalError::PreAuditFailed {
                    s,
                    r,
                    witness: local.to_global(mask),
                })
            }
        }
    }
    Ok(PreAudit {
        s,
        r,
        checked: maximal.len(),
        max_cover,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub w_size: usize,
    pub checked: usize,
    pub max_cover: usize,
    pub passed: bool,
    /// True when subsets were sampled rather than enumerated.
    pub sampled: bool,
    /// A subset of `W` with `e(I) < s` needing more than `r` deletions.
    pub exemplar: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferenceReport {
    pub gamma: f64,
    pub alpha: f64,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    pub audit: PreAudit,
    /// `γ α^k e(H) p^k`.
    pub s_threshold: f64,
    /// `⌊3 α N p⌋`.
    pub r_budget: usize,
    pub passed: usize,
    pub failed: usize,
    pub sampled_trials: usize,
    pub pass_fraction: f64,
    pub records: Vec<TrialRecord>,
}

/// Sparsified removability: `W ~ Bin(V, p)` and every `I ⊆ W` with
/// `e(I) < γ α^k e(H) p^k` must be made independent by deleting at most
/// `3 α N p` vertices.
pub fn transference_experiment(
    h: &Hypergraph,
    gamma: f64,
    alpha: f64,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<TransferenceReport, RemovalError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(RemovalError::InvalidParameter(format!(
            "p = {p} outside [0, 1]"
        )));
    }
    if !(gamma > 0.0 && alpha > 0.0) {
        return Err(RemovalError::InvalidParameter(
            "gamma and alpha must be positive".into(),
        ));
    }
    let n = h.vertex_count();
    let k = h.uniformity();
    let e = h.edge_count() as f64;
    let audit = audit_removable(h, gamma * e, (alpha * n as f64 + 1e-9).floor() as usize)?;
    let s_threshold = gamma * alpha.powi(k as i32) * e * p.powi(k as i32);
    let r_budget = (3.0 * alpha * n as f64 * p + 1e-9).floor() as usize;

    let records: Vec<TrialRecord> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, "transfer", trial);
            let w = sample_binomial_set(n, p, &mut rng).expect("p checked above");
            run_trial(h, &w, s_threshold, r_budget, trial, &mut rng)
        })
        .collect();
    let passed = records.iter().filter(|r| r.passed).count();
    Ok(TransferenceReport {
        gamma,
        alpha,
        p,
        trials,
        seed,
        audit,
        s_threshold,
        r_budget,
        passed,
        failed: trials - passed,
        sampled_trials: records.iter().filter(|r| r.sampled).count(),
        pass_fraction: if trials == 0 {
            1.0
        } else {
            passed as f64 / trials as f64
        },
        records,
    })
}

fn run_trial<R: Rng + ?Sized>(
    h: &Hypergraph,
    w: &VertexSet,
    s: f64,
    r: usize,
    trial: u64,
    rng: &mut R,
) -> TrialRecord {
    let n = h.vertex_count();
    let sampled = w.len() > ENUMERATION_BITS;
    let local = LocalHypergraph::new(h, w);
    let candidates: Vec<u64> = if sampled {
        let mut masks: Vec<u64> = (0..SAMPLED_SUBSETS)
            .map(|_| local.random_maximal(s, rng))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        masks
    } else {
        local.maximal_in_scope(s)
    };
    let mut max_cover = 0;
    let mut exemplar = None;
    for &mask in &candidates {
        match min_cover(&local.edges_of(mask), n, r) {
            Some(cover) => max_cover = max_cover.max(cover.len()),
            None => {
                max_cover = max_cover.max(r + 1);
                exemplar = Some(local.to_global(mask));
                break;
            }
        }
    }
    TrialRecord {
        trial,
        w_size: w.len(),
        checked: candidates.len(),
        max_cover,
        passed: exemplar.is_none(),
        sampled,
        exemplar,
    }
}
