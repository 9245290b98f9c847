//! Canonical hypergraph families and seeded random instances.
//!
//! Numbering conventions are fixed so that hand-computed values stay valid:
//! - triangle hypergraph `T_n`: the K_n edge `{a, b}` (a < b) gets its rank in
//!   lexicographic order, so `{0,1}=0, {0,2}=1, ...`;
//! - progression hypergraph `A_n`: the integer `i` in `{1..n}` is vertex `i - 1`;
//! - copy hypergraphs: the k-subset of `[n]` gets its lexicographic rank.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, VertexSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("pattern has {pattern} vertices but only {n} are available")]
    PatternTooLarge { pattern: usize, n: usize },
    #[error("pattern has no edges")]
    EmptyPattern,
    #[error("requested {requested} edges but only {available} k-subsets exist")]
    TooManyEdges { requested: usize, available: u128 },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) / (j + 1) stays integral at every step
        acc = match acc.checked_mul((n - j) as u128) {
            Some(x) => x / (j as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Lexicographic ranks of all k-subsets of `[n]`.
fn subset_ranks(n: usize, k: usize) -> HashMap<Vec<usize>, usize> {
    (0..n)
        .combinations(k)
        .enumerate()
        .map(|(rank, c)| (c, rank))
        .collect()
}

/// `T_n`: vertices are the edges of K_n, hyperedges are triangles.
pub fn triangle_hypergraph(n: usize) -> Result<Hypergraph, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::InvalidSize(format!(
            "triangle hypergraph needs n >= 3, got {n}"
        )));
    }
    let ranks = subset_ranks(n, 2);
    let edges = (0..n)
        .tuple_combinations()
        .map(|(a, b, c)| [ranks[&vec![a, b]], ranks[&vec![a, c]], ranks[&vec![b, c]]]);
    Ok(Hypergraph::build(3, n * (n - 1) / 2, edges)?)
}

/// `A_n` generalised to `len`-term progressions with positive difference.
pub fn ap_hypergraph(n: usize, len: usize) -> Result<Hypergraph, GeneratorError> {
    if len < 3 || n < 1 {
        return Err(GeneratorError::InvalidSize(format!(
            "progression hypergraph needs n >= 1 and len >= 3, got n={n} len={len}"
        )));
    }
    let mut edges = Vec::new();
    for d in 1..n {
        for start in 0..n {
            let last = start + d * (len - 1);
            if last >= n {
                break;
            }
            edges.push((0..len).map(|i| start + i * d).collect::<Vec<_>>());
        }
    }
    Ok(Hypergraph::build(len, n, edges)?)
}

/// The `e(pattern)`-uniform hypergraph whose vertices are the k-subsets of
/// `[n]` and whose edges are the distinct copies of `pattern` in the complete
/// k-graph on `[n]`, each copy taken as a set of k-subsets.
pub fn h_copy_hypergraph(pattern: &Hypergraph, n: usize) -> Result<Hypergraph, GeneratorError> {
    if pattern.edge_count() == 0 {
        return Err(GeneratorError::EmptyPattern);
    }
    if pattern.vertex_count() > n {
        return Err(GeneratorError::PatternTooLarge {
            pattern: pattern.vertex_count(),
            n,
        });
    }
    let k = pattern.uniformity();
    let ranks = subset_ranks(n, k);
    let support = pattern.support();
    let mut position = vec![usize::MAX; pattern.vertex_count()];
    for (i, &v) in support.iter().enumerate() {
        position[v] = i;
    }

    let mut copies: BTreeSet<Vec<usize>> = BTreeSet::new();
    for image in (0..n).permutations(support.len()) {
        let mut copy: Vec<usize> = pattern
            .edges()
            .map(|e| {
                let mut mapped: Vec<usize> = e.iter().map(|&v| image[position[v]]).collect();
                mapped.sort_unstable();
                ranks[&mapped]
            })
            .collect();
        copy.sort_unstable();
        copies.insert(copy);
    }
    Ok(Hypergraph::build(
        pattern.edge_count(),
        ranks.len(),
        copies,
    )?)
}

/// Uniform random `m`-subset of `[n]`.
pub fn sample_uniform_mset<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<VertexSet, GeneratorError> {
    if m > n {
        return Err(GeneratorError::InvalidSize(format!(
            "cannot draw {m} of {n} vertices"
        )));
    }
    Ok(VertexSet::from_ids(n, index::sample(rng, n, m)))
}

/// Each vertex kept independently with probability `p`.
pub fn sample_binomial_set<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<VertexSet, GeneratorError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GeneratorError::InvalidProbability(p));
    }
    Ok(VertexSet::from_ids(n, (0..n).filter(|_| rng.gen_bool(p))))
}

/// The `rank`-th k-subset of `[n]` in lexicographic order.
fn unrank_subset(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for remaining in (1..=k).rev() {
        loop {
            let block = binomial(n - next - 1, remaining - 1);
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// `edge_count` distinct k-subsets of `[n]`, uniformly without replacement.
pub fn random_k_graph<R: Rng + ?Sized>(
    k: usize,
    n: usize,
    edge_count: usize,
    rng: &mut R,
) -> Result<Hypergraph, GeneratorError> {
    let available = binomial(n, k);
    if edge_count as u128 > available {
        return Err(GeneratorError::TooManyEdges {
            requested: edge_count,
            available,
        });
    }
    let edges: Vec<Vec<usize>> = if available <= usize::MAX as u128 / 2 {
        index::sample(rng, available as usize, edge_count)
            .into_iter()
            .map(|r| unrank_subset(n, k, r as u128))
            .collect()
    } else {
        let mut seen = HashSet::new();
        while seen.len() < edge_count {
            let mut e: Vec<usize> = index::sample(rng, n, k).into_vec();
            e.sort_unstable();
            seen.insert(e);
        }
        seen.into_iter().collect()
    };
    Ok(Hypergraph::build(k, n, edges)?)
}
