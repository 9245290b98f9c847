//! Greedy deletion. Given a family of vertex sets grouped by size `s` and an
//! input set `I`, find a small `X ⊆ I` such that for every `s` and every
//! `s' ∈ [1, s]` the number of members meeting `I ∖ X` in at least `s'`
//! vertices is at most the threshold `τ(s, s')`.
//!
//! The greedy loop repeatedly takes the first violated `(s, s')` in
//! lexicographic order and removes the vertex of `I ∖ X` lying in the most
//! violating members, breaking ties towards the lowest id. If that overruns
//! the budget and the instance is small, every `X` of at most budget size is
//! tried in order of size and then lexicographically. Success is always
//! re-checked by a from-scratch recount.

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::generators::binomial;
use crate::hypergraph::VertexSet;

/// Exhaustive search is attempted when at most this many candidate sets
/// `X` exist.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub s: usize,
    pub sprime: usize,
    pub count: usize,
    pub threshold: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error(
    "deletion failed at (s, s') = ({}, {}): {} members > {} with budget {budget}",
    violation.s, violation.sprime, violation.count, violation.threshold
)]
pub struct DeletionFailure {
    /// A violation left after the greedy loop spent its budget.
    pub violation: Violation,
    pub budget: usize,
    /// Whether every `X` of at most `budget` elements was tried and failed.
    pub exhaustive_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeletionMethod {
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeletionOutcome {
    pub removed: VertexSet,
    pub method: DeletionMethod,
}

/// Number of members of each size.
fn size_counts(family: &[Vec<usize>]) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for member in family {
        *counts.entry(member.len()).or_insert(0) += 1;
    }
    counts
}

/// Independent recount: the first violated `(s, s')` for `rest`, if any.
pub fn first_violation<F: Fn(usize, usize) -> f64>(
    family: &[Vec<usize>],
    rest: &VertexSet,
    thresholds: &F,
) -> Option<Violation> {
    let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for member in family {
        let hits = member.iter().filter(|&&v| rest.contains(v)).count();
        let row = by_size
            .entry(member.len())
            .or_insert_with(|| vec![0; member.len() + 1]);
        row[hits] += 1;
    }
    for (&s, row) in &by_size {
        for sprime in 1..=s {
            let count: usize = row[sprime..].iter().sum();
            let threshold = thresholds(s, sprime);
            if count as f64 > threshold {
                return Some(Violation {
                    s,
                    sprime,
                    count,
                    threshold,
                });
            }
        }
    }
    None
}

/// Thresholds `T · |S_s| · (m/N)^{s'}` with `N = i.universe()`.
pub fn deletion_prune(
    family: &[Vec<usize>],
    i: &VertexSet,
    m: usize,
    t_del: f64,
    budget: usize,
) -> Result<DeletionOutcome, DeletionFailure> {
    let q = m as f64 / i.universe() as f64;
    let sizes = size_counts(family);
    let thresholds =
        move |s: usize, sprime: usize| t_del * sizes[&s] as f64 * q.powi(sprime as i32);
    deletion_prune_with(family, i, &thresholds, budget)
}

pub fn deletion_prune_with<F: Fn(usize, usize) -> f64>(
    family: &[Vec<usize>],
    i: &VertexSet,
    thresholds: &F,
    budget: usize,
) -> Result<DeletionOutcome, DeletionFailure> {
    let n = i.universe();
    // Only members meeting I can ever be counted.
    let members: Vec<&Vec<usize>> = family
        .iter()
        .filter(|m| m.iter().any(|&v| i.contains(v)))
        .collect();
    let mut hits: Vec<usize> = members
        .iter()
        .map(|m| m.iter().filter(|&&v| i.contains(v)).count())
        .collect();
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, member) in members.iter().enumerate() {
        for &v in member.iter() {
            if i.contains(v) {
                incidence[v].push(idx);
            }
        }
    }
    let mut sizes: BTreeMap<usize, ()> = BTreeMap::new();
    for m in &members {
        sizes.insert(m.len(), ());
    }

    let mut rest = i.clone();
    let mut removed = VertexSet::empty(n);
    let violated = |hits: &[usize]| -> Option<(usize, usize)> {
        for &s in sizes.keys() {
            let mut row = vec![0usize; s + 1];
            for (idx, m) in members.iter().enumerate() {
                if m.len() == s {
                    row[hits[idx]] += 1;
                }
            }
            let mut tail = 0;
            let mut first = None;
            for sprime in (1..=s).rev() {
                tail += row[sprime];
                if tail as f64 > thresholds(s, sprime) {
                    first = Some(sprime);
                }
            }
            if let Some(sprime) = first {
                return Some((s, sprime));
            }
        }
        None
    };

    while let Some((s, sprime)) = violated(&hits) {
        if removed.len() >= budget {
            break;
        }
        let mut score = vec![0usize; n];
        for (idx, m) in members.iter().enumerate() {
            if m.len() == s && hits[idx] >= sprime {
                for &v in m.iter() {
                    if rest.contains(v) {
                        score[v] += 1;
                    }
                }
            }
        }
        // max_by_key keeps the last maximum, so scan ids in reverse.
        let best = rest
            .iter()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .max_by_key(|&v| score[v])
            .expect("a violation implies a covering vertex");
        rest.remove(best);
        removed.insert(best);
        for &idx in &incidence[best] {
            hits[idx] -= 1;
        }
    }

    if first_violation(family, &rest, thresholds).is_none() {
        return Ok(DeletionOutcome {
            removed,
            method: DeletionMethod::Greedy,
        });
    }
    let violation = first_violation(family, &rest, thresholds).expect("checked above");

    let ground = i.to_vec();
    let candidates: u128 = (0..=budget.min(ground.len()))
        .map(|j| binomial(ground.len(), j))
        .fold(0u128, |a, b| a.saturating_add(b));
    if candidates > EXHAUSTIVE_LIMIT {
        return Err(DeletionFailure {
            violation,
            budget,
            exhaustive_checked: false,
        });
    }
    for size in 0..=budget.min(ground.len()) {
        for x in ground.iter().copied().combinations(size) {
            let x = VertexSet::from_ids(n, x);
            if first_violation(family, &i.difference(&x), thresholds).is_none() {
                return Ok(DeletionOutcome {
                    removed: x,
                    method: DeletionMethod::Exhaustive,
                });
            }
        }
    }
    Err(DeletionFailure {
        violation,
        budget,
        exhaustive_checked: true,
    })
}
