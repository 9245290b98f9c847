//! Saturating sets. `W` is `(k', α, t)`-saturating for `D` when at least
//! `αN` vertices `v ∈ D` have `deg_{k'}(v, D, W) ≥ t/N`.

use rand::Rng;
use thiserror::Error;

use super::fingerprint::fingerprint_size;
use super::schedule::ConstantSchedule;
use crate::hypergraph::{Hypergraph, VertexSet};

pub const DEFAULT_MAX_RETRIES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SaturationError {
    #[error("level {level}: e_k'(D, I') = {edges} is below the guard {guard}")]
    PreconditionViolated {
        level: usize,
        edges: usize,
        guard: f64,
    },
    #[error("level {level}: no saturating subsample in {attempts} attempts")]
    SaturationFailure { level: usize, attempts: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturatingSet {
    pub w: VertexSet,
    /// Number of vertices of `D` reaching the degree threshold.
    pub count: usize,
    /// Subsamples drawn, including the accepted one.
    pub attempts: usize,
}

/// Exact test; returns the verdict and the number of qualifying vertices.
pub fn is_saturating(
    h: &Hypergraph,
    w: &VertexSet,
    d: &VertexSet,
    level: usize,
    alpha: f64,
    t: f64,
) -> (bool, usize) {
    let n = h.vertex_count() as f64;
    let count = d
        .iter()
        .filter(|&v| h.deg_at_least(v, level, d, w) as f64 * n >= t)
        .count();
    (count as f64 >= alpha * n, count)
}

/// Independent `Bernoulli(ξ/2)` subsamples of `I'` until one of size at
/// most `⌈ξm⌉` saturates `D` at `(k', α_{k'}, t_{k'}(m))`.
#[allow(clippy::too_many_arguments)]
pub fn find_saturating_set<R: Rng + ?Sized>(
    h: &Hypergraph,
    i_prime: &VertexSet,
    d: &VertexSet,
    level: usize,
    schedule: &ConstantSchedule,
    m: usize,
    max_retries: usize,
    rng: &mut R,
) -> Result<SaturatingSet, SaturationError> {
    let edges = h.e_at_least(level, d, i_prime);
    let guard = schedule.guard(h, level, m);
    if edges == 0 || (edges as f64) < guard {
        return Err(SaturationError::PreconditionViolated {
            level,
            edges,
            guard,
        });
    }
    let xi = schedule.xi(level);
    let p = (xi / 2.0).min(1.0);
    let cap = fingerprint_size(xi, m);
    let alpha = schedule.alpha(level);
    let t = schedule.threshold(h, level, m);
    let members = i_prime.to_vec();
    for attempt in 1..=max_retries {
        let mut w = VertexSet::empty(h.vertex_count());
        for &v in &members {
            if rng.gen_bool(p) {
                w.insert(v);
            }
        }
        if w.len() > cap {
            continue;
        }
        let (ok, count) = is_saturating(h, &w, d, level, alpha, t);
        if ok {
            return Ok(SaturatingSet {
                w,
                count,
                attempts: attempt,
            });
        }
    }
    Err(SaturationError::SaturationFailure {
        level,
        attempts: max_retries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::containers::schedule::{derive_schedule, ScheduleMode, ScheduleOverrides};
    use crate::generators::ap_hypergraph;
    use crate::hypergraph::tests::{a5, arb_hypergraph};
    use crate::seeds::stream;
    use proptest::prelude::*;

    #[test]
    fn empty_d_is_never_saturating() {
        let h = a5();
        let w = h.all_vertices();
        assert_eq!(
            is_saturating(&h, &w, &VertexSet::empty(5), 2, 0.01, 1.0),
            (false, 0)
        );
    }

    #[test]
    fn a5_examples() {
        let h = a5();
        let w = VertexSet::from_ids(5, [2, 3, 4]);
        let v = h.all_vertices();
        assert_eq!(is_saturating(&h, &w, &v, 2, 1.0, 5.0), (true, 5));
        assert_eq!(is_saturating(&h, &w, &v, 2, 1.0, 6.0), (false, 0));
    }

    fn a9_schedule() -> ConstantSchedule {
        let mut o = ScheduleOverrides::default();
        ScheduleOverrides::uniform(&mut o.alpha, 3, 0.1);
        ScheduleOverrides::uniform(&mut o.xi, 3, 0.9);
        derive_schedule(3, 0.5, 1.0, ScheduleMode::Empirical, &o).unwrap()
    }

    #[test]
    fn degenerate_inputs_violate_precondition() {
        let h = ap_hypergraph(9, 3).unwrap();
        let s = a9_schedule();
        let err = find_saturating_set(
            &h,
            &VertexSet::empty(9),
            &VertexSet::empty(9),
            2,
            &s,
            9,
            64,
            &mut stream(1, "sat", 0),
        )
        .unwrap_err();
        assert!(matches!(err, SaturationError::PreconditionViolated { .. }));
    }

    #[test]
    fn a9_search_meets_postcondition_and_is_deterministic() {
        let h = ap_hypergraph(9, 3).unwrap();
        let s = a9_schedule();
        let v = h.all_vertices();
        let run = |seed| find_saturating_set(&h, &v, &v, 2, &s, 9, 64, &mut stream(seed, "sat", 0));
        let found = run(3).expect("saturating subsample");
        assert!(found.w.is_subset(&v));
        assert!(found.w.len() <= fingerprint_size(s.xi(2), 9));
        let (ok, count) = is_saturating(&h, &found.w, &v, 2, s.alpha(2), s.threshold(&h, 2, 9));
        assert!(ok);
        assert_eq!(count, found.count);
        assert_eq!(run(3).unwrap(), found);
    }

    #[test]
    fn zero_retries_fail() {
        let h = ap_hypergraph(9, 3).unwrap();
        let v = h.all_vertices();
        let err = find_saturating_set(&h, &v, &v, 2, &a9_schedule(), 9, 0, &mut stream(1, "s", 0))
            .unwrap_err();
        assert_eq!(
            err,
            SaturationError::SaturationFailure {
                level: 2,
                attempts: 0
            }
        );
    }

    proptest! {
        #[test]
        fn agrees_with_definition(
            h in arb_hypergraph(),
            w_ids in proptest::collection::vec(0usize..10, 0..8),
            d_ids in proptest::collection::vec(0usize..10, 0..10),
            level in 0usize..4,
            alpha in 0.01f64..1.0,
            t in 0.0f64..40.0,
        ) {
            let n = h.vertex_count();
            let w = VertexSet::from_ids(n, w_ids.iter().map(|&v| v % n));
            let d = VertexSet::from_ids(n, d_ids.iter().map(|&v| v % n));
            let ambient = d.union(&w);
            let count = d.iter().filter(|&v| {
                let deg = h.edges()
                    .filter(|e| e.contains(&v) && e.iter().all(|&u| ambient.contains(u)))
                    .filter(|e| e.iter().filter(|&&u| u != v && w.contains(u)).count() >= level)
                    .count();
                deg as f64 >= t / n as f64
            }).count();
            let (ok, got) = is_saturating(&h, &w, &d, level, alpha, t);
            prop_assert_eq!(got, count);
            prop_assert_eq!(ok, count as f64 >= alpha * n as f64);
        }
    }
}
