//! Janson quantities for uniformly random m-subsets, the `m₀` threshold, and
//! the edge-pair census behind the second-moment estimates.
//!
//! Pair sums run over *ordered* pairs `(e, e')` of distinct intersecting
//! edges. Everything real-valued is derived from exact integer pair counts.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JansonError {
    #[error("hypergraph has no vertices")]
    EmptyVertexSet,
    #[error("m = {m} is outside [0, {n}]")]
    InvalidM { m: usize, n: usize },
    #[error("B must be positive, got {0}")]
    InvalidB(f64),
    #[error("hypergraph has no edges")]
    NoEdges,
    #[error("no m in [1, {n}] satisfies delta(m) <= B mu(m)^2 / m")]
    NotFound { n: usize },
}

/// Exact edge-pair statistics indexed by union size `s ∈ [k, 2k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCensus {
    k: usize,
    n: usize,
    edge_count: usize,
    /// Distinct union sets `S_s`, sorted, at index `s - k`.
    union_sets: Vec<Vec<Vec<usize>>>,
    /// Ordered pairs of distinct intersecting edges with `|e ∪ e'| = s`.
    ordered_pairs: Vec<u64>,
}

fn intersection_profile(a: &[usize], b: &[usize]) -> (usize, Option<usize>) {
    // both sorted
    let (mut i, mut j, mut shared, mut first) = (0, 0, 0, None);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                first.get_or_insert(a[i]);
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    (shared, first)
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Builds the census. Intersecting pairs are found through the incidence
/// lists (each pair is charged to its smallest shared vertex); the `s = 2k`
/// level needs all disjoint pairs and costs `O(e(H)²)`.
pub fn pair_census(h: &Hypergraph) -> PairCensus {
    let k = h.uniformity();
    let levels = k + 1;

    // Per vertex: pair counts by union size, and (size, union set) found.
    type VertexShare = (Vec<u64>, Vec<(usize, Vec<usize>)>);
    let per_vertex: Vec<VertexShare> = (0..h.vertex_count())
        .into_par_iter()
        .map(|v| {
            let mut counts = vec![0u64; levels];
            let mut unions = Vec::new();
            let inc = h.incident(v);
            for &e in inc {
                for &f in inc {
                    if e == f {
                        continue;
                    }
                    let (shared, first) = intersection_profile(h.edge(e), h.edge(f));
                    if first != Some(v) {
                        continue;
                    }
                    let s = 2 * k - shared;
                    counts[s - k] += 1;
                    if e < f {
                        unions.push((s, sorted_union(h.edge(e), h.edge(f))));
                    }
                }
            }
            (counts, unions)
        })
        .collect();

    let mut ordered_pairs = vec![0u64; levels];
    let mut buckets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); levels];
    for (counts, unions) in per_vertex {
        for (slot, c) in ordered_pairs.iter_mut().zip(counts) {
            *slot += c;
        }
        for (s, u) in unions {
            buckets[s - k].insert(u);
        }
    }
    buckets[0] = h.edges().map(|e| e.to_vec()).collect();
    let edge_count = h.edge_count();
    let disjoint: BTreeSet<Vec<usize>> = (0..edge_count)
        .into_par_iter()
        .flat_map_iter(|e| {
            ((e + 1)..edge_count).filter_map(move |f| {
                let (shared, _) = intersection_profile(h.edge(e), h.edge(f));
                (shared == 0).then(|| sorted_union(h.edge(e), h.edge(f)))
            })
        })
        .collect();
    buckets[k] = disjoint;

    PairCensus {
        k,
        n: h.vertex_count(),
        edge_count,
        union_sets: buckets
            .into_iter()
            .map(|b| b.into_iter().collect())
            .collect(),
        ordered_pairs,
    }
}

impl PairCensus {
    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> std::ops::RangeInclusive<usize> {
        self.k..=2 * self.k
    }

    /// `S_s`, empty outside `[k, 2k]`.
    pub fn union_sets(&self, s: usize) -> &[Vec<usize>] {
        if self.sizes().contains(&s) {
            &self.union_sets[s - self.k]
        } else {
            &[]
        }
    }

    /// `|S_s|`.
    pub fn union_set_count(&self, s: usize) -> usize {
        self.union_sets(s).len()
    }

    pub fn ordered_pairs(&self, s: usize) -> u64 {
        if self.sizes().contains(&s) {
            self.ordered_pairs[s - self.k]
        } else {
            0
        }
    }

    pub fn total_intersecting_pairs(&self) -> u64 {
        self.ordered_pairs.iter().sum()
    }

    /// `Δ_H(m) = Σ_s (ordered pairs at s) · q^s`.
    pub fn delta(&self, m: usize) -> f64 {
        let q = m as f64 / self.n as f64;
        self.sizes()
            .map(|s| self.ordered_pairs(s) as f64 * q.powi(s as i32))
            .sum()
    }

    pub fn mu(&self, m: usize) -> f64 {
        self.edge_count as f64 * (m as f64 / self.n as f64).powi(self.k as i32)
    }

    /// `|S_s(Q, s')|`; `s' <= 0` counts all of `S_s`.
    pub fn count_meeting(&self, q: &VertexSet, s: usize, sprime: i64) -> usize {
        let sets = self.union_sets(s);
        if sprime <= 0 {
            return sets.len();
        }
        sets.iter()
            .filter(|set| set.iter().filter(|&&v| q.contains(v)).count() as i64 >= sprime)
            .count()
    }
}

fn check_m(h: &Hypergraph, m: usize) -> Result<(), JansonError> {
    if h.vertex_count() == 0 {
        return Err(JansonError::EmptyVertexSet);
    }
    if m > h.vertex_count() {
        return Err(JansonError::InvalidM {
            m,
            n: h.vertex_count(),
        });
    }
    Ok(())
}

/// `μ_H(m) = e(H)(m/N)^k`.
pub fn mu(h: &Hypergraph, m: usize) -> Result<f64, JansonError> {
    check_m(h, m)?;
    Ok(h.edge_count() as f64 * (m as f64 / h.vertex_count() as f64).powi(h.uniformity() as i32))
}

pub fn delta(h: &Hypergraph, m: usize) -> Result<f64, JansonError> {
    check_m(h, m)?;
    Ok(pair_census(h).delta(m))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JansonProfile {
    pub m: usize,
    pub n: usize,
    /// `m / N`.
    pub q: f64,
    pub mu: f64,
    pub delta: f64,
    /// `μ + Δ`.
    pub delta_hat: f64,
    /// `exp(-μ² / (2Δ̂))`, or 1 when `μ = 0`.
    pub bound: f64,
}

impl JansonProfile {
    pub fn from_census(census: &PairCensus, m: usize) -> Self {
        let mu = census.mu(m);
        let delta = census.delta(m);
        let delta_hat = mu + delta;
        let bound = if mu == 0.0 {
            1.0
        } else {
            (-mu * mu / (2.0 * delta_hat)).exp()
        };
        JansonProfile {
            m,
            n: census.n,
            q: m as f64 / census.n as f64,
            mu,
            delta,
            delta_hat,
            bound,
        }
    }

    /// `Δ(m)·m / μ(m)²`; infinite when `μ = 0`.
    pub fn ratio(&self) -> f64 {
        self.delta * self.m as f64 / (self.mu * self.mu)
    }
}

pub fn janson_bound(h: &Hypergraph, m: usize) -> Result<JansonProfile, JansonError> {
    check_m(h, m)?;
    Ok(JansonProfile::from_census(&pair_census(h), m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum M0Search {
    Linear,
    Binary,
    /// Binary search if a full scan confirms the predicate is monotone,
    /// linear otherwise.
    Audited,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M0Result {
    pub m0: usize,
    pub strategy: M0Search,
    pub monotone: Option<bool>,
}

fn m0_predicate(census: &PairCensus, b: f64, m: usize) -> bool {
    let mu = census.mu(m);
    census.delta(m) * m as f64 <= b * mu * mu
}

/// Is `m ↦ [Δ(m) ≤ B μ(m)²/m]` of the form false…false true…true on `[1, N]`?
pub fn m0_predicate_is_monotone(census: &PairCensus, b: f64) -> bool {
    let mut seen_true = false;
    for m in 1..=census.n {
        let ok = m0_predicate(census, b, m);
        if seen_true && !ok {
            return false;
        }
        seen_true |= ok;
    }
    true
}

/// Smallest `m ∈ [1, N]` with `Δ_H(m) ≤ B μ_H(m)² / m`.
pub fn find_m0_with(
    census: &PairCensus,
    b: f64,
    search: M0Search,
) -> Result<M0Result, JansonError> {
    if census.n == 0 {
        return Err(JansonError::EmptyVertexSet);
    }
    if b.is_nan() || b <= 0.0 {
        return Err(JansonError::InvalidB(b));
    }
    if census.edge_count == 0 {
        return Err(JansonError::NoEdges);
    }
    let n = census.n;
    let linear = || (1..=n).find(|&m| m0_predicate(census, b, m));
    let binary = || {
        if !m0_predicate(census, b, n) {
            return None;
        }
        let (mut lo, mut hi) = (1, n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if m0_predicate(census, b, mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    };
    let (found, strategy, monotone) = match search {
        M0Search::Linear => (linear(), M0Search::Linear, None),
        M0Search::Binary => (binary(), M0Search::Binary, None),
        M0Search::Audited => {
            if m0_predicate_is_monotone(census, b) {
                (binary(), M0Search::Binary, Some(true))
            } else {
                (linear(), M0Search::Linear, Some(false))
            }
        }
    };
    found
        .map(|m0| M0Result {
            m0,
            strategy,
            monotone,
        })
        .ok_or(JansonError::NotFound { n })
}

pub fn find_m0(h: &Hypergraph, b: f64) -> Result<usize, JansonError> {
    find_m0_with(&pair_census(h), b, M0Search::Audited).map(|r| r.m0)
}

/// `|S_s(Q, s')|` computed from a fresh census.
pub fn count_s_intersections(h: &Hypergraph, q: &VertexSet, s: usize, sprime: i64) -> usize {
    pair_census(h).count_meeting(q, s, sprime)
}

/// `|Λ_s(W, k')|`: ordered pairs `(e, e')`, `e ≠ e'`, `|e ∪ e'| = s`, both
/// meeting `W` in at least `k'` vertices and sharing a vertex of `W`.
pub fn count_lambda(h: &Hypergraph, w: &VertexSet, kprime: usize, s: usize) -> u64 {
    lambda_by_size(h, w, kprime)
        .into_iter()
        .find(|&(size, _)| size == s)
        .map_or(0, |(_, c)| c)
}

/// `(s, |Λ_s(W, k')|)` for every `s ∈ [k, 2k]`.
fn lambda_by_size(h: &Hypergraph, w: &VertexSet, kprime: usize) -> Vec<(usize, u64)> {
    let k = h.uniformity();
    let mut counts = vec![0u64; k + 1];
    let meets = |e: usize| h.edge(e).iter().filter(|&&v| w.contains(v)).count() >= kprime;
    for v in w.iter() {
        let inc = h.incident(v);
        for &e in inc.iter().filter(|&&e| meets(e)) {
            for &f in inc.iter().filter(|&&f| f != e && meets(f)) {
                // charge the pair to its smallest shared vertex inside W
                let first_shared_in_w = h
                    .edge(e)
                    .iter()
                    .find(|&&u| w.contains(u) && h.edge(f).contains(&u));
                if first_shared_in_w != Some(&v) {
                    continue;
                }
                let (shared, _) = intersection_profile(h.edge(e), h.edge(f));
                counts[k - shared] += 1;
            }
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (k + i, c))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceTerm {
    pub s: usize,
    pub lambda: u64,
    /// `ℓ(s) = s + 2k' − 2k`.
    pub shift: i64,
    /// `ℓ'(s) = s + 2k' + 1 − 2k`.
    pub shift_deg: i64,
    /// `T · |S_s| · q^{ℓ(s)}`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceDiagnostic {
    pub kprime: usize,
    /// One entry per `s ∈ [k+1, 2k−1]`.
    pub terms: Vec<VarianceTerm>,
    pub lambda_total: u64,
    /// `Σ_v deg_{k'}(v, V, W)²`.
    pub deg_square_sum: u64,
}

/// Second-moment proxies for `e_{k'}(D, W)`; `t_del` and `q` only feed the
/// bound-side column.
pub fn variance_diagnostic(
    h: &Hypergraph,
    census: &PairCensus,
    w: &VertexSet,
    kprime: usize,
    t_del: f64,
    q: f64,
) -> VarianceDiagnostic {
    let k = h.uniformity() as i64;
    let kp = kprime as i64;
    let lambdas = lambda_by_size(h, w, kprime);
    let terms: Vec<VarianceTerm> = lambdas
        .into_iter()
        .filter(|&(s, _)| s > h.uniformity() && s < 2 * h.uniformity())
        .map(|(s, lambda)| {
            let shift = s as i64 + 2 * kp - 2 * k;
            VarianceTerm {
                s,
                lambda,
                shift,
                shift_deg: shift + 1,
                bound: t_del * census.union_set_count(s) as f64 * q.powi(shift as i32),
            }
        })
        .collect();
    let all = h.all_vertices();
    let deg_square_sum = (0..h.vertex_count())
        .map(|v| (h.deg_at_least(v, kprime, &all, w) as u64).pow(2))
        .sum();
    VarianceDiagnostic {
        kprime,
        lambda_total: terms.iter().map(|t| t.lambda).sum(),
        terms,
        deg_square_sum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ap_hypergraph, triangle_hypergraph};
    use crate::hypergraph::tests::{a5, arb_hypergraph, t4};
    use proptest::prelude::*;

    /// Double loop over all ordered edge pairs.
    fn brute_pairs(h: &Hypergraph) -> Vec<u64> {
        let k = h.uniformity();
        let mut counts = vec![0u64; k + 1];
        for (i, e) in h.edges().enumerate() {
            for (j, f) in h.edges().enumerate() {
                let shared = e.iter().filter(|v| f.contains(v)).count();
                if i != j && shared > 0 {
                    counts[k - shared] += 1;
                }
            }
        }
        counts
    }

    fn brute_delta(h: &Hypergraph, m: usize) -> f64 {
        let k = h.uniformity();
        let q = m as f64 / h.vertex_count() as f64;
        brute_pairs(h)
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 * q.powi((k + i) as i32))
            .sum()
    }

    fn ints(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, xs.iter().map(|x| x - 1))
    }

    fn matching(pairs: usize) -> Hypergraph {
        Hypergraph::build(2, 2 * pairs, (0..pairs).map(|i| [2 * i, 2 * i + 1])).unwrap()
    }

    #[test]
    fn mu_examples() {
        let empty = Hypergraph::build(3, 4, Vec::<[usize; 3]>::new()).unwrap();
        assert_eq!(mu(&empty, 2).unwrap(), 0.0);
        assert!((mu(&t4(), 3).unwrap() - 0.5).abs() < 1e-15);
        assert!((mu(&a5(), 3).unwrap() - 0.864).abs() < 1e-12);
        let no_vertices = Hypergraph::build(3, 0, Vec::<[usize; 3]>::new()).unwrap();
        assert_eq!(mu(&no_vertices, 0), Err(JansonError::EmptyVertexSet));
        assert!(matches!(mu(&a5(), 6), Err(JansonError::InvalidM { .. })));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&matching(4), 5).unwrap(), 0.0);
        assert!((delta(&t4(), 3).unwrap() - 0.375).abs() < 1e-15);
        let expected = 8.0 * 0.6f64.powi(4) + 4.0 * 0.6f64.powi(5);
        assert!((delta(&a5(), 3).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.34784).abs() < 1e-12);
    }

    #[test]
    fn bound_examples() {
        let empty = Hypergraph::build(3, 4, Vec::<[usize; 3]>::new()).unwrap();
        assert_eq!(janson_bound(&empty, 3).unwrap().bound, 1.0);
        let t = janson_bound(&t4(), 3).unwrap();
        assert!((t.bound - (-0.25f64 / 1.75).exp()).abs() < 1e-12);
        assert!((t.bound - 0.86688).abs() < 1e-5);
        assert_eq!(t.delta_hat, t.mu + t.delta);
        let a = janson_bound(&a5(), 3).unwrap();
        let expected = (-0.864f64.powi(2) / (2.0 * (0.864 + 1.34784))).exp();
        assert!((a.bound - expected).abs() < 1e-12);
    }

    #[test]
    fn census_examples() {
        let a = pair_census(&a5());
        assert_eq!(a.ordered_pairs(4), 8);
        assert_eq!(a.ordered_pairs(5), 4);
        assert_eq!(a.union_set_count(3), 4);
        assert_eq!(a.union_set_count(4), 4);
        // both union-size-5 pairs give {1,...,5}
        assert_eq!(a.union_set_count(5), 1);
        assert_eq!(a.union_set_count(6), 0);

        let t = pair_census(&t4());
        assert_eq!(t.ordered_pairs(5), 12);
        assert_eq!(t.total_intersecting_pairs(), 12);

        let mat = pair_census(&matching(3));
        assert_eq!(mat.total_intersecting_pairs(), 0);
        assert_eq!(mat.union_set_count(4), 3);
    }

    #[test]
    fn s_intersection_examples() {
        let h = a5();
        assert_eq!(count_s_intersections(&h, &VertexSet::empty(5), 4, 1), 0);
        assert_eq!(count_s_intersections(&h, &h.all_vertices(), 4, 4), 4);
        assert_eq!(count_s_intersections(&h, &ints(5, &[3]), 5, 1), 1);
        assert_eq!(count_s_intersections(&h, &VertexSet::empty(5), 4, 0), 4);
        assert_eq!(count_s_intersections(&h, &VertexSet::empty(5), 4, -2), 4);
    }

    #[test]
    fn lambda_examples() {
        let h = a5();
        assert_eq!(count_lambda(&h, &VertexSet::empty(5), 1, 4), 0);
        assert_eq!(count_lambda(&h, &h.all_vertices(), 1, 4), 8);
        assert_eq!(count_lambda(&h, &ints(5, &[3]), 1, 5), 4);
    }

    #[test]
    fn variance_examples() {
        let h = a5();
        let census = pair_census(&h);
        let zero = variance_diagnostic(&h, &census, &VertexSet::empty(5), 1, 4.0, 0.5);
        assert_eq!(zero.lambda_total, 0);
        assert_eq!(zero.deg_square_sum, 0);
        assert!(zero.terms.iter().all(|t| t.lambda == 0));

        let full = variance_diagnostic(&h, &census, &h.all_vertices(), 1, 4.0, 0.5);
        assert_eq!(full.lambda_total, 12);
        let shifts: Vec<(usize, i64, i64)> = full
            .terms
            .iter()
            .map(|t| (t.s, t.shift, t.shift_deg))
            .collect();
        assert_eq!(shifts, vec![(4, 0, 1), (5, 1, 2)]);
        assert!((full.terms[1].bound - 4.0 * 1.0 * 0.5).abs() < 1e-15);

        let t = t4();
        let tc = pair_census(&t);
        let w = VertexSet::from_ids(6, [0, 1, 3]);
        assert_eq!(
            variance_diagnostic(&t, &tc, &w, 2, 1.0, 1.0).deg_square_sum,
            3
        );
    }

    /// Linear scan of the predicate, written against the direct definition.
    fn brute_m0(h: &Hypergraph, b: f64) -> Option<usize> {
        (1..=h.vertex_count()).find(|&m| {
            let mu = mu(h, m).unwrap();
            brute_delta(h, m) <= b * mu * mu / m as f64
        })
    }

    #[test]
    fn m0_examples() {
        assert_eq!(find_m0(&matching(4), 1.0), Ok(1));
        let a9 = ap_hypergraph(9, 3).unwrap();
        let census = pair_census(&a9);
        let lin = find_m0_with(&census, 10.0, M0Search::Linear).unwrap();
        let bin = find_m0_with(&census, 10.0, M0Search::Binary).unwrap();
        assert_eq!(lin.m0, bin.m0);
        assert_eq!(Some(lin.m0), brute_m0(&a9, 10.0));
        assert!(matches!(
            find_m0_with(&census, 1e-9, M0Search::Audited),
            Err(JansonError::NotFound { .. })
        ));
        assert_eq!(find_m0(&a9, -1.0), Err(JansonError::InvalidB(-1.0)));
    }

    #[test]
    fn ratio_is_non_increasing_on_triangle_families() {
        for n in 4..=8 {
            let census = pair_census(&triangle_hypergraph(n).unwrap());
            let ratios: Vec<f64> = (1..=census.vertex_count())
                .map(|m| JansonProfile::from_census(&census, m).ratio())
                .collect();
            for w in ratios.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12), "n={n}: {ratios:?}");
            }
            for b in [0.5, 1.0, 2.0, 10.0] {
                assert!(m0_predicate_is_monotone(&census, b));
            }
        }
    }

    #[test]
    fn sum_delta_and_scaling_inequalities() {
        let instances = [
            triangle_hypergraph(5).unwrap(),
            triangle_hypergraph(6).unwrap(),
            ap_hypergraph(12, 3).unwrap(),
            ap_hypergraph(15, 4).unwrap(),
        ];
        for h in &instances {
            let k = h.uniformity();
            let census = pair_census(h);
            let n = h.vertex_count();
            let b = JansonProfile::from_census(&census, n / 2).ratio().max(1.0);
            let m0 = find_m0_with(&census, b, M0Search::Audited).unwrap().m0;
            for x in 1..=n {
                let q = x as f64 / n as f64;
                let lhs: f64 = ((k + 1)..=(2 * k - 1))
                    .map(|s| census.union_set_count(s) as f64 * q.powi(s as i32))
                    .sum();
                assert!(lhs <= 3f64.powi(2 * k as i32) * census.delta(x) + 1e-12);
                if x >= m0 {
                    let mu = census.mu(x);
                    assert!(census.delta(x) <= b * mu * mu / x as f64 * (1.0 + 1e-12));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn census_matches_double_loop(h in arb_hypergraph()) {
            let census = pair_census(&h);
            let k = h.uniformity();
            let brute = brute_pairs(&h);
            for s in k..=2 * k {
                prop_assert_eq!(census.ordered_pairs(s), brute[s - k]);
                prop_assert_eq!(census.ordered_pairs(s) % 2, 0);
            }
            for m in 0..=h.vertex_count() {
                let (a, b) = (census.delta(m), brute_delta(&h, m));
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
            }
        }

        #[test]
        fn union_families_match_enumeration(h in arb_hypergraph()) {
            let census = pair_census(&h);
            let k = h.uniformity();
            let mut expected: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); k + 1];
            for e in h.edges() {
                for f in h.edges() {
                    let u = sorted_union(e, f);
                    expected[u.len() - k].insert(u);
                }
            }
            for s in k..=2 * k {
                let got: BTreeSet<Vec<usize>> = census.union_sets(s).iter().cloned().collect();
                prop_assert_eq!(&got, &expected[s - k]);
            }
        }

        #[test]
        fn lambda_matches_definition(h in arb_hypergraph(), bits in proptest::collection::vec(any::<bool>(), 10), kp in 1usize..3) {
            let n = h.vertex_count();
            let w = VertexSet::from_ids(n, (0..n).filter(|&i| bits[i]));
            let k = h.uniformity();
            for s in (k + 1)..(2 * k) {
                let mut expected = 0u64;
                for (i, e) in h.edges().enumerate() {
                    for (j, f) in h.edges().enumerate() {
                        let union = sorted_union(e, f);
                        let in_w = |x: &[usize]| x.iter().filter(|&&v| w.contains(v)).count();
                        let shared_in_w = e.iter().any(|v| f.contains(v) && w.contains(*v));
                        if i != j && union.len() == s && in_w(e) >= kp && in_w(f) >= kp && shared_in_w {
                            expected += 1;
                        }
                    }
                }
                prop_assert_eq!(count_lambda(&h, &w, kp, s), expected);
            }
        }
    }
}
