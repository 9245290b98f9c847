//! Immutable k-uniform hypergraphs and the intersection-counting primitives
//! the rest of the crate is built on.
//!
//! Edges are kept in canonical form: each edge is a strictly increasing tuple
//! of vertex ids and the edge list is sorted lexicographically. Two
//! hypergraphs with the same edge sets are therefore bit-identical, which is
//! what [`Hypergraph::content_hash`] relies on.

mod edgelist;
mod vertex_set;

use std::collections::HashSet;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use edgelist::{parse_edge_list, read_edge_list, write_edge_list, EdgeListError};
pub use vertex_set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("uniformity must be at least 1, got {0}")]
    InvalidUniformity(usize),
    #[error("edge {index} has {found} distinct vertices, expected {expected}")]
    NonUniformEdge {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error(
        "edge {index} references vertex {vertex} but the hypergraph has {vertex_count} vertices"
    )]
    VertexOutOfRange {
        index: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
}

/// A k-uniform hypergraph on vertices `0..N` with a per-vertex incidence index.
#[derive(Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    /// Flattened edge tuples, `k` ids per edge.
    edges: Vec<usize>,
    incidence: Vec<Vec<usize>>,
}

impl std::fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hypergraph")
            .field("k", &self.k)
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Hypergraph {
    /// Validates and canonicalises an edge list. Tuples may be given in any
    /// order; repeated vertices inside a tuple make it non-uniform.
    pub fn build<E, T>(k: usize, n: usize, edges: E) -> Result<Self, HypergraphError>
    where
        E: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        if k == 0 {
            return Err(HypergraphError::InvalidUniformity(k));
        }
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        for (index, edge) in edges.into_iter().enumerate() {
            let mut tuple = edge.as_ref().to_vec();
            if let Some(&vertex) = tuple.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange {
                    index,
                    vertex,
                    vertex_count: n,
                });
            }
            tuple.sort_unstable();
            tuple.dedup();
            if tuple.len() != k || edge.as_ref().len() != k {
                return Err(HypergraphError::NonUniformEdge {
                    index,
                    expected: k,
                    found: tuple.len(),
                });
            }
            tuples.push(tuple);
        }
        tuples.sort_unstable();
        if let Some(w) = tuples.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateEdge(w[0].clone()));
        }

        let mut incidence = vec![Vec::new(); n];
        for (e, tuple) in tuples.iter().enumerate() {
            for &v in tuple {
                incidence[v].push(e);
            }
        }
        Ok(Hypergraph {
            k,
            n,
            edges: tuples.into_iter().flatten().collect(),
            incidence,
        })
    }

    #[inline]
    pub fn uniformity(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.k
    }

    #[inline]
    pub fn edge(&self, index: usize) -> &[usize] {
        &self.edges[index * self.k..(index + 1) * self.k]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.chunks_exact(self.k)
    }

    /// Indices of the edges containing `v`, in increasing order.
    #[inline]
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn contains_edge(&self, tuple: &[usize]) -> bool {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        match sorted.first() {
            Some(&v) if v < self.n => self.incidence[v]
                .iter()
                .any(|&e| self.edge(e) == sorted.as_slice()),
            _ => false,
        }
    }

    /// `e(S)`: number of edges with every vertex in `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        self.edges()
            .filter(|e| e.iter().all(|&v| s.contains(v)))
            .count()
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        !self.edges().any(|e| e.iter().all(|&v| s.contains(v)))
    }

    /// Vertex-induced subhypergraph on `s`, keeping the ambient vertex ids.
    pub fn induced_edges(&self, s: &VertexSet) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| self.edge(e).iter().all(|&v| s.contains(v)))
            .collect()
    }

    /// `e_{k'}(D, W)`: edges of `H[D ∪ W]` meeting `W` in at least `k'` vertices.
    pub fn e_at_least(&self, kprime: usize, d: &VertexSet, w: &VertexSet) -> usize {
        self.edges()
            .filter(|e| {
                let mut in_w = 0;
                for &v in e.iter() {
                    let hit = w.contains(v);
                    if !hit && !d.contains(v) {
                        return false;
                    }
                    in_w += hit as usize;
                }
                in_w >= kprime
            })
            .count()
    }

    /// `deg_{k'}(v, D, W)`: edges of `H[D ∪ W]` containing `v` that meet
    /// `W \ {v}` in at least `k'` vertices. With `k' = 0` this is the degree
    /// of `v` in `H[D ∪ W]`. Vertices outside `D ∪ W` have degree 0.
    pub fn deg_at_least(&self, v: usize, kprime: usize, d: &VertexSet, w: &VertexSet) -> usize {
        self.incidence[v]
            .iter()
            .filter(|&&e| {
                let mut in_w = 0;
                for &u in self.edge(e) {
                    let hit = w.contains(u);
                    if !hit && !d.contains(u) {
                        return false;
                    }
                    in_w += (hit && u != v) as usize;
                }
                in_w >= kprime
            })
            .count()
    }

    /// Hex SHA-256 of the canonical edge-list serialisation.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(write_edge_list(self).as_bytes());
        hex::encode(hasher.finalize())
    }

    /// Vertices that appear in at least one edge.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) > 0).collect()
    }

    /// Edge sets as hash-friendly sorted tuples.
    pub fn edge_set(&self) -> HashSet<Vec<usize>> {
        self.edges().map(|e| e.to_vec()).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// A_5 with integer i mapped to id i - 1.
    pub(crate) fn a5() -> Hypergraph {
        Hypergraph::build(3, 5, [[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 2, 4]]).unwrap()
    }

    /// T_4: K_4 edges ranked lexicographically,
    /// {0,1}=0 {0,2}=1 {0,3}=2 {1,2}=3 {1,3}=4 {2,3}=5.
    pub(crate) fn t4() -> Hypergraph {
        Hypergraph::build(3, 6, [[0, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]]).unwrap()
    }

    fn ints(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, xs.iter().map(|x| x - 1))
    }

    #[test]
    fn build_examples() {
        let h = Hypergraph::build(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(a5().edge_count(), 4);
        assert_eq!(
            Hypergraph::build(2, 3, [[0, 1], [0, 1]]),
            Err(HypergraphError::DuplicateEdge(vec![0, 1]))
        );
        assert_eq!(
            Hypergraph::build(2, 3, [[1, 0], [0, 1]]),
            Err(HypergraphError::DuplicateEdge(vec![0, 1]))
        );
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            Hypergraph::build(3, 4, [vec![0, 1]]),
            Err(HypergraphError::NonUniformEdge { found: 2, .. })
        ));
        assert!(matches!(
            Hypergraph::build(3, 4, [vec![0, 1, 1]]),
            Err(HypergraphError::NonUniformEdge { found: 2, .. })
        ));
        assert!(matches!(
            Hypergraph::build(2, 4, [vec![0, 4]]),
            Err(HypergraphError::VertexOutOfRange { vertex: 4, .. })
        ));
        assert!(matches!(
            Hypergraph::build(0, 4, Vec::<Vec<usize>>::new()),
            Err(HypergraphError::InvalidUniformity(0))
        ));
    }

    #[test]
    fn canonical_order_and_incidence() {
        let h = Hypergraph::build(2, 4, [[3, 2], [1, 0], [0, 2]]).unwrap();
        assert_eq!(
            h.edges().collect::<Vec<_>>(),
            vec![&[0, 1][..], &[0, 2], &[2, 3]]
        );
        assert_eq!(h.incident(0), &[0, 1]);
        assert_eq!(h.incident(2), &[1, 2]);
        assert!(h.contains_edge(&[2, 0]));
        assert!(!h.contains_edge(&[1, 2]));
    }

    #[test]
    fn induced_counts() {
        let h = a5();
        assert_eq!(h.induced_edge_count(&VertexSet::empty(5)), 0);
        assert_eq!(h.induced_edge_count(&ints(5, &[1, 2, 4, 5])), 0);
        assert_eq!(h.induced_edge_count(&ints(5, &[1, 2, 3, 4, 5])), 4);
        assert!(!h.is_independent(&ints(5, &[1, 2, 3])));
        assert!(h.is_independent(&ints(5, &[1, 2, 4, 5])));
        assert!(h.is_independent(&VertexSet::empty(5)));
    }

    #[test]
    fn e_at_least_examples() {
        let h = a5();
        let v = h.all_vertices();
        assert_eq!(h.e_at_least(1, &v, &VertexSet::empty(5)), 0);
        assert_eq!(h.e_at_least(2, &v, &ints(5, &[3, 4, 5])), 3);
        // W = {e12, e13, e23} in T_4
        let t = t4();
        let w = VertexSet::from_ids(6, [0, 1, 3]);
        assert_eq!(t.e_at_least(2, &t.all_vertices(), &w), 1);
    }

    #[test]
    fn deg_at_least_examples() {
        let h = a5();
        let v = h.all_vertices();
        assert_eq!(h.deg_at_least(2, 1, &v, &ints(5, &[1, 5])), 3);
        let t = t4();
        let w = VertexSet::from_ids(6, [0, 1, 3]);
        // e14 = {0,3} has id 2
        assert_eq!(t.deg_at_least(2, 2, &t.all_vertices(), &w), 0);
        for u in 0..5 {
            assert_eq!(h.deg_at_least(u, 1, &v, &VertexSet::empty(5)), 0);
        }
    }

    #[test]
    fn deg_zero_is_induced_degree() {
        let h = a5();
        let d = ints(5, &[1, 2, 3]);
        let empty = VertexSet::empty(5);
        assert_eq!(h.deg_at_least(1, 0, &d, &empty), 1);
        assert_eq!(h.deg_at_least(4, 0, &d, &empty), 0);
    }

    pub(crate) fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (2usize..=4, 4usize..=10).prop_flat_map(|(k, n)| {
            proptest::collection::btree_set(proptest::collection::btree_set(0..n, k), 0..25)
                .prop_filter_map("uniform", move |edges| {
                    let edges: Vec<Vec<usize>> = edges
                        .into_iter()
                        .map(|e| e.into_iter().collect::<Vec<_>>())
                        .filter(|e| e.len() == k)
                        .collect();
                    Hypergraph::build(k, n, edges).ok()
                })
        })
    }

    fn arb_with_sets() -> impl Strategy<Value = (Hypergraph, VertexSet, VertexSet)> {
        arb_hypergraph().prop_flat_map(|h| {
            let n = h.vertex_count();
            (
                Just(h),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(h, a, b)| {
                    let d = VertexSet::from_ids(n, (0..n).filter(|&i| a[i]));
                    let w = VertexSet::from_ids(n, (0..n).filter(|&i| b[i]));
                    (h, d, w)
                })
        })
    }

    proptest! {
        #[test]
        fn handshake((h, _d, _w) in arb_with_sets()) {
            let v = h.all_vertices();
            let empty = VertexSet::empty(h.vertex_count());
            let total: usize = (0..h.vertex_count()).map(|u| h.deg_at_least(u, 0, &v, &empty)).sum();
            prop_assert_eq!(total, h.uniformity() * h.edge_count());
        }

        #[test]
        fn full_intersection_is_induced((h, _d, w) in arb_with_sets()) {
            prop_assert_eq!(h.e_at_least(h.uniformity(), &h.all_vertices(), &w), h.induced_edge_count(&w));
        }

        #[test]
        fn e_at_least_monotone((h, d, w) in arb_with_sets()) {
            let k = h.uniformity();
            for kp in 0..k {
                prop_assert!(h.e_at_least(kp + 1, &d, &w) <= h.e_at_least(kp, &d, &w));
            }
            // moving a vertex of D into W never lowers the count
            for v in d.iter() {
                let mut grown = w.clone();
                grown.insert(v);
                for kp in 0..=k {
                    prop_assert!(h.e_at_least(kp, &d, &grown) >= h.e_at_least(kp, &d, &w));
                }
            }
        }

        #[test]
        fn independence_matches_naive_scan((h, d, _w) in arb_with_sets()) {
            let naive = h.edges().filter(|e| e.iter().all(|v| d.to_vec().contains(v))).count();
            prop_assert_eq!(h.induced_edge_count(&d), naive);
            prop_assert_eq!(h.is_independent(&d), naive == 0);
        }
    }
}
