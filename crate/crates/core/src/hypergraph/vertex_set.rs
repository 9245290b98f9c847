use std::fmt;

use sha2::{Digest, Sha256};

const BITS: usize = u64::BITS as usize;

/// A set of vertex ids drawn from `[0, universe)`, stored as a bitset with a
/// cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    len: usize,
    blocks: Vec<u64>,
}

#[inline]
fn div_rem(i: usize) -> (usize, usize) {
    (i / BITS, i % BITS)
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            len: 0,
            blocks: vec![0; universe.div_ceil(BITS)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for (b, block) in set.blocks.iter_mut().enumerate() {
            let remaining = universe - b * BITS;
            *block = if remaining >= BITS {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        set.len = universe;
        set
    }

    /// Builds a set from ids; panics if an id is outside the universe.
    pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Self {
        let mut set = Self::empty(universe);
        for v in ids {
            set.insert(v);
        }
        set
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (b, i) = div_rem(v);
        self.blocks[b] & (1 << i) != 0
    }

    /// Returns true if `v` was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "vertex {v} outside universe {}",
            self.universe
        );
        let (b, i) = div_rem(v);
        let fresh = self.blocks[b] & (1 << i) == 0;
        self.blocks[b] |= 1 << i;
        self.len += fresh as usize;
        fresh
    }

    /// Returns true if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (b, i) = div_rem(v);
        let present = self.blocks[b] & (1 << i) != 0;
        self.blocks[b] &= !(1 << i);
        self.len -= present as usize;
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(b, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(b * BITS + i)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        let blocks: Vec<u64> = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| op(a, b))
            .collect();
        let len = blocks.iter().map(|b| b.count_ones() as usize).sum();
        VertexSet {
            universe: self.universe,
            len,
            blocks,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn union_with(&mut self, other: &Self) {
        *self = self.union(other);
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.universe == other.universe
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(&a, &b)| a & !b == 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Hex SHA-256 of the sorted member ids; independent of insertion order.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.universe as u64).to_le_bytes());
        for v in self.iter() {
            hasher.update((v as u64).to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_empty() {
        for n in [0, 1, 63, 64, 65, 130] {
            let full = VertexSet::full(n);
            assert_eq!(full.len(), n);
            assert_eq!(full.to_vec(), (0..n).collect::<Vec<_>>());
            assert!(VertexSet::empty(n).is_empty());
        }
    }

    #[test]
    fn insert_remove_tracks_len() {
        let mut s = VertexSet::empty(100);
        assert!(s.insert(70));
        assert!(!s.insert(70));
        assert!(s.insert(3));
        assert_eq!(s.len(), 2);
        assert!(s.remove(70));
        assert!(!s.remove(70));
        assert_eq!(s.to_vec(), vec![3]);
    }

    proptest! {
        #[test]
        fn set_ops_match_btreeset(a in proptest::collection::btree_set(0usize..150, 0..40),
                                  b in proptest::collection::btree_set(0usize..150, 0..40)) {
            let sa = VertexSet::from_ids(150, a.iter().copied());
            let sb = VertexSet::from_ids(150, b.iter().copied());
            prop_assert_eq!(sa.len(), a.len());
            prop_assert_eq!(sa.union(&sb).to_vec(), a.union(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection(&sb).to_vec(), a.intersection(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.difference(&sb).to_vec(), a.difference(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
            prop_assert_eq!(sa.intersection_len(&sb), a.intersection(&b).count());
        }
    }
}
