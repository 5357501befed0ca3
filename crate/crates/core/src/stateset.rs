//! Fixed-capacity bit sets over automaton states.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Default hard cap on the number of states; keeps memory predictable.
pub const MAX_STATES: usize = 4096;

const BITS: usize = u64::BITS as usize;

/// A subset of the states `0..capacity` with cached cardinality.
///
/// Bits above `capacity` are always zero, so derived equality and ordering
/// are well defined and sets can serve as `BTreeMap` keys.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StateSet {
    capacity: usize,
    count: usize,
    blocks: Vec<u64>,
}

impl StateSet {
    /// The empty subset of `0..capacity`.
    pub fn empty(capacity: usize) -> Self {
        StateSet {
            capacity,
            count: 0,
            blocks: vec![0; capacity.div_ceil(BITS)],
        }
    }

    /// The full subset `{0, …, capacity-1}`.
    pub fn full(capacity: usize) -> Self {
        let mut set = StateSet::empty(capacity);
        for b in 0..set.blocks.len() {
            set.blocks[b] = u64::MAX;
        }
        let spare = set.blocks.len() * BITS - capacity;
        if spare > 0 {
            let last = set.blocks.len() - 1;
            set.blocks[last] >>= spare;
        }
        set.count = capacity;
        set
    }

    /// `{q}` inside `0..capacity`.
    pub fn singleton(capacity: usize, q: usize) -> Self {
        let mut set = StateSet::empty(capacity);
        set.insert(q);
        set
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(capacity: usize, states: I) -> Self {
        let mut set = StateSet::empty(capacity);
        for q in states {
            set.insert(q);
        }
        set
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    fn index(&self, q: usize) -> (usize, u64) {
        assert!(q < self.capacity, "state {q} out of range 0..{}", self.capacity);
        (q / BITS, 1u64 << (q % BITS))
    }

    /// Inserts `q`; returns `true` if the set changed.
    pub fn insert(&mut self, q: usize) -> bool {
        let (block, mask) = self.index(q);
        let fresh = self.blocks[block] & mask == 0;
        if fresh {
            self.blocks[block] |= mask;
            self.count += 1;
        }
        fresh
    }

    /// Removes `q`; returns `true` if the set changed.
    pub fn remove(&mut self, q: usize) -> bool {
        let (block, mask) = self.index(q);
        let present = self.blocks[block] & mask != 0;
        if present {
            self.blocks[block] &= !mask;
            self.count -= 1;
        }
        present
    }

    #[inline]
    pub fn contains(&self, q: usize) -> bool {
        let (block, mask) = self.index(q);
        self.blocks[block] & mask != 0
    }

    /// States in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(b, &bits)| {
            let base = b * BITS;
            BlockIter { bits }.map(move |i| base + i)
        })
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        debug_assert_eq!(self.capacity, other.capacity);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.intersection_size(other) == 0
    }

    pub fn intersection_size(&self, other: &StateSet) -> usize {
        debug_assert_eq!(self.capacity, other.capacity);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

struct BlockIter {
    bits: u64,
}

impl Iterator for BlockIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(i)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn insert_remove_cardinality() {
        let mut s = StateSet::empty(70);
        assert!(s.insert(0));
        assert!(s.insert(69));
        assert!(!s.insert(0));
        assert_eq!(s.len(), 2);
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert_eq!(s.len(), 1);
        assert_eq!(s.iter().collect::<Vec<_>>(), [69]);
    }

    #[test]
    fn full_masks_spare_bits() {
        for n in [1, 63, 64, 65, 130] {
            let full = StateSet::full(n);
            assert_eq!(full.len(), n);
            assert_eq!(full.iter().count(), n);
            assert_eq!(full, StateSet::from_states(n, 0..n));
        }
    }

    #[test]
    fn subset_and_intersection() {
        let a = StateSet::from_states(10, [1, 3, 5]);
        let b = StateSet::from_states(10, [1, 3, 5, 7]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(a.intersection_size(&b), 3);
        let c = StateSet::from_states(10, [0, 2]);
        assert!(a.is_disjoint(&c));
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn out_of_range_panics() {
        let mut s = StateSet::empty(4);
        s.insert(4);
    }
}
