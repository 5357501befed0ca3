//! Exact integer linear algebra over count vectors.
//!
//! A count vector `[S][w]` records, per state, how many states of `S` the
//! word `w` maps there. The avoid/compress dichotomy reads exact values (a
//! position equal to 0, or at least 2), so this module works in integer
//! arithmetic only; rows of the incremental basis use arbitrary-precision
//! integers because fraction-free elimination can outgrow machine words.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::automaton::{Automaton, Transform};
use crate::stateset::StateSet;
use crate::word::Word;

/// Multiplicities `([S][w])(i) = |{q ∈ S | δ(q, w) = i}|`.
///
/// Entries sum to `|S|`, and an entry is positive exactly when the state
/// lies in `S·w`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CountVector {
    entries: Vec<u64>,
}

impl CountVector {
    /// Computes `[S][w]` by one table walk.
    pub fn of(aut: &Automaton, s: &StateSet, w: &Word) -> CountVector {
        CountVector::from_transform(&aut.word_transform(w), s)
    }

    /// Computes `[S][w]` from the precomputed transformation of `w`.
    pub fn from_transform(t: &Transform, s: &StateSet) -> CountVector {
        assert_eq!(s.capacity(), t.n(), "state set capacity mismatch");
        let mut entries = vec![0u64; t.n()];
        for q in s.iter() {
            entries[t.apply(q)] += 1;
        }
        CountVector { entries }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entry(&self, i: usize) -> u64 {
        self.entries[i]
    }

    #[inline]
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn sum(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// The support `S·w` (positions with a positive entry).
    pub fn support(&self) -> StateSet {
        StateSet::from_states(
            self.len(),
            self.entries
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0)
                .map(|(i, _)| i),
        )
    }

    /// Support cardinality `|S·w|` without materializing the set.
    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|&&v| v > 0).count()
    }
}

/// Operation form of [`CountVector::of`].
pub fn count_vector(aut: &Automaton, s: &StateSet, w: &Word) -> CountVector {
    CountVector::of(aut, s, w)
}

struct Row {
    pivot: usize,
    entries: Vec<BigInt>,
}

/// Incremental row basis in echelon form, exact integer arithmetic.
///
/// Rows keep insertion order; each has a distinct leading position. New
/// vectors are reduced fraction-free (cross-multiplied, then divided by the
/// gcd of the surviving entries), so no rounding ever happens.
pub struct EchelonBasis {
    n: usize,
    rows: Vec<Row>,
}

impl EchelonBasis {
    pub fn new(n: usize) -> Self {
        EchelonBasis { n, rows: Vec::new() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Inserts a count vector; returns `true` iff the span grew.
    pub fn insert(&mut self, v: &CountVector) -> bool {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        self.insert_integers(v.entries().iter().map(|&e| BigInt::from(e)).collect())
    }

    /// Inserts a raw integer row; returns `true` iff the span grew.
    pub fn insert_integers(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        loop {
            let Some(pivot) = v.iter().position(|e| !e.is_zero()) else {
                return false; // reduced to zero: already in the span
            };
            let Some(row) = self.rows.iter().find(|r| r.pivot == pivot) else {
                normalize(&mut v, pivot);
                self.rows.push(Row { pivot, entries: v });
                return true;
            };
            // v ← v·row[pivot] − row·v[pivot], eliminating `pivot`.
            let factor_v = row.entries[pivot].clone();
            let factor_row = v[pivot].clone();
            for i in pivot..self.n {
                v[i] = &v[i] * &factor_v - &row.entries[i] * &factor_row;
            }
            debug_assert!(v[pivot].is_zero());
        }
    }
}

/// Divides by the gcd of all entries and makes the pivot positive.
fn normalize(v: &mut [BigInt], pivot: usize) {
    let mut g = BigInt::zero();
    for e in v.iter() {
        if !e.is_zero() {
            g = g.gcd(e);
        }
    }
    if v[pivot].is_negative() {
        g = -g;
    }
    if !g.is_zero() && g != BigInt::from(1) {
        for e in v.iter_mut() {
            if !e.is_zero() {
                *e /= &g;
            }
        }
    }
}
