//! Complete deterministic automata: construction, the text format, word
//! actions, images/preimages and structural classification.
//!
//! States are `0..n` and letters are `0..k`. The transition table is total:
//! every `delta[q][a]` is a valid state.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::compression::PairTable;
use crate::stateset::{StateSet, MAX_STATES};
use crate::word::Word;
use crate::{Error, Result};

/// A complete deterministic automaton over `n` states and `k` letters.
#[derive(Clone, PartialEq, Eq)]
pub struct Automaton {
    n: usize,
    k: usize,
    /// Row-major table: `delta[q * k + a]`.
    delta: Vec<u32>,
}

impl Automaton {
    /// Builds an automaton from a row-major transition table, validating
    /// completeness and the [`MAX_STATES`] capacity cap.
    pub fn new(n: usize, k: usize, delta: Vec<u32>) -> Result<Self> {
        Automaton::with_max_states(n, k, delta, MAX_STATES)
    }

    /// Same as [`Automaton::new`] with an explicit capacity cap.
    pub fn with_max_states(n: usize, k: usize, delta: Vec<u32>, max_states: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Construction(
                "automaton needs at least one state and one letter".to_string(),
            ));
        }
        if n > max_states {
            return Err(Error::Construction(alloc::format!(
                "{n} states exceed the configured maximum of {max_states}"
            )));
        }
        if delta.len() != n * k {
            return Err(Error::Construction(alloc::format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                n * k
            )));
        }
        if let Some(bad) = delta.iter().position(|&t| t as usize >= n) {
            return Err(Error::Construction(alloc::format!(
                "target {} of state {} under letter {} is out of range 0..{n}",
                delta[bad],
                bad / k,
                bad % k
            )));
        }
        Ok(Automaton { n, k, delta })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// `delta(q, a)`.
    #[inline]
    pub fn step(&self, q: usize, a: u32) -> usize {
        debug_assert!(q < self.n && (a as usize) < self.k);
        self.delta[q * self.k + a as usize] as usize
    }

    /// The full state set `Q`.
    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.n)
    }

    fn check_word(&self, w: &Word) {
        for &a in w.letters() {
            assert!(
                (a as usize) < self.k,
                "letter {a} is not valid for a {}-letter alphabet",
                self.k
            );
        }
    }

    /// Precomputes the transformation `q ↦ δ(q, w)` in `O(n·|w|)`.
    pub fn word_transform(&self, w: &Word) -> Transform {
        self.check_word(w);
        let mut t = Transform::identity(self.n);
        for &a in w.letters() {
            self.extend_transform(&mut t, a);
        }
        t
    }

    /// Extends a transformation by one letter in place: `t ← t · [a]`.
    pub fn extend_transform(&self, t: &mut Transform, a: u32) {
        assert!((a as usize) < self.k);
        for q in 0..self.n {
            t.map[q] = self.delta[t.map[q] as usize * self.k + a as usize];
        }
    }

    /// The image `S·w`.
    pub fn apply_word(&self, s: &StateSet, w: &Word) -> StateSet {
        self.word_transform(w).image(s)
    }

    /// The preimage `S·w⁻¹ = {q | δ(q, w) ∈ S}`.
    pub fn preimage(&self, s: &StateSet, w: &Word) -> StateSet {
        assert_eq!(s.capacity(), self.n, "state set capacity mismatch");
        let t = self.word_transform(w);
        StateSet::from_states(self.n, (0..self.n).filter(|&q| s.contains(t.map[q] as usize)))
    }

    /// `|Q·w|`, the rank of the word.
    pub fn rank(&self, w: &Word) -> usize {
        self.word_transform(w).rank()
    }

    /// Rank of a single letter.
    pub fn letter_rank(&self, a: u32) -> usize {
        let mut seen = StateSet::empty(self.n);
        for q in 0..self.n {
            seen.insert(self.step(q, a));
        }
        seen.len()
    }

    /// Structural classification: synchronizing, strongly connected, sink.
    ///
    /// Synchronization is decided by pairwise mergeability (backward BFS on
    /// the pair automaton); when several states are fixed by every letter the
    /// smallest one is reported as the sink.
    pub fn classify(&self) -> ClassificationReport {
        let synchronizing = PairTable::build(self).all_finite();
        let strongly_connected = self.is_strongly_connected();
        let sink = (0..self.n).find(|&q| (0..self.k).all(|a| self.step(q, a as u32) == q));
        ClassificationReport {
            synchronizing,
            strongly_connected,
            sink,
        }
    }

    fn is_strongly_connected(&self) -> bool {
        // Forward reachability from 0, then backward; both must cover Q.
        let forward = |rev: bool| -> usize {
            let mut pre: Vec<Vec<u32>> = vec![Vec::new(); self.n];
            if rev {
                for q in 0..self.n {
                    for a in 0..self.k {
                        pre[self.step(q, a as u32)].push(q as u32);
                    }
                }
            }
            let mut seen = StateSet::singleton(self.n, 0);
            let mut stack = vec![0usize];
            while let Some(q) = stack.pop() {
                if rev {
                    for &p in &pre[q] {
                        if seen.insert(p as usize) {
                            stack.push(p as usize);
                        }
                    }
                } else {
                    for a in 0..self.k {
                        let t = self.step(q, a as u32);
                        if seen.insert(t) {
                            stack.push(t);
                        }
                    }
                }
            }
            seen.len()
        };
        forward(false) == self.n && forward(true) == self.n
    }

    /// Preimage sizes of the image states of `w` (Q·w partitions Q into
    /// disjoint preimages, so the sizes sum to `n`).
    pub fn preimage_census(&self, w: &Word) -> PreimageCensus {
        let t = self.word_transform(w);
        let mut by_state: BTreeMap<usize, usize> = BTreeMap::new();
        for q in 0..self.n {
            *by_state.entry(t.map[q] as usize).or_insert(0) += 1;
        }
        let g = by_state.values().copied().min().unwrap_or(0);
        PreimageCensus { by_state, g }
    }

    /// Parses the automaton text format.
    ///
    /// Lines starting with `#` and blank lines are ignored. The first content
    /// line is `n k`; it is followed by exactly `n` rows of `k` targets, row
    /// `q` holding `delta[q][0..k]`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut delta: Vec<u32> = Vec::new();
        let mut rows = 0usize;
        let mut last_line = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: alloc::format!(
                                "expected header \"n k\", found {} field(s)",
                                fields.len()
                            ),
                        });
                    }
                    let n: usize = parse_field(fields[0], line_no, "state count")?;
                    let k: usize = parse_field(fields[1], line_no, "alphabet size")?;
                    if n == 0 || k == 0 {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: "state count and alphabet size must be positive".to_string(),
                        });
                    }
                    header = Some((n, k));
                    delta.reserve(n * k);
                }
                Some((n, k)) => {
                    if rows == n {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: alloc::format!("unexpected content after {n} transition rows"),
                        });
                    }
                    if fields.len() != k {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: alloc::format!(
                                "row {rows} has {} entries, expected {k}",
                                fields.len()
                            ),
                        });
                    }
                    for field in fields {
                        let target: usize = parse_field(field, line_no, "target state")?;
                        if target >= n {
                            return Err(Error::Parse {
                                line: line_no,
                                reason: alloc::format!("target {target} is out of range 0..{n}"),
                            });
                        }
                        delta.push(target as u32);
                    }
                    rows += 1;
                }
            }
        }
        let (n, k) = header.ok_or(Error::Parse {
            line: last_line,
            reason: "missing header line \"n k\"".to_string(),
        })?;
        if rows < n {
            return Err(Error::Parse {
                line: last_line,
                reason: alloc::format!("expected {n} transition rows, found {rows}"),
            });
        }
        Automaton::new(n, k, delta).map_err(|e| match e {
            Error::Construction(reason) => Error::Parse { line: last_line, reason },
            other => other,
        })
    }

    /// Serializes to the text format (no comments, LF line endings).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        fmt::write(&mut out, format_args!("{} {}\n", self.n, self.k)).unwrap();
        for q in 0..self.n {
            for a in 0..self.k {
                if a > 0 {
                    out.push(' ');
                }
                fmt::write(&mut out, format_args!("{}", self.delta[q * self.k + a])).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn parse_field(field: &str, line: usize, what: &str) -> Result<usize> {
    field.parse().map_err(|_| Error::Parse {
        line,
        reason: alloc::format!("{what} {field:?} is not a number"),
    })
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automaton(n={}, k={})", self.n, self.k)
    }
}

/// The total map `q ↦ δ(q, w)` of some word, reusable across subsets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transform {
    map: Vec<u32>,
}

impl Transform {
    pub fn identity(n: usize) -> Self {
        Transform {
            map: (0..n as u32).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn apply(&self, q: usize) -> usize {
        self.map[q] as usize
    }

    /// `self` followed by `then` (word concatenation order).
    pub fn and_then(&self, then: &Transform) -> Transform {
        debug_assert_eq!(self.n(), then.n());
        Transform {
            map: self.map.iter().map(|&q| then.map[q as usize]).collect(),
        }
    }

    pub fn image(&self, s: &StateSet) -> StateSet {
        assert_eq!(s.capacity(), self.n(), "state set capacity mismatch");
        StateSet::from_states(self.n(), s.iter().map(|q| self.map[q] as usize))
    }

    /// `|Q·w|` for the underlying word.
    pub fn rank(&self) -> usize {
        let mut seen = StateSet::empty(self.n());
        for &t in &self.map {
            seen.insert(t as usize);
        }
        seen.len()
    }
}

/// Result of [`Automaton::classify`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassificationReport {
    pub synchronizing: bool,
    pub strongly_connected: bool,
    /// Smallest state fixed by every letter, if any.
    pub sink: Option<usize>,
}

/// Result of [`Automaton::preimage_census`]: for each image state of `w`,
/// the size of its preimage, plus the minimum size `g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreimageCensus {
    by_state: BTreeMap<usize, usize>,
    g: usize,
}

impl PreimageCensus {
    /// Preimage size of an image state (`None` if `q ∉ Q·w`).
    pub fn size_of(&self, q: usize) -> Option<usize> {
        self.by_state.get(&q).copied()
    }

    /// Minimum preimage size over the image.
    pub fn g(&self) -> usize {
        self.g
    }

    /// Image states whose preimage has exactly the given size, ascending.
    pub fn achieving(&self, size: usize) -> Vec<usize> {
        self.by_state
            .iter()
            .filter(|&(_, &s)| s == size)
            .map(|(&q, _)| q)
            .collect()
    }

    /// All (image state, preimage size) pairs, ascending by state.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_state.iter().map(|(&q, &s)| (q, s))
    }

    pub fn image_size(&self) -> usize {
        self.by_state.len()
    }
}
