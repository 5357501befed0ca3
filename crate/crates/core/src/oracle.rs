//! Exact brute-force baselines: breadth-first search over the images of the
//! state set (or a chosen subset) under letter application.
//!
//! Exponential in the worst case, so every search runs behind explicit
//! guards; results are ground truth for the polynomial constructions.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::automaton::Automaton;
use crate::compression::PairTable;
use crate::stateset::StateSet;
use crate::word::Word;
use crate::{Error, Result};

/// Guards for the brute-force searches.
#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    /// Refuse automata with more states than this.
    pub max_states: usize,
    /// Refuse once this many distinct image sets have been visited.
    pub max_nodes: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_states: 24,
            max_nodes: 1 << 20,
        }
    }
}

impl OracleLimits {
    pub fn with_max_nodes(max_nodes: usize) -> Self {
        OracleLimits {
            max_nodes,
            ..OracleLimits::default()
        }
    }
}

/// Result of a brute-force search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Lexicographically least witness of minimum length; `None` when the
    /// goal is unreachable.
    pub witness: Option<Word>,
    /// Number of distinct image sets visited.
    pub explored: usize,
}

impl OracleResult {
    /// Witness length, `None` when unreachable.
    pub fn length(&self) -> Option<usize> {
        self.witness.as_ref().map(Word::len)
    }
}

/// Which flavour of avoidance the oracle should search for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AvoidMode {
    /// Stop at the first image that does not contain all of `A`.
    SomeState,
    /// Stop at the first image disjoint from `A`.
    WholeSubset,
}

fn check_guard(aut: &Automaton, limits: &OracleLimits) -> Result<()> {
    if aut.n() > limits.max_states {
        return Err(Error::OracleRefused(alloc::format!(
            "automaton has {} states, above the configured limit of {}",
            aut.n(),
            limits.max_states
        )));
    }
    Ok(())
}

/// Layered BFS from `start` over images under single letters. Expansion is
/// letter-ascending from nodes in insertion order, so the first path that
/// reaches a goal is the lexicographically least among the shortest.
fn bfs_images<G: Fn(&StateSet) -> bool>(
    aut: &Automaton,
    start: &StateSet,
    goal: G,
    limits: &OracleLimits,
) -> Result<OracleResult> {
    check_guard(aut, limits)?;
    if goal(start) {
        return Ok(OracleResult {
            witness: Some(Word::empty()),
            explored: 1,
        });
    }
    // parents[i] = (parent index, letter); sets[i] = image at node i.
    let mut sets: Vec<StateSet> = Vec::new();
    let mut parents: Vec<(usize, u32)> = Vec::new();
    let mut visited: BTreeSet<StateSet> = BTreeSet::new();
    sets.push(start.clone());
    parents.push((usize::MAX, 0));
    visited.insert(start.clone());

    let mut head = 0usize;
    while head < sets.len() {
        for a in 0..aut.k() as u32 {
            let next = StateSet::from_states(aut.n(), sets[head].iter().map(|q| aut.step(q, a)));
            if visited.contains(&next) {
                continue;
            }
            if visited.len() >= limits.max_nodes {
                return Err(Error::OracleRefused(alloc::format!(
                    "visited {} image sets, above the configured limit of {}",
                    visited.len(),
                    limits.max_nodes
                )));
            }
            let reached_goal = goal(&next);
            visited.insert(next.clone());
            sets.push(next);
            parents.push((head, a));
            if reached_goal {
                let mut letters: Vec<u32> = Vec::new();
                let mut at = sets.len() - 1;
                while at != 0 {
                    let (parent, letter) = parents[at];
                    letters.push(letter);
                    at = parent;
                }
                letters.reverse();
                return Ok(OracleResult {
                    witness: Some(Word::from_letters(letters)),
                    explored: visited.len(),
                });
            }
        }
        head += 1;
    }
    Ok(OracleResult {
        witness: None,
        explored: visited.len(),
    })
}

/// Shortest reset word (first singleton image reachable from `Q`).
pub fn exact_shortest_reset(aut: &Automaton, limits: &OracleLimits) -> Result<OracleResult> {
    bfs_images(aut, &aut.all_states(), |s| s.len() == 1, limits)
}

/// Shortest word avoiding `A` from `Q`, in the requested mode.
pub fn exact_shortest_avoiding(
    aut: &Automaton,
    a: &StateSet,
    mode: AvoidMode,
    limits: &OracleLimits,
) -> Result<OracleResult> {
    assert_eq!(a.capacity(), aut.n(), "state set capacity mismatch");
    if a.is_empty() {
        return Err(Error::Precondition(
            "exact_shortest_avoiding needs a non-empty A".into(),
        ));
    }
    match mode {
        AvoidMode::SomeState => bfs_images(aut, &aut.all_states(), |s| !a.is_subset(s), limits),
        AvoidMode::WholeSubset => bfs_images(aut, &aut.all_states(), |s| a.is_disjoint(s), limits),
    }
}

/// Shortest word strictly shrinking `S`.
pub fn exact_shortest_compressing(
    aut: &Automaton,
    s: &StateSet,
    limits: &OracleLimits,
) -> Result<OracleResult> {
    if s.len() < 2 {
        return Err(Error::Precondition(
            "exact_shortest_compressing needs |S| >= 2".into(),
        ));
    }
    let size = s.len();
    bfs_images(aut, s, |t| t.len() < size, limits)
}

/// Shortest word merging `q` with any other state (via the pair table, so
/// no guard is needed).
pub fn min_pair_merge_for_state(aut: &Automaton, q: usize) -> Result<OracleResult> {
    if aut.n() < 2 {
        return Err(Error::Precondition(
            "min_pair_merge_for_state needs n >= 2".into(),
        ));
    }
    assert!(q < aut.n(), "state out of range");
    let table = PairTable::build(aut);
    let mut best: Option<(usize, usize)> = None;
    for p in 0..aut.n() {
        if p == q {
            continue;
        }
        if let Some(d) = table.distance(p, q) {
            if best.is_none_or(|b| (d, p) < b) {
                best = Some((d, p));
            }
        }
    }
    Ok(OracleResult {
        witness: best.map(|(_, p)| {
            table
                .merging_word(aut, p, q)
                .expect("finite distance implies a merging word")
        }),
        explored: aut.n() - 1,
    })
}

/// All image sets reachable from `from` (including `from` itself).
pub fn reachable_images(
    aut: &Automaton,
    from: &StateSet,
    limits: &OracleLimits,
) -> Result<Vec<StateSet>> {
    check_guard(aut, limits)?;
    let mut visited: BTreeSet<StateSet> = BTreeSet::new();
    let mut queue: Vec<StateSet> = Vec::new();
    visited.insert(from.clone());
    queue.push(from.clone());
    let mut head = 0usize;
    while head < queue.len() {
        for a in 0..aut.k() as u32 {
            let next = StateSet::from_states(aut.n(), queue[head].iter().map(|q| aut.step(q, a)));
            if !visited.contains(&next) {
                if visited.len() >= limits.max_nodes {
                    return Err(Error::OracleRefused(alloc::format!(
                        "visited {} image sets, above the configured limit of {}",
                        visited.len(),
                        limits.max_nodes
                    )));
                }
                visited.insert(next.clone());
                queue.push(next);
            }
        }
        head += 1;
    }
    Ok(queue)
}
