//! Pair-automaton BFS, greedy compression and the cumulative bound `C(j,i)`.

use alloc::collections::VecDeque;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::automaton::Automaton;
use crate::stateset::StateSet;
use crate::word::Word;
use crate::{Error, Result};

const INFINITE: u32 = u32::MAX;

#[inline]
fn pair_index(p: usize, q: usize) -> usize {
    debug_assert!(p < q);
    q * (q - 1) / 2 + p
}

/// Shortest merge distances for all unordered state pairs, with the first
/// letter of the lexicographically smallest shortest merging word.
///
/// Built by backward BFS from the merged diagonal; every pair has a finite
/// distance exactly when the automaton is synchronizing.
pub struct PairTable {
    n: usize,
    dist: Vec<u32>,
    letter: Vec<u32>,
}

impl PairTable {
    pub fn build(aut: &Automaton) -> PairTable {
        let n = aut.n();
        let k = aut.k();
        let pairs = n * (n - 1) / 2;
        let mut dist = vec![INFINITE; pairs];
        let mut queue: VecDeque<(u32, u32)> = VecDeque::new();

        // Per-letter preimage lists.
        let mut pre: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); n]; k];
        for q in 0..n {
            for a in 0..k {
                pre[a][aut.step(q, a as u32)].push(q as u32);
            }
        }

        // Seed with pairs merged by a single letter.
        for p in 0..n {
            for q in p + 1..n {
                if (0..k).any(|a| aut.step(p, a as u32) == aut.step(q, a as u32)) {
                    dist[pair_index(p, q)] = 1;
                    queue.push_back((p as u32, q as u32));
                }
            }
        }

        while let Some((u, v)) = queue.pop_front() {
            let d = dist[pair_index(u as usize, v as usize)];
            for a in 0..k {
                for &x in &pre[a][u as usize] {
                    for &y in &pre[a][v as usize] {
                        let (p, q) = if x < y { (x, y) } else { (y, x) };
                        let idx = pair_index(p as usize, q as usize);
                        if dist[idx] == INFINITE {
                            dist[idx] = d + 1;
                            queue.push_back((p, q));
                        }
                    }
                }
            }
        }

        // First letter of the lexicographically smallest shortest merging
        // word: the smallest letter stepping one BFS layer down. Choosing it
        // greedily per step is lexicographically optimal because all shortest
        // continuations have equal length.
        let mut letter = vec![u32::MAX; pairs];
        for p in 0..n {
            for q in p + 1..n {
                let idx = pair_index(p, q);
                if dist[idx] == INFINITE {
                    continue;
                }
                for a in 0..k {
                    let x = aut.step(p, a as u32);
                    let y = aut.step(q, a as u32);
                    let succ = if x == y {
                        0
                    } else {
                        let (x, y) = if x < y { (x, y) } else { (y, x) };
                        dist[pair_index(x, y)]
                    };
                    if succ == dist[idx] - 1 {
                        letter[idx] = a as u32;
                        break;
                    }
                }
            }
        }

        PairTable { n, dist, letter }
    }

    /// Shortest merge length for `{p, q}`, `None` when the pair never merges.
    pub fn distance(&self, p: usize, q: usize) -> Option<usize> {
        assert!(p < self.n && q < self.n && p != q, "need two distinct states");
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        match self.dist[pair_index(p, q)] {
            INFINITE => None,
            d => Some(d as usize),
        }
    }

    /// Lexicographically smallest shortest merging word for `{p, q}`.
    pub fn merging_word(&self, aut: &Automaton, p: usize, q: usize) -> Option<Word> {
        self.distance(p, q)?;
        let (mut p, mut q) = if p < q { (p, q) } else { (q, p) };
        let mut word = Word::empty();
        while p != q {
            let a = self.letter[pair_index(p, q)];
            word.push(a);
            let (x, y) = (aut.step(p, a), aut.step(q, a));
            (p, q) = if x < y { (x, y) } else { (y, x) };
            if x == y {
                break;
            }
        }
        Some(word)
    }

    /// True when every pair merges, i.e. the automaton is synchronizing.
    pub fn all_finite(&self) -> bool {
        self.dist.iter().all(|&d| d != INFINITE)
    }

    pub fn max_finite_distance(&self) -> Option<usize> {
        self.dist
            .iter()
            .filter(|&&d| d != INFINITE)
            .map(|&d| d as usize)
            .max()
    }
}

/// Operation form of [`PairTable::build`].
pub fn build_pair_table(aut: &Automaton) -> PairTable {
    PairTable::build(aut)
}

/// A shortest word strictly shrinking `S`, from a fresh pair table.
pub fn shortest_compress_step(aut: &Automaton, s: &StateSet) -> Result<Word> {
    shortest_compress_step_with(aut, &PairTable::build(aut), s)
}

/// A shortest word strictly shrinking `S`, reusing a prebuilt pair table.
///
/// The minimum over pairs of `S` of the pair-merge distance is exactly the
/// shortest compressing length, since any compression merges some pair. Ties
/// go to the smallest pair `(p, q)`, and the per-step smallest letter makes
/// the word itself lexicographically smallest for that pair.
pub fn shortest_compress_step_with(
    aut: &Automaton,
    table: &PairTable,
    s: &StateSet,
) -> Result<Word> {
    if s.len() < 2 {
        return Err(Error::Precondition(
            "shortest_compress_step needs |S| >= 2".to_string(),
        ));
    }
    let members: Vec<usize> = s.iter().collect();
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, &p) in members.iter().enumerate() {
        for &q in &members[i + 1..] {
            if let Some(d) = table.distance(p, q) {
                let candidate = (d, p, q);
                if best.is_none_or(|b| candidate < b) {
                    best = Some(candidate);
                }
            }
        }
    }
    let Some((d, p, q)) = best else {
        return Err(Error::NoWitness(alloc::format!(
            "no pair of the {}-element subset can be merged",
            s.len()
        )));
    };
    let word = table
        .merging_word(aut, p, q)
        .expect("finite distance implies a merging word");
    debug_assert_eq!(word.len(), d);
    Ok(word)
}

/// Greedy compression of `S` down to at most `target` states.
pub fn greedy_compress_to(aut: &Automaton, s: &StateSet, target: usize) -> Result<Word> {
    greedy_compress_to_with(aut, &PairTable::build(aut), s, target)
}

/// Greedy compression reusing a prebuilt pair table.
pub fn greedy_compress_to_with(
    aut: &Automaton,
    table: &PairTable,
    s: &StateSet,
    target: usize,
) -> Result<Word> {
    if target == 0 || target > s.len() {
        return Err(Error::Precondition(alloc::format!(
            "greedy target must satisfy 1 <= target <= |S| = {}",
            s.len()
        )));
    }
    let mut current = s.clone();
    let mut word = Word::empty();
    while current.len() > target {
        let step = match shortest_compress_step_with(aut, table, &current) {
            Ok(step) => step,
            Err(Error::NoWitness(_)) => return Err(Error::NotSynchronizing),
            Err(e) => return Err(e),
        };
        current = aut.apply_word(&current, &step);
        word.extend_with(&step);
    }
    Ok(word)
}

/// `C(j, i) = Σ_{s=i+1}^{j} (n−s+2)(n−s+1)/2`, the cumulative bound on
/// compressing a size-`j` subset down to size `i`. Exact integer arithmetic.
pub fn c_bound(n: usize, j: usize, i: usize) -> Result<BigInt> {
    if !(1 <= i && i <= j && j <= n) {
        return Err(Error::Precondition(alloc::format!(
            "c_bound needs 1 <= i <= j <= n, got n={n}, j={j}, i={i}"
        )));
    }
    Ok(c_bound_clamped(n, j, i))
}

/// Like [`c_bound`] but evaluates to zero whenever `j <= i`.
pub fn c_bound_clamped(n: usize, j: usize, i: usize) -> BigInt {
    let mut sum = BigInt::ZERO;
    for s in (i + 1)..=j {
        let t = BigInt::from(n - s);
        sum += (&t + 1) * (&t + 2) / 2;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cerny;

    fn c4() -> Automaton {
        cerny(4).unwrap()
    }

    #[test]
    fn pair_distances_on_c4() {
        let aut = c4();
        let table = PairTable::build(&aut);
        // Frozen from the pair BFS; letter a cycles, letter b folds 3 onto 0.
        assert_eq!(table.distance(0, 3), Some(1));
        assert_eq!(table.distance(2, 3), Some(2));
        assert_eq!(table.distance(1, 2), Some(3));
        assert_eq!(table.distance(0, 1), Some(4));
        assert_eq!(table.distance(1, 3), Some(5));
        assert_eq!(table.distance(0, 2), Some(6));
        // The hardest pair needs n(n−1)/2 steps.
        assert_eq!(table.max_finite_distance(), Some(6));
        assert!(table.all_finite());

        assert_eq!(table.merging_word(&aut, 0, 3).unwrap().to_text(2), "b");
        assert_eq!(table.merging_word(&aut, 1, 2).unwrap().to_text(2), "aab");
        assert_eq!(table.merging_word(&aut, 0, 2).unwrap().to_text(2), "abaaab");
    }

    #[test]
    fn identity_automaton_never_merges() {
        let aut = Automaton::parse("3 1\n0\n1\n2\n").unwrap();
        let table = PairTable::build(&aut);
        assert!(!table.all_finite());
        assert_eq!(table.distance(0, 1), None);
        assert_eq!(table.max_finite_distance(), None);
        let full = aut.all_states();
        assert!(matches!(
            shortest_compress_step(&aut, &full).unwrap_err(),
            Error::NoWitness(_)
        ));
        assert_eq!(
            greedy_compress_to(&aut, &full, 1).unwrap_err(),
            Error::NotSynchronizing
        );
    }

    #[test]
    fn compress_steps_on_c4() {
        let aut = c4();
        let q = aut.all_states();
        let step = shortest_compress_step(&aut, &q).unwrap();
        assert_eq!(step.to_text(2), "b");
        let s = StateSet::from_states(4, [1, 2]);
        let step = shortest_compress_step(&aut, &s).unwrap();
        assert_eq!(step.to_text(2), "aab");
        assert_eq!(aut.apply_word(&s, &step).len(), 1);
    }

    #[test]
    fn greedy_reset_on_c4() {
        let aut = c4();
        let q = aut.all_states();
        // Forced steps: b ({0,3} at distance 1), aab ({1,2} at distance 3),
        // then the distance-6 merge of the leftover pair {0,2}. The greedy
        // word is strictly longer than the optimum 9 here, and meets the
        // C(4,1) = 10 bound exactly.
        let word = greedy_compress_to(&aut, &q, 1).unwrap();
        assert_eq!(word.to_text(2), "baababaaab");
        assert_eq!(word.len(), 10);
        assert_eq!(aut.rank(&word), 1);

        assert!(greedy_compress_to(&aut, &q, 4).unwrap().is_empty());

        let to_two = greedy_compress_to(&aut, &q, 2).unwrap();
        assert_eq!(aut.apply_word(&q, &to_two).len(), 2);
        assert!(BigInt::from(to_two.len()) <= c_bound(4, 4, 2).unwrap());
    }

    #[test]
    fn greedy_respects_per_step_bound_on_c4() {
        let aut = c4();
        let table = PairTable::build(&aut);
        let mut s = aut.all_states();
        let n = aut.n();
        while s.len() > 1 {
            let step = shortest_compress_step_with(&aut, &table, &s).unwrap();
            let size = s.len();
            assert!(step.len() <= (n - size + 2) * (n - size + 1) / 2);
            s = aut.apply_word(&s, &step);
            assert!(s.len() < size);
        }
    }

    #[test]
    fn c_bound_values() {
        assert_eq!(c_bound(4, 4, 1).unwrap(), BigInt::from(10));
        assert_eq!(c_bound(10, 10, 1).unwrap(), BigInt::from(165));
        assert_eq!(c_bound(7, 3, 3).unwrap(), BigInt::ZERO);
        // (n³−n)/6 closed form.
        for n in 1..=60usize {
            let direct = c_bound(n, n, 1).unwrap();
            let closed = BigInt::from(n).pow(3) - BigInt::from(n);
            assert_eq!(direct * 6, closed);
        }
        assert!(c_bound(4, 2, 3).is_err());
        assert!(c_bound(4, 5, 1).is_err());
        assert!(c_bound(4, 4, 0).is_err());
    }
}
