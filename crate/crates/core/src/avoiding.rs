//! Avoidance constructions over the reduced word chain.
//!
//! The central object is [`WordChain`]: starting from the empty word, it
//! repeatedly appends the first one-letter extension of a kept word whose
//! count vector grows an exact echelon basis, and stops when nothing grows.
//! The chain spans the same stable subspace as the count vectors of *all*
//! words, with at most `dim` words of length below `dim`. Scanning it yields
//! either a word avoiding a requested state from the carrier subset, a word
//! compressing the carrier, or a proof that no avoiding word exists.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::automaton::{Automaton, Transform};
use crate::linalg::{CountVector, EchelonBasis};
use crate::stateset::StateSet;
use crate::word::Word;
use crate::{Error, Result};

/// One kept word with its count vector `[S][w]`.
#[derive(Clone, Debug)]
pub struct ChainEntry {
    pub word: Word,
    pub vector: CountVector,
}

/// The reduced chain `W_0 ⊆ W_1 ⊆ …` for a fixed carrier subset.
pub struct WordChain {
    subset: StateSet,
    entries: Vec<ChainEntry>,
    /// Entry indices ordered by (word length, construction order).
    scan: Vec<usize>,
}

impl WordChain {
    /// Span dimension reached at stabilization; equals the entry count.
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn subset(&self) -> &StateSet {
        &self.subset
    }

    /// Entries in construction order.
    pub fn entries(&self) -> &[ChainEntry] {
        &self.entries
    }

    /// Entries in word-length order, ties broken by construction order.
    pub fn scan_entries(&self) -> impl Iterator<Item = &ChainEntry> {
        self.scan.iter().map(|&i| &self.entries[i])
    }
}

/// Builds the reduced chain for `S` (which must be non-empty).
///
/// Candidates `wa` are tried with `w` in construction order and letters
/// ascending; a candidate rejected once stays dependent forever (the span
/// only grows), so each is examined at most once.
pub fn reduced_chain(aut: &Automaton, s: &StateSet) -> Result<WordChain> {
    if s.is_empty() {
        return Err(Error::Precondition(
            "reduced_chain needs a non-empty subset".to_string(),
        ));
    }
    assert_eq!(s.capacity(), aut.n(), "state set capacity mismatch");
    let n = aut.n();
    let k = aut.k() as u32;

    let mut basis = EchelonBasis::new(n);
    let mut entries: Vec<ChainEntry> = Vec::new();
    let mut transforms: Vec<Transform> = Vec::new();

    let identity = Transform::identity(n);
    let root = CountVector::from_transform(&identity, s);
    basis.insert(&root);
    entries.push(ChainEntry {
        word: Word::empty(),
        vector: root,
    });
    transforms.push(identity);

    let (mut at, mut letter) = (0usize, 0u32);
    while at < entries.len() && basis.dim() < n {
        let mut t = transforms[at].clone();
        aut.extend_transform(&mut t, letter);
        let v = CountVector::from_transform(&t, s);
        if basis.insert(&v) {
            let mut word = entries[at].word.clone();
            word.push(letter);
            entries.push(ChainEntry { word, vector: v });
            transforms.push(t);
        }
        letter += 1;
        if letter == k {
            letter = 0;
            at += 1;
        }
    }

    let mut scan: Vec<usize> = (0..entries.len()).collect();
    scan.sort_by_key(|&i| entries[i].word.len());
    Ok(WordChain {
        subset: s.clone(),
        entries,
        scan,
    })
}

/// Outcome of the avoid-or-compress dichotomy for `(S, A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AvoidCompressOutcome {
    /// `A ⊄ S·word`; `missing` is a state of `A` absent from the image.
    Avoided { word: Word, missing: usize },
    /// `|S·word| < |S|`; `target` is a state of `A` hit at least twice.
    Compressed { word: Word, target: usize },
    /// Provably no word avoids any state of `A` from `S`: every count
    /// vector in the stable span has exactly 1 at each `A` position.
    Neither,
}

fn check_proper(aut: &Automaton, s: &StateSet, a: &StateSet, op: &str) -> Result<()> {
    assert_eq!(s.capacity(), aut.n(), "state set capacity mismatch");
    assert_eq!(a.capacity(), aut.n(), "state set capacity mismatch");
    if a.is_empty() || !a.is_subset(s) || a == s {
        return Err(Error::Precondition(alloc::format!(
            "{op} needs ∅ ≠ A ⊊ S (|A|={}, |S|={})",
            a.len(),
            s.len()
        )));
    }
    Ok(())
}

/// A word of length at most `n − |A|` that avoids a state of `A` from `S`
/// or compresses `S`, or `Neither` when `A` is unavoidable from `S`.
pub fn avoid_or_compress(
    aut: &Automaton,
    s: &StateSet,
    a: &StateSet,
) -> Result<AvoidCompressOutcome> {
    check_proper(aut, s, a, "avoid_or_compress")?;
    Ok(scan_chain(&reduced_chain(aut, s)?, a))
}

/// Scans a prebuilt chain; `chain.subset()` plays the role of `S`.
pub fn avoid_or_compress_in(chain: &WordChain, a: &StateSet) -> Result<AvoidCompressOutcome> {
    if a.is_empty() || !a.is_subset(chain.subset()) || a == chain.subset() {
        return Err(Error::Precondition(
            "avoid_or_compress needs ∅ ≠ A ⊊ S".to_string(),
        ));
    }
    Ok(scan_chain(chain, a))
}

fn scan_chain(chain: &WordChain, a: &StateSet) -> AvoidCompressOutcome {
    for entry in chain.scan_entries() {
        for q in a.iter() {
            match entry.vector.entry(q) {
                0 => {
                    return AvoidCompressOutcome::Avoided {
                        word: entry.word.clone(),
                        missing: q,
                    }
                }
                1 => {}
                _ => {
                    return AvoidCompressOutcome::Compressed {
                        word: entry.word.clone(),
                        target: q,
                    }
                }
            }
        }
    }
    AvoidCompressOutcome::Neither
}

/// Outcome of the iterated dichotomy (up to `k` compressions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AvoidBulkOutcome {
    /// `A ⊄ S·word`, with `|word| ≤ k(n − |A|)`.
    Avoided { word: Word, missing: usize },
    /// `|S·word| ≤ |S| − k`, with `|word| ≤ k(n − |A|)`.
    BulkCompressed { word: Word },
    Neither,
}

/// Iterates [`avoid_or_compress`] up to `k` times on the shrinking image.
pub fn avoid_or_compress_iter(
    aut: &Automaton,
    s: &StateSet,
    a: &StateSet,
    k: usize,
) -> Result<AvoidBulkOutcome> {
    check_proper(aut, s, a, "avoid_or_compress_iter")?;
    if k == 0 {
        return Err(Error::Precondition("iteration count k must be >= 1".to_string()));
    }
    let chain = reduced_chain(aut, s)?;
    iterate(aut, &chain, a, k)
}

/// Iterated dichotomy reusing a prebuilt chain for the initial subset.
pub fn avoid_or_compress_iter_in(
    aut: &Automaton,
    chain: &WordChain,
    a: &StateSet,
    k: usize,
) -> Result<AvoidBulkOutcome> {
    check_proper(aut, chain.subset(), a, "avoid_or_compress_iter")?;
    if k == 0 {
        return Err(Error::Precondition("iteration count k must be >= 1".to_string()));
    }
    iterate(aut, chain, a, k)
}

fn iterate(
    aut: &Automaton,
    first_chain: &WordChain,
    a: &StateSet,
    k: usize,
) -> Result<AvoidBulkOutcome> {
    let mut total = Word::empty();
    let mut current = first_chain.subset().clone();
    let mut rebuilt: Option<WordChain> = None;
    for round in 1..=k {
        let chain = rebuilt.as_ref().unwrap_or(first_chain);
        match scan_chain(chain, a) {
            AvoidCompressOutcome::Avoided { word, missing } => {
                total.extend_with(&word);
                return Ok(AvoidBulkOutcome::Avoided { word: total, missing });
            }
            AvoidCompressOutcome::Compressed { word, .. } => {
                current = aut.apply_word(&current, &word);
                total.extend_with(&word);
                if !a.is_subset(&current) {
                    let missing = a
                        .iter()
                        .find(|&q| !current.contains(q))
                        .expect("A is not a subset of the image");
                    return Ok(AvoidBulkOutcome::Avoided { word: total, missing });
                }
                if round == k {
                    return Ok(AvoidBulkOutcome::BulkCompressed { word: total });
                }
                if a == &current {
                    // The image collapsed onto A itself; any letter moving A
                    // yields avoidance, and if none exists A is invariant.
                    return Ok(match moving_letter(aut, a) {
                        Some((letter, missing)) => {
                            total.push(letter);
                            AvoidBulkOutcome::Avoided { word: total, missing }
                        }
                        None => AvoidBulkOutcome::Neither,
                    });
                }
                rebuilt = Some(reduced_chain(aut, &current)?);
            }
            AvoidCompressOutcome::Neither => return Ok(AvoidBulkOutcome::Neither),
        }
    }
    unreachable!("loop returns on every branch of round k")
}

/// Smallest letter with `A·a ≠ A`, plus a state of `A` missing from `A·a`.
fn moving_letter(aut: &Automaton, a: &StateSet) -> Option<(u32, usize)> {
    for letter in 0..aut.k() as u32 {
        let image = StateSet::from_states(aut.n(), a.iter().map(|q| aut.step(q, letter)));
        if &image != a {
            let missing = a
                .iter()
                .find(|&q| !image.contains(q))
                .expect("A·a ≠ A with |A·a| ≤ |A| leaves some state of A uncovered");
            return Some((letter, missing));
        }
    }
    None
}

/// A word avoiding a state of `A` from `S`, of length at most
/// `(|S| − |A|)(n − |A|) + 1`. Requires `∅ ≠ A ⊆ S`; fails with
/// [`Error::NoWitness`] when `A` is unavoidable from `S`.
pub fn avoid_from(aut: &Automaton, s: &StateSet, a: &StateSet) -> Result<Word> {
    assert_eq!(s.capacity(), aut.n(), "state set capacity mismatch");
    assert_eq!(a.capacity(), aut.n(), "state set capacity mismatch");
    if a.is_empty() || !a.is_subset(s) {
        return Err(Error::Precondition(
            "avoid_from needs ∅ ≠ A ⊆ S".to_string(),
        ));
    }
    let mut total = Word::empty();
    let mut current = s.clone();
    loop {
        if !a.is_subset(&current) {
            return Ok(total);
        }
        if a == &current {
            // No room left to compress; a letter moving A finishes the job.
            return match moving_letter(aut, a) {
                Some((letter, _)) => {
                    total.push(letter);
                    Ok(total)
                }
                None => Err(Error::NoWitness(
                    "A is invariant under every letter, hence unavoidable".to_string(),
                )),
            };
        }
        match scan_chain(&reduced_chain(aut, &current)?, a) {
            AvoidCompressOutcome::Avoided { word, .. } => {
                total.extend_with(&word);
                return Ok(total);
            }
            AvoidCompressOutcome::Compressed { word, .. } => {
                current = aut.apply_word(&current, &word);
                total.extend_with(&word);
            }
            AvoidCompressOutcome::Neither => {
                return Err(Error::NoWitness(
                    "no word avoids any state of A from the current image".to_string(),
                ))
            }
        }
    }
}

/// A word avoiding a state of `A` from the whole state set, of length at
/// most `(n − 1 − |A|)(n − |A|) + 2`: a rank-deficient letter first, then
/// [`avoid_from`] on its image. Requires `∅ ≠ A ⊊ Q`.
pub fn avoid_global(aut: &Automaton, a: &StateSet) -> Result<Word> {
    assert_eq!(a.capacity(), aut.n(), "state set capacity mismatch");
    if a.is_empty() || a.len() >= aut.n() {
        return Err(Error::Precondition(
            "avoid_global needs ∅ ≠ A ⊊ Q".to_string(),
        ));
    }
    let Some(letter) = (0..aut.k() as u32).find(|&l| aut.letter_rank(l) < aut.n()) else {
        return Err(Error::NoWitness(
            "every letter is a permutation, so no state is avoidable".to_string(),
        ));
    };
    let mut word = Word::from_letters([letter]);
    let image = aut.apply_word(&aut.all_states(), &word);
    if !a.is_subset(&image) {
        return Ok(word);
    }
    let rest = avoid_from(aut, &image, a)?;
    word.extend_with(&rest);
    Ok(word)
}

/// Outcome of the subset-avoidance construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetAvoidOutcome {
    /// `(S·word) ∩ D = ∅`.
    SubsetAvoided { word: Word },
    /// `|S·word| < |S|`.
    Compressed { word: Word },
}

/// Given a word `w_dprime` avoiding `D∖{p}` from `Q` in a strongly connected
/// synchronizing automaton, produces a word of length at most
/// `n − 1 + |w_dprime|` whose image from `S` is either disjoint from `D` or
/// strictly smaller than `S`.
pub fn avoid_subset_or_compress(
    aut: &Automaton,
    s: &StateSet,
    d: &StateSet,
    p: usize,
    w_dprime: &Word,
) -> Result<SubsetAvoidOutcome> {
    assert_eq!(s.capacity(), aut.n(), "state set capacity mismatch");
    assert_eq!(d.capacity(), aut.n(), "state set capacity mismatch");
    if s.is_empty() || d.len() < 2 || !d.contains(p) {
        return Err(Error::Precondition(
            "avoid_subset_or_compress needs |S| ≥ 1, |D| ≥ 2 and p ∈ D".to_string(),
        ));
    }
    let report = aut.classify();
    if !report.strongly_connected || !report.synchronizing {
        return Err(Error::Precondition(
            "avoid_subset_or_compress needs a strongly connected synchronizing automaton"
                .to_string(),
        ));
    }
    // Re-verify the supplied avoiding word instead of trusting it.
    let mut d_rest = d.clone();
    d_rest.remove(p);
    let q_image = aut.apply_word(&aut.all_states(), w_dprime);
    if !q_image.is_disjoint(&d_rest) {
        return Err(Error::Precondition(
            "w_dprime does not avoid D∖{p} from Q".to_string(),
        ));
    }

    if s.is_disjoint(d) {
        return Ok(SubsetAvoidOutcome::SubsetAvoided { word: Word::empty() });
    }

    let pre_p = aut.preimage(&StateSet::singleton(aut.n(), p), w_dprime);
    let chain = reduced_chain(aut, s)?;
    if chain.dim() < aut.n() {
        return Err(Error::Internal(alloc::format!(
            "chain of a strongly connected synchronizing automaton spans dim {} < n = {}",
            chain.dim(),
            aut.n()
        )));
    }
    for entry in chain.scan_entries() {
        if entry.vector.support_size() < s.len() {
            return Ok(SubsetAvoidOutcome::Compressed {
                word: entry.word.clone(),
            });
        }
        match entry.vector.support().intersection_size(&pre_p) {
            1 => {}
            0 => {
                return Ok(SubsetAvoidOutcome::SubsetAvoided {
                    word: entry.word.concat(w_dprime),
                })
            }
            _ => {
                return Ok(SubsetAvoidOutcome::Compressed {
                    word: entry.word.concat(w_dprime),
                })
            }
        }
    }
    // A full-dimensional chain must contain a qualifying vector unless the
    // preimage of p under w_dprime is all of Q (then w_dprime resets Q onto
    // p and a singleton S can never leave the preimage).
    Err(Error::Internal(
        "no qualifying word in a full-dimensional chain; \
         w_dprime maps every state onto p, which the construction cannot use"
            .to_string(),
    ))
}
