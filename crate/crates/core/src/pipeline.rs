//! The combined avoid/compress reset-word construction and its exact bound
//! arithmetic.
//!
//! The construction greedily compresses the full state set to rank `n − 4k`,
//! then repeatedly prepends words avoiding one of the states that are unique
//! preimages of image states (each prepend strictly drops the rank) until
//! rank `⌊n/2⌋`, and finishes greedily. When the avoidance machinery reports
//! a bulk compression instead, the construction switches to the compressed
//! word and finishes greedily from there. Every certificate carries an exact
//! rational length bound computed from the branch taken.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::automaton::Automaton;
use crate::avoiding::{self, AvoidBulkOutcome, WordChain};
use crate::compression::{c_bound_clamped, greedy_compress_to_with, PairTable};
use crate::stateset::StateSet;
use crate::word::Word;
use crate::{Error, Result};

/// Which route produced a [`ResetCertificate`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PipelineBranch {
    /// Avoidance prepends carried the rank all the way to `⌊n/2⌋`.
    Avoiding,
    /// A bulk compression interrupted the avoidance loop.
    BulkCompress,
    /// The automaton has a sink state; plain greedy applies.
    Sink,
    /// `n < 9`: plain greedy under the cubic bound.
    GreedyFallback,
}

/// A reset word together with the exact bound its construction guarantees.
#[derive(Clone, Debug)]
pub struct ResetCertificate {
    pub word: Word,
    /// `(prefix length, rank)` checkpoints; ranks strictly decrease, from
    /// `(0, n)` down to rank 1.
    pub rank_trace: Vec<(usize, usize)>,
    pub branch: PipelineBranch,
    /// `k` used by the avoidance stages (0 for sink/fallback branches).
    pub k_used: usize,
    /// Exact upper bound on the word length for this branch and `n`.
    pub bound_value: BigRational,
}

/// The paper's tuned iteration count: `⌊5n/44⌋` clamped into `[1, ⌊n/8⌋]`,
/// or 0 for `n < 9` to signal the greedy fallback.
pub fn choose_k(n: usize) -> usize {
    if n < 9 {
        return 0;
    }
    (5 * n / 44).clamp(1, n / 8)
}

/// Lemma-2 style dichotomy from the full state set: either a word avoiding
/// a state of `A`, or a word of rank at most `n − k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AvoidingOrBulk {
    /// `A ⊄ Q·word`, `|word| ≤ k(n − |A|)`.
    Avoided(Word),
    /// `|Q·word| ≤ n − k`, `|word| ≤ k(n − 1)`.
    BulkCompressed(Word),
}

/// Runs the iterated dichotomy with `S = Q`. In a synchronizing automaton
/// without a sink every state is avoidable from every subset, so `Neither`
/// cannot occur and is escalated as an internal error.
pub fn avoiding_or_bulk(aut: &Automaton, a: &StateSet, k: usize) -> Result<AvoidingOrBulk> {
    let chain = avoiding::reduced_chain(aut, &aut.all_states())?;
    avoiding_or_bulk_in(aut, &chain, a, k)
}

/// Same as [`avoiding_or_bulk`], reusing a prebuilt chain for `Q`.
pub fn avoiding_or_bulk_in(
    aut: &Automaton,
    chain_q: &WordChain,
    a: &StateSet,
    k: usize,
) -> Result<AvoidingOrBulk> {
    if let Some(q) = (0..aut.n()).find(|&q| (0..aut.k()).all(|l| aut.step(q, l as u32) == q)) {
        return Err(Error::Precondition(alloc::format!(
            "avoiding_or_bulk needs a sink-free automaton, but {q} is a sink"
        )));
    }
    match avoiding::avoid_or_compress_iter_in(aut, chain_q, a, k)? {
        AvoidBulkOutcome::Avoided { word, .. } => Ok(AvoidingOrBulk::Avoided(word)),
        AvoidBulkOutcome::BulkCompressed { word } => Ok(AvoidingOrBulk::BulkCompressed(word)),
        AvoidBulkOutcome::Neither => Err(Error::Internal(
            "avoid-or-compress returned Neither although no sink exists; \
             is the automaton synchronizing?"
                .to_string(),
        )),
    }
}

/// A word of rank at most `⌊n/2⌋` plus the branch that produced it.
pub fn compress_to_half(aut: &Automaton, k: usize) -> Result<(Word, PipelineBranch)> {
    let table = PairTable::build(aut);
    if !table.all_finite() {
        return Err(Error::NotSynchronizing);
    }
    compress_to_half_with(aut, &table, k)
}

fn compress_to_half_with(
    aut: &Automaton,
    table: &PairTable,
    k: usize,
) -> Result<(Word, PipelineBranch)> {
    let n = aut.n();
    if n < 9 {
        return Err(Error::Precondition(
            "compress_to_half needs n >= 9".to_string(),
        ));
    }
    if k == 0 || 8 * k > n {
        return Err(Error::Precondition(alloc::format!(
            "compress_to_half needs 1 <= k <= n/8, got k={k} for n={n}"
        )));
    }
    if let Some(q) = (0..n).find(|&q| (0..aut.k()).all(|l| aut.step(q, l as u32) == q)) {
        return Err(Error::Precondition(alloc::format!(
            "compress_to_half needs a sink-free automaton, but {q} is a sink"
        )));
    }

    let q_all = aut.all_states();
    let half = n / 2;

    // Stage 1: greedy down to rank n − 4k (within C(n, n−4k) by the
    // per-step compression bound).
    let mut word = greedy_compress_to_with(aut, table, &q_all, n - 4 * k)?;
    let mut transform = aut.word_transform(&word);
    let mut image = transform.image(&q_all);

    let chain_q = avoiding::reduced_chain(aut, &q_all)?;

    // Stage 2: prepend avoiding words while the rank exceeds ⌊n/2⌋.
    while image.len() > half {
        let rank = image.len();
        // Unique preimages: for every image state hit exactly once, the one
        // state mapping there. Avoiding such a state removes its image state
        // from the image, so the rank strictly drops.
        let mut hit_count = vec![0u32; n];
        let mut sole_source = vec![0u32; n];
        for q in 0..n {
            let target = transform.apply(q);
            hit_count[target] += 1;
            sole_source[target] = q as u32;
        }
        let want = 2 * rank - n;
        let mut avoid_targets = StateSet::empty(n);
        for target in 0..n {
            if hit_count[target] == 1 {
                avoid_targets.insert(sole_source[target] as usize);
                if avoid_targets.len() == want {
                    break;
                }
            }
        }
        if avoid_targets.len() < want {
            return Err(Error::Internal(alloc::format!(
                "only {} unique-preimage states at rank {rank}, expected at least {want}",
                avoid_targets.len()
            )));
        }

        match avoiding_or_bulk_in(aut, &chain_q, &avoid_targets, k)? {
            AvoidingOrBulk::Avoided(prefix) => {
                transform = aut.word_transform(&prefix).and_then(&transform);
                word = prefix.concat(&word);
                image = transform.image(&q_all);
                if image.len() >= rank {
                    return Err(Error::Internal(
                        "avoiding prepend failed to reduce the rank".to_string(),
                    ));
                }
            }
            AvoidingOrBulk::BulkCompressed(bulk) => {
                // Continue from whichever word leaves less guaranteed work:
                // actual length plus the greedy bound for its rank. The bulk
                // word alone satisfies k(n−1) + C(n−k, ⌊n/2⌋), so the chosen
                // one does too.
                let bulk_image = aut.apply_word(&q_all, &bulk);
                let est_bulk = BigInt::from(bulk.len()) + c_bound_clamped(n, bulk_image.len(), half);
                let est_cur = BigInt::from(word.len()) + c_bound_clamped(n, rank, half);
                let (base, base_image) = if est_bulk <= est_cur {
                    (bulk, bulk_image)
                } else {
                    (word, image)
                };
                if base_image.len() <= half {
                    return Ok((base, PipelineBranch::BulkCompress));
                }
                let tail = greedy_compress_to_with(aut, table, &base_image, half)?;
                return Ok((base.concat(&tail), PipelineBranch::BulkCompress));
            }
        }
    }
    Ok((word, PipelineBranch::Avoiding))
}

/// Builds a rank-1 word with an exact per-instance length bound.
pub fn pipeline_reset(aut: &Automaton) -> Result<ResetCertificate> {
    let n = aut.n();
    let table = PairTable::build(aut);
    if !table.all_finite() {
        return Err(Error::NotSynchronizing);
    }
    let q_all = aut.all_states();
    let sink = (0..n).find(|&q| (0..aut.k()).all(|l| aut.step(q, l as u32) == q));

    let (word, branch, k_used, bound_value) = if sink.is_some() {
        let word = greedy_compress_to_with(aut, &table, &q_all, 1)?;
        let bound = BigRational::from_integer(sink_bound(n));
        (word, PipelineBranch::Sink, 0, bound)
    } else if n < 9 {
        let word = greedy_compress_to_with(aut, &table, &q_all, 1)?;
        let bound = BigRational::from_integer(pin_bound(n));
        (word, PipelineBranch::GreedyFallback, 0, bound)
    } else {
        let k = choose_k(n);
        let (half_word, branch) = compress_to_half_with(aut, &table, k)?;
        let image = aut.apply_word(&q_all, &half_word);
        let tail = greedy_compress_to_with(aut, &table, &image, 1)?;
        (half_word.concat(&tail), branch, k, parametrized_bound(n, k)?)
    };

    let rank_trace = rank_trace(aut, &word);
    match rank_trace.last() {
        Some(&(_, 1)) => {}
        _ => {
            return Err(Error::Internal(
                "pipeline produced a word of rank above 1".to_string(),
            ))
        }
    }
    Ok(ResetCertificate {
        word,
        rank_trace,
        branch,
        k_used,
        bound_value,
    })
}

/// `(prefix length, rank)` at every strict rank drop, starting at `(0, n)`.
pub fn rank_trace(aut: &Automaton, word: &Word) -> Vec<(usize, usize)> {
    let mut current = aut.all_states();
    let mut trace = vec![(0, current.len())];
    for (i, &a) in word.letters().iter().enumerate() {
        current = StateSet::from_states(aut.n(), current.iter().map(|q| aut.step(q, a)));
        if current.len() < trace.last().unwrap().1 {
            trace.push((i + 1, current.len()));
        }
    }
    trace
}

/// `(n³ − n)/6`, the classical cubic bound (an exact integer).
pub fn pin_bound(n: usize) -> BigInt {
    let n = BigInt::from(n);
    (n.pow(3) - n) / 6
}

/// `(85059n³ + 90024n² + 196504n − 10648)/511104`, the improved bound.
pub fn new_bound(n: usize) -> BigRational {
    let n = BigInt::from(n);
    let numer = BigInt::from(85059) * n.pow(3) + BigInt::from(90024) * n.pow(2)
        + BigInt::from(196504) * &n
        - BigInt::from(10648);
    BigRational::new(numer, BigInt::from(511104))
}

/// `n(n−1)/2`, tight for synchronizing automata with a sink state.
pub fn sink_bound(n: usize) -> BigInt {
    BigInt::from(n) * BigInt::from(n - 1) / 2
}

/// `k(3n² − 64k² + 144k + 13)/12`: length bound for reaching rank `⌊n/2⌋`
/// through the avoiding route.
pub fn lemma6_bound(n: usize, k: usize) -> BigRational {
    let n = BigInt::from(n);
    let k = BigInt::from(k);
    let numer = &k
        * (BigInt::from(3) * n.pow(2) - BigInt::from(64) * k.pow(2) + BigInt::from(144) * &k
            + BigInt::from(13));
    BigRational::new(numer, BigInt::from(12))
}

/// `k(n−1) + C(n−k, ⌊n/2⌋)`: length bound for reaching rank `⌊n/2⌋` when a
/// bulk compression fires.
pub fn bulk_route_bound(n: usize, k: usize) -> BigInt {
    BigInt::from(k) * BigInt::from(n - 1) + c_bound_clamped(n, n - k, n / 2)
}

/// Exact parametrized bound for the full pipeline at a given `k`:
/// `max{lemma6, k(n−1) + C(n−k, ⌊n/2⌋)} + C(⌊n/2⌋, 1)`.
pub fn parametrized_bound(n: usize, k: usize) -> Result<BigRational> {
    if k == 0 || 8 * k > n {
        return Err(Error::Precondition(alloc::format!(
            "parametrized_bound needs 1 <= k <= n/8, got k={k} for n={n}"
        )));
    }
    let avoid_route = lemma6_bound(n, k);
    let bulk_route = BigRational::from_integer(bulk_route_bound(n, k));
    let stem = if avoid_route >= bulk_route {
        avoid_route
    } else {
        bulk_route
    };
    Ok(stem + BigRational::from_integer(c_bound_clamped(n, n / 2, 1)))
}

/// Closed form of `C(n−k, ⌊n/2⌋)` split by the parity of `n`.
pub fn c_compress_half_closed(n: usize, k: usize) -> BigInt {
    let nb = BigInt::from(n);
    let kb = BigInt::from(k);
    let k_part =
        BigInt::from(8) * kb.pow(3) + BigInt::from(24) * kb.pow(2) + BigInt::from(16) * &kb;
    let numer = if n % 2 == 0 {
        nb.pow(3) + BigInt::from(6) * nb.pow(2) + BigInt::from(8) * &nb - k_part
    } else {
        nb.pow(3) + BigInt::from(9) * nb.pow(2) + BigInt::from(23) * &nb - k_part
            + BigInt::from(15)
    };
    exact_div(numer, 48)
}

/// Closed form of `C(⌊n/2⌋, 1)` split by the parity of `n`.
///
/// For even `n` this is `(7n³ − 6n² − 16n)/48`; expanding the defining sum
/// telescopes to binomial differences and yields the `16n` term.
pub fn c_half_to_one_closed(n: usize) -> BigInt {
    let nb = BigInt::from(n);
    let numer = if n % 2 == 0 {
        BigInt::from(7) * nb.pow(3) - BigInt::from(6) * nb.pow(2) - BigInt::from(16) * &nb
    } else {
        BigInt::from(7) * nb.pow(3) - BigInt::from(9) * nb.pow(2) - BigInt::from(31) * &nb
            - BigInt::from(15)
    };
    exact_div(numer, 48)
}

fn exact_div(numer: BigInt, denom: i64) -> BigInt {
    let denom = BigInt::from(denom);
    debug_assert!((&numer % &denom) == BigInt::ZERO, "division must be exact");
    numer / denom
}

/// Exact bound values for one `n`, with the parametrized bound evaluated at
/// each requested `k`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: usize,
    pub pin_bound: BigInt,
    pub new_bound: BigRational,
    pub parametrized: Vec<(usize, BigRational)>,
    pub sink_bound: BigInt,
}

/// Builds a [`BoundReport`]; when `ks` is empty and `n ≥ 9` the tuned
/// [`choose_k`] value is reported.
pub fn bound_report(n: usize, ks: &[usize]) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::Precondition("bound_report needs n >= 1".to_string()));
    }
    let mut parametrized = Vec::new();
    if ks.is_empty() {
        let k = choose_k(n);
        if k > 0 {
            parametrized.push((k, parametrized_bound(n, k)?));
        }
    } else {
        for &k in ks {
            parametrized.push((k, parametrized_bound(n, k)?));
        }
    }
    Ok(BoundReport {
        n,
        pin_bound: pin_bound(n),
        new_bound: new_bound(n),
        parametrized,
        sink_bound: if n >= 1 { sink_bound(n) } else { BigInt::ZERO },
    })
}

/// Smallest `n ≤ n_max` with `new_bound(n) < pin_bound(n) − 1`, by exact
/// rational comparison.
pub fn new_bound_crossover(n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| {
        new_bound(n) < BigRational::from_integer(pin_bound(n) - BigInt::from(1))
    })
}

/// Shortest-round-trip decimal rendering of an exact rational.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
