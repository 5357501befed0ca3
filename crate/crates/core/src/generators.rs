//! Deterministic automaton sources for tests and experiments.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::automaton::Automaton;
use crate::{Error, Result};

/// The splitmix64 generator.
///
/// State update and output mixing use the published constants, so the
/// sequence is reproducible bit-for-bit across platforms and languages:
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// output = z ^ (z >> 31)
/// ```
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` by rejection below the largest multiple
    /// of `bound`, so the result is exactly uniform.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

/// Automaton family selector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// The cycle-plus-fold family with reset threshold `(n−1)²`.
    Cerny,
    /// Uniform random transition table.
    Random,
    /// Uniform random table with state 0 forced to be a sink.
    SinkRandom,
}

/// Default retry cap for constraint rejection sampling.
pub const DEFAULT_MAX_REJECTIONS: u64 = 100_000;

/// Full description of a generated automaton; the seed determines the
/// output completely.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub require_synchronizing: bool,
    pub require_strongly_connected: bool,
    pub max_rejections: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, k: usize, seed: u64) -> Self {
        GeneratorSpec {
            family,
            n,
            k,
            seed,
            require_synchronizing: false,
            require_strongly_connected: false,
            max_rejections: DEFAULT_MAX_REJECTIONS,
        }
    }

    pub fn requiring(mut self, synchronizing: bool, strongly_connected: bool) -> Self {
        self.require_synchronizing = synchronizing;
        self.require_strongly_connected = strongly_connected;
        self
    }
}

/// The Černý automaton `C_n`: letter `a` is the cyclic shift `q ↦ q+1 mod n`
/// and letter `b` fixes everything except `n−1 ↦ 0`.
pub fn cerny(n: usize) -> Result<Automaton> {
    if n < 2 {
        return Err(Error::Construction(
            "the Černý family needs n >= 2".to_string(),
        ));
    }
    let mut delta = Vec::with_capacity(n * 2);
    for q in 0..n {
        delta.push(((q + 1) % n) as u32);
        delta.push(if q == n - 1 { 0 } else { q as u32 });
    }
    Automaton::new(n, 2, delta)
}

/// Draws an automaton per the spec. Table cells are drawn in row-major
/// order (state-major, letter-minor) from one splitmix64 stream seeded with
/// `spec.seed`; rejected attempts keep drawing from the same stream.
pub fn random_automaton(spec: &GeneratorSpec) -> Result<Automaton> {
    if spec.family == Family::Cerny {
        let aut = cerny(spec.n)?;
        debug_assert!({
            let report = aut.classify();
            (!spec.require_synchronizing || report.synchronizing)
                && (!spec.require_strongly_connected || report.strongly_connected)
        });
        return Ok(aut);
    }
    if spec.n == 0 || spec.k == 0 {
        return Err(Error::Construction(
            "automaton needs at least one state and one letter".to_string(),
        ));
    }
    let mut rng = SplitMix64::new(spec.seed);
    let mut attempts = 0u64;
    loop {
        attempts += 1;
        if attempts > spec.max_rejections {
            return Err(Error::RetryCapExceeded {
                attempts: spec.max_rejections,
            });
        }
        let mut delta = Vec::with_capacity(spec.n * spec.k);
        for q in 0..spec.n {
            for _a in 0..spec.k {
                if spec.family == Family::SinkRandom && q == 0 {
                    delta.push(0);
                } else {
                    delta.push(rng.below(spec.n as u64) as u32);
                }
            }
        }
        let aut = Automaton::new(spec.n, spec.k, delta)?;
        if spec.require_synchronizing || spec.require_strongly_connected {
            let report = aut.classify();
            if spec.require_synchronizing && !report.synchronizing {
                continue;
            }
            if spec.require_strongly_connected && !report.strongly_connected {
                continue;
            }
        }
        return Ok(aut);
    }
}
