//! Words over the letter alphabet `0..k`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A finite sequence of letter indices.
///
/// Letters are plain indices; validity against a particular alphabet size is
/// checked where a word meets an automaton. The textual form is `'a'..'z'`
/// when the alphabet has at most 26 letters, and comma-separated decimal
/// indices otherwise; the empty word serializes as the empty string.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u32>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters<I: IntoIterator<Item = u32>>(letters: I) -> Self {
        Word {
            letters: letters.into_iter().collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    #[inline]
    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn push(&mut self, letter: u32) {
        self.letters.push(letter);
    }

    pub fn extend_with(&mut self, other: &Word) {
        self.letters.extend_from_slice(&other.letters);
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Renders the word for an alphabet of `k` letters.
    pub fn to_text(&self, k: usize) -> String {
        let mut out = String::new();
        if k <= 26 {
            for &a in &self.letters {
                out.push((b'a' + a as u8) as char);
            }
        } else {
            for (i, &a) in self.letters.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(itoa(a).as_str());
            }
        }
        out
    }

    /// Parses the textual form for an alphabet of `k` letters.
    pub fn parse(text: &str, k: usize) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        if k <= 26 {
            for (i, c) in text.chars().enumerate() {
                let idx = (c as u32).wrapping_sub('a' as u32);
                if !c.is_ascii_lowercase() || idx as usize >= k {
                    return Err(Error::Construction(alloc::format!(
                        "letter {c:?} at position {i} is not valid for a {k}-letter alphabet"
                    )));
                }
                letters.push(idx);
            }
        } else {
            for part in text.split(',') {
                let idx: u32 = part.trim().parse().map_err(|_| {
                    Error::Construction(alloc::format!("bad letter index {part:?}"))
                })?;
                if idx as usize >= k {
                    return Err(Error::Construction(alloc::format!(
                        "letter index {idx} is not valid for a {k}-letter alphabet"
                    )));
                }
                letters.push(idx);
            }
        }
        Ok(Word { letters })
    }
}

fn itoa(v: u32) -> String {
    let mut s = String::new();
    fmt::write(&mut s, format_args!("{v}")).expect("formatting cannot fail");
    s
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.letters)
    }
}

impl FromIterator<u32> for Word {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Word::from_letters(iter)
    }
}
