//! Freely reduced words in the generators of a free group.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A generator or its inverse. Generators are numbered from zero internally
/// and printed from one (`g1`, `g1^-1`, ...).
///
/// Letters order as `g1 < g1^-1 < g2 < g2^-1 < ...`; enumeration uses this
/// order within each word length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: usize,
    inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn generator(self) -> usize {
        self.generator
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// All `2g` letters in canonical order.
    pub fn all(generators: usize) -> impl Iterator<Item = Letter> + Clone {
        (0..generators).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
    }

    /// Dense index in `0..2g`, matching [`Letter::all`].
    pub fn index(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "g{}^-1", self.generator + 1)
        } else {
            write!(f, "g{}", self.generator + 1)
        }
    }
}

/// A freely reduced word `s1 s2 ... sk`, read as the composition
/// `s1 ∘ s2 ∘ ... ∘ sk` (the last letter acts first).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Rejects sequences with an adjacent cancelling pair.
    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        if let Some(position) = letters.windows(2).position(|w| w[0] == w[1].inv()) {
            return Err(Error::NotReduced { position });
        }
        Ok(Self(letters))
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn letter(l: Letter) -> Self {
        Self(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// `self · other`, freely reduced.
    pub fn concat(&self, other: &Word) -> Self {
        Self::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Appends a letter if the result stays reduced.
    pub fn extended(&self, l: Letter) -> Option<Self> {
        if self.last() == Some(l.inv()) {
            return None;
        }
        let mut letters = self.0.clone();
        letters.push(l);
        Some(Self(letters))
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) format: `e`, or whitespace
    /// separated letters `gK` / `gK^-1` with `K >= 1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Self::empty());
        }
        let bad = || Error::WordSyntax(s.to_string());
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let body = tok.strip_prefix('g').ok_or_else(bad)?;
            let (num, inverse) = match body.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (body, false),
            };
            let k: usize = num.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            letters.push(Letter::new(k - 1, inverse));
        }
        Self::from_letters(letters)
    }
}

/// Number of reduced words of length `<= max_len` on `generators` letters
/// and their inverses: `1 + 2g * sum_{k<L} (2g-1)^k`.
pub fn reduced_word_count(generators: usize, max_len: usize) -> u128 {
    if generators == 0 {
        return 1;
    }
    let branch = 2 * generators as u128 - 1;
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * generators as u128;
    for _ in 0..max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(branch);
    }
    total
}
