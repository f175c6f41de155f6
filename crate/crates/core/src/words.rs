//! Letters of the alphabet Σ_n, words over it, the balance map and bumps.
//!
//! The surface syntax is ASCII: `a A b B` stand for the first two letter pairs
//! and their conjugates, and `a<i>` / `A<i>` name the `i`-th pair for any `i`.
//! `a1` and `a` denote the same letter, as do `a2` and `b`.

use std::fmt;
use std::ops::{Add, Deref};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter} is outside the alphabet of {n} pair(s)")]
    AlphabetBound { letter: Letter, n: usize },
    #[error("balance counter for pair {pair} overflowed")]
    Overflow { pair: u32 },
    #[error("invalid character {found:?} at byte {offset}")]
    InvalidChar { found: char, offset: usize },
    #[error("pair index at byte {offset} is missing, zero or too large")]
    BadPairIndex { offset: usize },
    #[error("the alphabet needs at least one pair")]
    EmptyAlphabet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Plain,
    Conjugate,
}

/// A letter `a_i` or its conjugate `ā_i`. Pair indices start at 1.
///
/// The derived ordering is `a < A < b < B < a3 < A3 < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pair: u32,
    polarity: Polarity,
}

impl Letter {
    pub const A: Letter = Letter {
        pair: 1,
        polarity: Polarity::Plain,
    };
    pub const A_BAR: Letter = Letter {
        pair: 1,
        polarity: Polarity::Conjugate,
    };
    pub const B: Letter = Letter {
        pair: 2,
        polarity: Polarity::Plain,
    };
    pub const B_BAR: Letter = Letter {
        pair: 2,
        polarity: Polarity::Conjugate,
    };

    /// The four letters of Σ₂ in enumeration order.
    pub const SIGMA2: [Letter; 4] = [Letter::A, Letter::A_BAR, Letter::B, Letter::B_BAR];

    /// Panics if `pair` is zero.
    pub fn new(pair: u32, polarity: Polarity) -> Self {
        assert!(pair >= 1, "pair indices start at 1");
        Letter { pair, polarity }
    }

    pub fn plain(pair: u32) -> Self {
        Letter::new(pair, Polarity::Plain)
    }

    pub fn pair(self) -> u32 {
        self.pair
    }

    pub fn polarity(self) -> Polarity {
        self.polarity
    }

    pub fn is_conjugate(self) -> bool {
        self.polarity == Polarity::Conjugate
    }

    pub fn conjugate(self) -> Letter {
        let polarity = match self.polarity {
            Polarity::Plain => Polarity::Conjugate,
            Polarity::Conjugate => Polarity::Plain,
        };
        Letter {
            pair: self.pair,
            polarity,
        }
    }

    /// Two letters from the same pair, regardless of polarity.
    pub fn same_pair(self, other: Letter) -> bool {
        self.pair == other.pair
    }

    /// +1 for `a_i`, -1 for `ā_i`.
    pub fn sign(self) -> i64 {
        match self.polarity {
            Polarity::Plain => 1,
            Polarity::Conjugate => -1,
        }
    }
}

/// Free-function form of [`Letter::conjugate`].
pub fn conjugate(x: Letter) -> Letter {
    x.conjugate()
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lower, upper) = match self.pair {
            1 => ("a", "A"),
            2 => ("b", "B"),
            _ => {
                let c = if self.is_conjugate() { 'A' } else { 'a' };
                return write!(f, "{c}{}", self.pair);
            }
        };
        f.write_str(if self.is_conjugate() { upper } else { lower })
    }
}

/// A finite word; indexing is zero-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Largest pair index occurring in the word (0 for the empty word).
    pub fn max_pair(&self) -> u32 {
        self.0.iter().map(|x| x.pair).max().unwrap_or(0)
    }

    pub fn balance(&self, n: usize) -> Result<Balance, WordError> {
        balance(self, n)
    }

    pub fn is_short(&self) -> bool {
        is_short(self)
    }

    /// Parses the ASCII syntax, rejecting letters whose pair exceeds `n`.
    pub fn parse_bounded(s: &str, n: usize) -> Result<Word, WordError> {
        let w: Word = s.parse()?;
        if let Some(&letter) = w.iter().find(|x| x.pair as usize > n) {
            return Err(WordError::AlphabetBound { letter, n });
        }
        Ok(w)
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        let bytes = s.as_bytes();
        let mut letters = Vec::with_capacity(bytes.len());
        let mut pos = 0;
        while pos < bytes.len() {
            let c = bytes[pos];
            let (base, polarity) = match c {
                b'a' => (1, Polarity::Plain),
                b'A' => (1, Polarity::Conjugate),
                b'b' => (2, Polarity::Plain),
                b'B' => (2, Polarity::Conjugate),
                _ => {
                    let found = s[pos..].chars().next().unwrap_or('\u{fffd}');
                    return Err(WordError::InvalidChar { found, offset: pos });
                }
            };
            let start = pos;
            pos += 1;
            let digits_end = bytes[pos..]
                .iter()
                .position(|b| !b.is_ascii_digit())
                .map_or(bytes.len(), |k| pos + k);
            let pair = if digits_end > pos {
                // `b<i>` is not part of the syntax; only `a<i>`/`A<i>` take indices.
                if base == 2 {
                    return Err(WordError::BadPairIndex { offset: start });
                }
                let pair: u32 = s[pos..digits_end]
                    .parse()
                    .map_err(|_| WordError::BadPairIndex { offset: start })?;
                if pair == 0 {
                    return Err(WordError::BadPairIndex { offset: start });
                }
                pos = digits_end;
                pair
            } else {
                base
            };
            letters.push(Letter { pair, polarity });
        }
        Ok(Word(letters))
    }
}

/// The value of the balance map: one signed counter per letter pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Balance(Vec<i64>);

impl Balance {
    pub fn zero(n: usize) -> Self {
        Balance(vec![0; n])
    }

    pub fn from_deltas(deltas: Vec<i64>) -> Self {
        Balance(deltas)
    }

    pub fn deltas(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn checked_add(&self, other: &Balance) -> Option<Balance> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(Balance)
    }
}

impl Add for &Balance {
    type Output = Balance;

    /// Panics on overflow or on tuples of different widths.
    fn add(self, other: &Balance) -> Balance {
        self.checked_add(other)
            .expect("balance addition overflowed or mixed widths")
    }
}

impl fmt::Display for Balance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

pub fn balance(w: &[Letter], n: usize) -> Result<Balance, WordError> {
    if n == 0 {
        return Err(WordError::EmptyAlphabet);
    }
    let mut deltas = vec![0i64; n];
    for &x in w {
        let k = x.pair as usize;
        if k > n {
            return Err(WordError::AlphabetBound { letter: x, n });
        }
        deltas[k - 1] = deltas[k - 1]
            .checked_add(x.sign())
            .ok_or(WordError::Overflow { pair: x.pair })?;
    }
    Ok(Balance(deltas))
}

/// Membership in O_n.
pub fn is_balanced(w: &[Letter], n: usize) -> Result<bool, WordError> {
    balance(w, n).map(|b| b.is_zero())
}

/// True iff no pair occurs with both polarities.
pub fn is_short(w: &[Letter]) -> bool {
    // bit 0: plain seen, bit 1: conjugate seen
    let mut seen: Vec<u8> = Vec::new();
    for &x in w {
        let k = x.pair as usize;
        if seen.len() < k {
            seen.resize(k, 0);
        }
        seen[k - 1] |= if x.is_conjugate() { 2 } else { 1 };
        if seen[k - 1] == 3 {
            return false;
        }
    }
    true
}

/// A minimal non-short factor `[start, end]` (inclusive) whose first letter is
/// `direction` and whose last letter is its conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bump {
    pub start: usize,
    pub end: usize,
    pub direction: Letter,
}

impl Bump {
    pub fn new(start: usize, end: usize, direction: Letter) -> Self {
        Bump {
            start,
            end,
            direction,
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }
}

impl fmt::Display for Bump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[{},{}]", self.direction, self.start, self.end)
    }
}

/// All bumps of `w`, ordered by end index. Start indices come out in the same
/// order, since a bump never contains another.
///
/// One left-to-right pass. For each pair we remember the last position holding
/// either of its letters and, per polarity, the last position of that letter.
/// A letter at `j` closes a bump with the last same-pair position `i` when that
/// letter is its conjugate and no other pair shows both polarities inside `(i, j)`.
pub fn bumps(w: &[Letter]) -> Vec<Bump> {
    let n = w.iter().map(|x| x.pair).max().unwrap_or(0) as usize;
    let mut last_of_pair: Vec<Option<usize>> = vec![None; n];
    // last[pair][polarity]
    let mut last: Vec<[Option<usize>; 2]> = vec![[None, None]; n];
    let mut out = Vec::new();
    for (j, &y) in w.iter().enumerate() {
        let k = y.pair as usize - 1;
        if let Some(i) = last_of_pair[k] {
            if w[i] == y.conjugate() {
                let interior_short = (0..n).filter(|&p| p != k).all(|p| match last[p] {
                    [Some(u), Some(v)] => u.min(v) <= i,
                    _ => true,
                });
                if interior_short {
                    out.push(Bump {
                        start: i,
                        end: j,
                        direction: w[i],
                    });
                }
            }
        }
        last_of_pair[k] = Some(j);
        last[k][y.is_conjugate() as usize] = Some(j);
    }
    out
}

/// Whether `bp` is a bump of `w`, checked directly in `O(bp.len())`.
pub fn is_bump(w: &[Letter], bp: &Bump) -> bool {
    if bp.start >= bp.end || bp.end >= w.len() {
        return false;
    }
    let x = bp.direction;
    if w[bp.start] != x || w[bp.end] != x.conjugate() {
        return false;
    }
    let interior = &w[bp.start + 1..bp.end];
    interior.iter().all(|y| !y.same_pair(x)) && is_short(interior)
}

/// Inclusive factor `w[i..=j]`, clamped at the end of the word; empty when `j < i`.
pub fn factor(w: &[Letter], i: usize, j: usize) -> Word {
    if w.is_empty() || j < i || i >= w.len() {
        return Word::new();
    }
    let j = j.min(w.len() - 1);
    Word(w[i..=j].to_vec())
}

/// Removes the letters at the listed positions; out-of-range indices are ignored.
pub fn remove_indices<I>(w: &[Letter], indices: I) -> Word
where
    I: IntoIterator<Item = usize>,
{
    let mut drop: Vec<usize> = indices.into_iter().filter(|&k| k < w.len()).collect();
    drop.sort_unstable();
    drop.dedup();
    let mut out = Vec::with_capacity(w.len() - drop.len());
    let mut from = 0;
    for k in drop {
        out.extend_from_slice(&w[from..k]);
        from = k + 1;
    }
    out.extend_from_slice(&w[from..]);
    Word(out)
}

pub fn reverse(w: &[Letter]) -> Word {
    w.iter().rev().copied().collect()
}

/// `p` is a left factor of `q`.
pub fn is_prefix(p: &[Letter], q: &[Letter]) -> bool {
    q.starts_with(p)
}
