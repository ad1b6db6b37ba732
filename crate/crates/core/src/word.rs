//! Reduced words in a free group of rank at most 26.
//!
//! Letters are written `a..z` for generators and `A..Z` for their inverses,
//! so `"aB"` is `a·b⁻¹`. The identity is written `1`.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_RANK: u8 = 26;

/// A generator or inverse generator: `+i` is generator `i`, `-i` its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i8);

impl Letter {
    pub fn new(generator: u8, inverse: bool) -> Letter {
        assert!((1..=MAX_RANK).contains(&generator), "generator index {generator}");
        let g = generator as i8;
        Letter(if inverse { -g } else { g })
    }

    pub fn from_signed(value: i8) -> Option<Letter> {
        if value != 0 && value.unsigned_abs() <= MAX_RANK {
            Some(Letter(value))
        } else {
            None
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Some(Letter::new(c as u8 - b'a' + 1, false)),
            'A'..='Z' => Some(Letter::new(c as u8 - b'A' + 1, true)),
            _ => None,
        }
    }

    /// Generator index, starting at 1.
    pub fn generator(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn signed(self) -> i8 {
        self.0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator() - 1) as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word in `F_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    rank: u8,
    letters: Vec<Letter>,
}

fn check_rank(rank: usize) -> Result<u8> {
    if (1..=MAX_RANK as usize).contains(&rank) {
        Ok(rank as u8)
    } else {
        Err(Error::InvalidRank(rank))
    }
}

impl FreeWord {
    pub fn identity(rank: u8) -> FreeWord {
        FreeWord {
            rank,
            letters: Vec::new(),
        }
    }

    /// Freely reduces `letters`, rejecting generators beyond `rank`.
    pub fn reduce<I>(rank: usize, letters: I) -> Result<FreeWord>
    where
        I: IntoIterator<Item = Letter>,
    {
        let rank = check_rank(rank)?;
        let mut w = FreeWord::identity(rank);
        for l in letters {
            if l.generator() > rank {
                return Err(Error::GeneratorOutOfRange {
                    index: l.generator() as usize,
                    rank,
                });
            }
            w.push(l);
        }
        Ok(w)
    }

    pub fn generator(rank: u8, index: u8) -> Result<FreeWord> {
        if index == 0 || index > rank {
            return Err(Error::GeneratorOutOfRange {
                index: index as usize,
                rank,
            });
        }
        FreeWord::reduce(rank as usize, [Letter::new(index, false)])
    }

    /// Parses letter syntax; whitespace is ignored and `1` denotes the identity.
    pub fn parse(text: &str, rank: usize) -> Result<FreeWord> {
        let trimmed = text.trim();
        if trimmed == "1" {
            return FreeWord::reduce(rank, []);
        }
        let mut letters = Vec::with_capacity(trimmed.len());
        for c in trimmed.chars().filter(|c| !c.is_whitespace()) {
            let l = Letter::from_char(c).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("unexpected character {c:?} in word {trimmed:?}"),
            })?;
            letters.push(l);
        }
        FreeWord::reduce(rank, letters)
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Right-multiplies by one letter, cancelling if needed.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    /// In-place right multiplication by a reduced word.
    pub fn append(&mut self, other: &FreeWord) -> Result<()> {
        self.same_rank(other)?;
        for &l in &other.letters {
            self.push(l);
        }
        Ok(())
    }

    pub fn mul(&self, other: &FreeWord) -> Result<FreeWord> {
        let mut w = self.clone();
        w.append(other)?;
        Ok(w)
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, exponent: i64) -> FreeWord {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut w = FreeWord::identity(self.rank);
        for _ in 0..exponent.unsigned_abs() {
            for &l in &base.letters {
                w.push(l);
            }
        }
        w
    }

    pub fn common_prefix_len(&self, other: &FreeWord) -> usize {
        self.letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Word-metric distance `|self⁻¹ other|` between two vertices of the Cayley tree.
    pub fn tree_distance(&self, other: &FreeWord) -> usize {
        let p = self.common_prefix_len(other);
        self.len() + other.len() - 2 * p
    }

    /// The conjugate obtained by stripping matching first/last letter pairs.
    pub fn cyclically_reduce(&self) -> FreeWord {
        let ls = &self.letters;
        let (mut lo, mut hi) = (0, ls.len());
        while hi - lo >= 2 && ls[lo] == ls[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        FreeWord {
            rank: self.rank,
            letters: ls[lo..hi].to_vec(),
        }
    }

    fn same_rank(&self, other: &FreeWord) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::VariantMismatch {
                left: "word of one rank",
                right: "word of another rank",
            })
        }
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Every reduced word of length exactly `len` in `F_rank`, in lexicographic
/// order of signed letters.
pub fn reduced_words_of_length(rank: u8, len: usize) -> Vec<FreeWord> {
    let alphabet: Vec<Letter> = (1..=rank)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out = vec![FreeWord::identity(rank)];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * (alphabet.len() - 1).max(1));
        for w in &out {
            for &l in &alphabet {
                if w.letters.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.letters.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out
}
