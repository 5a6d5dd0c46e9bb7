//! Non-commutative terms: words over the alphabet `X1..Xn`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::parse_power;

/// A word over `nvars` letters; the empty word is the term `1`.
///
/// The derived order compares length first and then letters left to right,
/// which is exactly the default [`WordOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    nvars: usize,
    letters: Vec<u32>,
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then(self.nvars.cmp(&other.nvars))
    }
}

impl Word {
    /// A word from 0-based letter indices.
    pub fn new(nvars: usize, letters: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= nvars) {
            return Err(Error::VariableOutOfRange {
                index: bad as usize,
                nvars,
            });
        }
        Ok(Word { nvars, letters })
    }

    pub fn empty(nvars: usize) -> Self {
        Word {
            nvars,
            letters: Vec::new(),
        }
    }

    pub fn letter(nvars: usize, l: u32) -> Result<Self> {
        Word::new(nvars, vec![l])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check(&self, other: &Word) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    /// The product `l * m * r`.
    pub fn concat(l: &Word, m: &Word, r: &Word) -> Result<Word> {
        l.check(m)?;
        l.check(r)?;
        Ok(Self::concat_raw(l, m, r))
    }

    pub(crate) fn concat_raw(l: &Word, m: &Word, r: &Word) -> Word {
        let mut letters = Vec::with_capacity(l.len() + m.len() + r.len());
        letters.extend_from_slice(&l.letters);
        letters.extend_from_slice(&m.letters);
        letters.extend_from_slice(&r.letters);
        Word {
            nvars: l.nvars,
            letters,
        }
    }

    pub(crate) fn slice(&self, from: usize, to: usize) -> Word {
        Word {
            nvars: self.nvars,
            letters: self.letters[from..to].to_vec(),
        }
    }

    /// Every way of writing `w = prefix * pattern * suffix`, left to right.
    pub fn subword_occurrences(pattern: &Word, w: &Word) -> Vec<(Word, Word)> {
        Self::positions(pattern, w)
            .map(|i| (w.slice(0, i), w.slice(i + pattern.len(), w.len())))
            .collect()
    }

    pub(crate) fn positions<'a>(
        pattern: &'a Word,
        w: &'a Word,
    ) -> impl Iterator<Item = usize> + 'a {
        let (p, n) = (pattern.len(), w.len());
        (0..(n + 1).saturating_sub(p)).filter(move |&i| w.letters[i..i + p] == pattern.letters[..])
    }

    /// Leftmost position where `pattern` occurs as a factor.
    pub fn find_factor(&self, pattern: &Word) -> Option<usize> {
        Self::positions(pattern, self).next()
    }

    pub fn contains_factor(&self, pattern: &Word) -> bool {
        self.find_factor(pattern).is_some()
    }

    /// `w = X_l * rest`.
    pub fn split_left(&self) -> Option<(u32, Word)> {
        let (&first, rest) = self.letters.split_first()?;
        Some((
            first,
            Word {
                nvars: self.nvars,
                letters: rest.to_vec(),
            },
        ))
    }

    /// `w = rest * X_r`.
    pub fn split_right(&self) -> Option<(Word, u32)> {
        let (&last, rest) = self.letters.split_last()?;
        Some((
            Word {
                nvars: self.nvars,
                letters: rest.to_vec(),
            },
            last,
        ))
    }

    pub fn prepend(&self, l: u32) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(l);
        letters.extend_from_slice(&self.letters);
        Word {
            nvars: self.nvars,
            letters,
        }
    }

    pub fn append(&self, r: u32) -> Word {
        let mut letters = self.letters.clone();
        letters.push(r);
        Word {
            nvars: self.nvars,
            letters,
        }
    }

    /// Parses `X1*X2*X1`; `X1^3` abbreviates three copies of `X1`.
    pub fn parse(text: &str, nvars: usize) -> Result<Word> {
        let text = text.trim();
        let mut letters = Vec::new();
        if text != "1" {
            for factor in text.split('*') {
                let (var, k) = parse_power(factor)?;
                if var >= nvars {
                    return Err(Error::VariableOutOfRange { index: var, nvars });
                }
                letters.extend(std::iter::repeat_n(var as u32, k as usize));
            }
        }
        Ok(Word { nvars, letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "X{}", l + 1)?;
        }
        Ok(())
    }
}

/// Length-graded lexicographic order on words: shorter words are smaller,
/// equal lengths compare letters from the left by variable precedence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordOrder {
    rank: Vec<u32>,
}

impl WordOrder {
    /// Default precedence `X1 < X2 < ... < Xn`.
    pub fn deglex(nvars: usize) -> Self {
        WordOrder {
            rank: (0..nvars as u32).collect(),
        }
    }

    /// `precedence[r]` is the letter of rank `r` (rank 0 smallest).
    pub fn with_precedence(precedence: &[usize]) -> Result<Self> {
        let mut rank = vec![u32::MAX; precedence.len()];
        for (r, &v) in precedence.iter().enumerate() {
            if v >= rank.len() || rank[v] != u32::MAX {
                return Err(Error::Invalid(format!(
                    "precedence {precedence:?} is not a permutation"
                )));
            }
            rank[v] = r as u32;
        }
        Ok(WordOrder { rank })
    }

    pub fn nvars(&self) -> usize {
        self.rank.len()
    }

    pub fn compare(&self, a: &Word, b: &Word) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            a.letters
                .iter()
                .zip(&b.letters)
                .map(|(x, y)| self.rank[*x as usize].cmp(&self.rank[*y as usize]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    pub(crate) fn is_default(&self) -> bool {
        self.rank.iter().enumerate().all(|(i, &r)| r as usize == i)
    }
}
