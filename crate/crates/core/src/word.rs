//! Finite words over the positive integers.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

pub type Letter = u32;

/// A finite, possibly empty, sequence of letters `>= 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::ZeroLetter);
        }
        Ok(Word(letters))
    }

    /// Parses either a run of digits (`"123"`), space-separated integers
    /// (`"10 2 3"`), or `"."` for the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "." || text.is_empty() {
            return Ok(Word::empty());
        }
        let bad = |reason: &str| Error::WordSyntax {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let letters = if text.contains(char::is_whitespace) {
            text.split_whitespace()
                .map(|tok| tok.parse::<Letter>().map_err(|_| bad("expected integers")))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| bad("expected digits")))
                .collect::<Result<Vec<_>>>()?
        };
        Word::new(letters)
    }

    /// Whitespace-separated integers only; `"."` or blank is the empty word.
    pub fn parse_integers(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "." || text.is_empty() {
            return Ok(Word::empty());
        }
        let letters = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Letter>().map_err(|_| Error::WordSyntax {
                    text: text.to_string(),
                    reason: format!("expected an integer, got {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn max_letter(&self) -> Letter {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn concat<'a, I>(parts: I) -> Word
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let mut out = Vec::new();
        for p in parts {
            out.extend_from_slice(&p.0);
        }
        Word(out)
    }

    /// Multiplicity of every letter `1..=k`; index 0 is letter 1.
    pub fn letter_counts(&self, k: usize) -> Vec<u64> {
        let mut counts = vec![0u64; k];
        for &a in &self.0 {
            if let Some(slot) = counts.get_mut(a as usize - 1) {
                *slot += 1;
            }
        }
        counts
    }

    /// True iff the word has a factor `XX` with `X` nonempty.
    pub fn has_square(&self) -> bool {
        let w = &self.0;
        (1..=w.len() / 2).any(|half| {
            (0..=w.len() - 2 * half).any(|start| w[start..start + half] == w[start + half..start + 2 * half])
        })
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl Index<usize> for Word {
    type Output = Letter;

    fn index(&self, i: usize) -> &Letter {
        &self.0[i]
    }
}

impl fmt::Display for Word {
    /// Digits when every letter is below 10, space-separated integers otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&a| a <= 9) {
            for a in &self.0 {
                write!(f, "{a}")?;
            }
        } else {
            for (i, a) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}
