//! Generalized patterns: blocks of letters that must match consecutive
//! positions, separated by dashes that allow gaps.
//!
//! Repeated pattern letters require equal word letters, and distinct pattern
//! letters require word letters in the same strict order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedPattern {
    blocks: Vec<Vec<Letter>>,
    letters: Vec<Letter>,
}

impl GeneralizedPattern {
    pub fn from_blocks(blocks: Vec<Vec<Letter>>) -> Result<Self> {
        let text = render_blocks(&blocks);
        let bad = |reason: String| Error::PatternSyntax {
            text: text.clone(),
            reason,
        };
        if blocks.is_empty() {
            return Err(bad("pattern is empty".into()));
        }
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(bad("empty block".into()));
        }
        let letters: Vec<Letter> = blocks.iter().flatten().copied().collect();
        if letters.contains(&0) {
            return Err(bad("letter 0 is not allowed".into()));
        }
        let m = letters.iter().copied().max().unwrap_or(0);
        let mut seen = vec![false; m as usize];
        for &a in &letters {
            seen[a as usize - 1] = true;
        }
        if let Some(gap) = seen.iter().position(|s| !s) {
            return Err(bad(format!(
                "letters must be exactly 1..{m}, but {} is missing",
                gap + 1
            )));
        }
        Ok(GeneralizedPattern { blocks, letters })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::PatternSyntax {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if text.is_empty() {
            return Err(bad("pattern is empty"));
        }
        let mut blocks = Vec::new();
        for chunk in text.split('-') {
            if chunk.is_empty() {
                return Err(bad("empty block"));
            }
            let mut block = Vec::with_capacity(chunk.len());
            for c in chunk.chars() {
                match c.to_digit(10) {
                    Some(0) => return Err(bad("letter 0 is not allowed")),
                    Some(d) => block.push(d),
                    None => return Err(bad(&format!("unexpected character {c:?}"))),
                }
            }
            blocks.push(block);
        }
        GeneralizedPattern::from_blocks(blocks).map_err(|e| match e {
            Error::PatternSyntax { reason, .. } => bad(&reason),
            other => other,
        })
    }

    pub fn blocks(&self) -> &[Vec<Letter>] {
        &self.blocks
    }

    /// All letters in reading order, dashes dropped.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of distinct letters `m`.
    pub fn alphabet_size(&self) -> Letter {
        self.letters.iter().copied().max().unwrap_or(0)
    }

    pub fn is_dashless(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_all_ones(&self) -> bool {
        self.letters.iter().all(|&a| a == 1)
    }

    /// `1-1-...-1` with `r` blocks: every block is the single letter 1.
    pub fn is_classical_ones(&self) -> bool {
        self.blocks.iter().all(|b| b.as_slice() == [1])
    }

    /// `1-2` or `2-1`.
    pub fn is_dashed_pair(&self) -> bool {
        matches!(self.blocks.as_slice(), [a, b] if a.len() == 1 && b.len() == 1 && a[0] != b[0])
    }

    /// Whether the word letters at `positions` form an occurrence.
    ///
    /// Panics if `positions` has the wrong length or is not strictly
    /// increasing inside `w`.
    pub fn is_occurrence(&self, w: &Word, positions: &[usize]) -> bool {
        assert_eq!(positions.len(), self.len(), "one position per pattern letter");
        assert!(
            positions.windows(2).all(|p| p[0] < p[1]),
            "positions must be strictly increasing"
        );
        if let Some(&last) = positions.last() {
            assert!(last < w.len(), "position {last} out of range");
        }

        let mut offset = 0;
        for block in &self.blocks {
            let run = &positions[offset..offset + block.len()];
            if run.windows(2).any(|p| p[1] != p[0] + 1) {
                return false;
            }
            offset += block.len();
        }

        let values: Vec<Letter> = positions.iter().map(|&i| w[i]).collect();
        order_isomorphic(&self.letters, &values)
    }
}

/// `a` and `b` have the same pairwise comparisons (including equalities).
pub fn order_isomorphic(a: &[Letter], b: &[Letter]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    (0..a.len()).all(|x| (x + 1..a.len()).all(|y| a[x].cmp(&a[y]) == b[x].cmp(&b[y])))
}

fn render_blocks(blocks: &[Vec<Letter>]) -> String {
    let mut s = String::new();
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            s.push('-');
        }
        for a in block {
            s.push_str(&a.to_string());
        }
    }
    s
}

impl fmt::Display for GeneralizedPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_blocks(&self.blocks))
    }
}

impl FromStr for GeneralizedPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneralizedPattern::parse(s)
    }
}
