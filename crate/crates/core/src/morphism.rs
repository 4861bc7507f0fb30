//! Substitution systems `i -> X_i` over the alphabet `1..=k`, their finite
//! approximations `phi^n(1)`, and the uniformity preconditions shared by the
//! closed forms.
//!
//! A morphism is *uniform* when `X_1` starts with 1 and holds `l` copies of
//! every letter, and the concatenation `X_2 X_3 ... X_k` holds `d` copies of
//! every letter. Then `phi^n(1)` holds `l (d + l)^(n-2)` copies of each image
//! (for `n >= 2`) in some order, and `l (d + l)^(n-1)` copies of each letter.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::word::Word;
use crate::Count;

/// Materialization limit used when the caller does not pick one.
pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityProfile {
    /// Copies of each letter in `X_1`.
    pub ell: u64,
    /// Copies of each letter in `X_2 ... X_k`.
    pub d: u64,
    pub violations: Vec<String>,
}

impl UniformityProfile {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Growth ratio of letter counts per iteration.
    pub fn ratio(&self) -> u64 {
        self.d + self.ell
    }
}

impl Morphism {
    /// Builds a morphism from images `X_1..X_k` (index 0 is `X_1`).
    pub fn new(images: Vec<Word>) -> Result<Self> {
        let k = images.len();
        if k < 2 {
            return Err(Error::InvalidMorphism(format!(
                "alphabet size must be at least 2, got {k}"
            )));
        }
        if images[0].first() != Some(1) {
            return Err(Error::InvalidMorphism("X_1 must begin with the letter 1".into()));
        }
        for (i, x) in images.iter().enumerate() {
            if let Some(&a) = x.letters().iter().find(|&&a| a as usize > k) {
                return Err(Error::InvalidMorphism(format!(
                    "X_{} contains letter {a}, outside 1..{k}",
                    i + 1
                )));
            }
        }
        Ok(Morphism { images })
    }

    pub fn k(&self) -> usize {
        self.images.len()
    }

    /// `X_i`, 1-based.
    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn validate(&self) -> UniformityProfile {
        let k = self.k();
        let mut violations = Vec::new();

        let head = self.images[0].letter_counts(k);
        let ell = head[0];
        for (a, &c) in head.iter().enumerate() {
            if c != ell {
                violations.push(format!(
                    "letter {} occurs {c} times in X_1 but letter 1 occurs {ell} times",
                    a + 1
                ));
            }
        }

        let tail = Word::concat(&self.images[1..]).letter_counts(k);
        let d = tail[0];
        for (a, &c) in tail.iter().enumerate() {
            if c != d {
                violations.push(format!(
                    "letter {} occurs {c} times in X_2..X_{k} but letter 1 occurs {d} times",
                    a + 1
                ));
            }
        }

        UniformityProfile { ell, d, violations }
    }

    fn require_uniform(&self) -> Result<UniformityProfile> {
        let profile = self.validate();
        if profile.is_valid() {
            Ok(profile)
        } else {
            Err(Error::NotUniform(profile.violations))
        }
    }

    /// Applies the morphism once.
    pub fn apply(&self, w: &Word) -> Word {
        Word::concat(w.letters().iter().map(|&a| self.image(a as usize)))
    }

    /// Exact letter count vector of `phi^n(1)`, saturating at `u128::MAX`.
    fn count_vector(&self, n: u32) -> Vec<u128> {
        let k = self.k();
        let table: Vec<Vec<u64>> = self.images.iter().map(|x| x.letter_counts(k)).collect();
        let mut counts = vec![0u128; k];
        counts[0] = 1;
        for _ in 0..n {
            let mut next = vec![0u128; k];
            for (i, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (j, &m) in table[i].iter().enumerate() {
                    next[j] = next[j].saturating_add(c.saturating_mul(m as u128));
                }
            }
            counts = next;
        }
        counts
    }

    /// Length of `phi^n(1)` for any morphism, uniform or not.
    pub fn length_of(&self, n: u32) -> u128 {
        self.count_vector(n)
            .into_iter()
            .fold(0u128, |acc, c| acc.saturating_add(c))
    }

    /// Materializes `phi^n(1)`; `phi^0(1) = 1`.
    pub fn iterate(&self, n: u32, cap: usize) -> Result<Word> {
        let predicted = self.length_of(n);
        if predicted > cap as u128 {
            return Err(Error::CapExceeded { n, predicted, cap });
        }
        let mut w = Word::new(vec![1]).expect("1 is a letter");
        for _ in 0..n {
            w = self.apply(&w);
        }
        Ok(w)
    }

    /// `|phi^n(1)| = k l (d + l)^(n-1)`.
    pub fn predicted_length(&self, n: u32) -> Result<Count> {
        let profile = self.require_uniform()?;
        check_n(n, 1)?;
        Ok(BigUint::from(self.k()) * copies_of_each_letter(&profile, n))
    }

    /// Multiplicity of every letter in `phi^n(1)`: `l` at `n = 1`, then
    /// `l (d + l)^(n-1)`.
    pub fn letter_counts(&self, n: u32) -> Result<Vec<Count>> {
        let profile = self.require_uniform()?;
        check_n(n, 1)?;
        Ok(vec![copies_of_each_letter(&profile, n); self.k()])
    }

    /// Block structure of `phi^n(1)`: the letters of `phi^(n-1)(1)`, each
    /// standing for its image. Empty images still appear as blocks.
    pub fn decompose(&self, n: u32, cap: usize) -> Result<Vec<usize>> {
        self.require_uniform()?;
        check_n(n, 2)?;
        let parent = self.iterate(n - 1, cap)?;
        Ok(parent.letters().iter().map(|&a| a as usize).collect())
    }

    /// Concatenates the images named by `blocks`.
    pub fn reconstruct(&self, blocks: &[usize]) -> Word {
        Word::concat(blocks.iter().map(|&i| self.image(i)))
    }

    /// Parses the plain-text morphism format:
    ///
    /// ```text
    /// # comment
    /// k: 3
    /// 1 -> 123
    /// 2 -> 13
    /// 3 -> 2
    /// ```
    ///
    /// Images are digit strings, space-separated integers, or `.` for the
    /// empty word. With `k >= 10` images are always read as integers, so
    /// `10 -> 10` is the single letter 10.
    pub fn parse(text: &str) -> Result<Self> {
        let mut k: Option<(usize, usize)> = None;
        let mut rules: Vec<Option<(usize, Word)>> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::MorphismParse {
                line: line_no,
                reason,
            };

            if let Some(rest) = line.strip_prefix("k:") {
                if k.is_some() {
                    return Err(err("duplicate header".into()));
                }
                let value: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad alphabet size {:?}", rest.trim())))?;
                if value < 2 {
                    return Err(err(format!("alphabet size must be at least 2, got {value}")));
                }
                k = Some((value, line_no));
                rules = vec![None; value];
                continue;
            }

            let Some((size, _)) = k else {
                return Err(err("expected header `k: <int>` before the rules".into()));
            };
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| err(format!("expected `<i> -> <letters>`, got {line:?}")))?;
            let i: usize = lhs
                .trim()
                .parse()
                .map_err(|_| err(format!("bad letter {:?}", lhs.trim())))?;
            if i == 0 || i > size {
                return Err(err(format!("rule for letter {i}, outside 1..{size}")));
            }
            let image = if size >= 10 {
                Word::parse_integers(rhs)
            } else {
                Word::parse(rhs)
            }
            .map_err(|e| err(e.to_string()))?;
            if let Some(&a) = image.letters().iter().find(|&&a| a as usize > size) {
                return Err(err(format!("image contains letter {a}, outside 1..{size}")));
            }
            if rules[i - 1].is_some() {
                return Err(err(format!("duplicate rule for letter {i}")));
            }
            rules[i - 1] = Some((line_no, image));
        }

        let Some((size, header_line)) = k else {
            return Err(Error::MorphismParse {
                line: text.lines().count().max(1),
                reason: "missing header `k: <int>`".into(),
            });
        };
        let mut images = Vec::with_capacity(size);
        for (i, rule) in rules.into_iter().enumerate() {
            match rule {
                Some((_, w)) => images.push(w),
                None => {
                    return Err(Error::MorphismParse {
                        line: header_line,
                        reason: format!("no rule for letter {}", i + 1),
                    })
                }
            }
        }
        Morphism::new(images)
    }
}

fn check_n(n: u32, min: u32) -> Result<()> {
    if n < min {
        Err(Error::IterationOutOfRange { n, min })
    } else {
        Ok(())
    }
}

fn copies_of_each_letter(profile: &UniformityProfile, n: u32) -> Count {
    BigUint::from(profile.ell) * BigUint::from(profile.ratio()).pow(n - 1)
}

/// Copies of each image `X_i` inside `phi^n(1)` for `n >= 2`: `l (d + l)^(n-2)`.
pub fn copies_of_each_image(profile: &UniformityProfile, n: u32) -> Count {
    debug_assert!(n >= 2);
    if n < 2 {
        return BigUint::one();
    }
    BigUint::from(profile.ell) * BigUint::from(profile.ratio()).pow(n - 2)
}

impl FromStr for Morphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Morphism::parse(s)
    }
}

impl fmt::Display for Morphism {
    /// Renders back to the file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k: {}", self.k())?;
        for (i, x) in self.images.iter().enumerate() {
            if x.is_empty() {
                writeln!(f, "{} -> .", i + 1)?;
            } else {
                writeln!(f, "{} -> {x}", i + 1)?;
            }
        }
        Ok(())
    }
}
