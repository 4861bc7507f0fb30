//! Definition-level occurrence counting.
//!
//! Every counter implements [`Counter`] and is registered by name in a
//! [`CounterRegistry`]. The exhaustive enumerator handles any pattern; the
//! scanners are fast paths for the shapes the closed forms care about and
//! must agree with it.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::pattern::{order_isomorphic, GeneralizedPattern};
use crate::word::{Letter, Word};
use crate::Count;

pub trait Counter: Send + Sync {
    fn name(&self) -> &'static str;

    fn supports(&self, pattern: &GeneralizedPattern) -> bool;

    /// Number of occurrences of `pattern` in `w`. Callers must check
    /// [`Counter::supports`] first.
    fn count(&self, pattern: &GeneralizedPattern, w: &Word) -> Count;
}

/// Places blocks left to right, each on a consecutive run, checking the
/// order relation incrementally. Works for every pattern; cost grows like
/// `|w|^(number of blocks)`, so keep `|w|` to a few hundred letters for
/// patterns with several dashes.
pub struct Exhaustive;

/// Prefix letter counts for `1-2`, `2-1` and `1-1`: `O(|w| k)`.
pub struct DashedPairScan;

/// Sliding window for single-block patterns: `O(|w| |pattern|^2)`.
pub struct DashlessScan;

impl Counter for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn supports(&self, _: &GeneralizedPattern) -> bool {
        true
    }

    fn count(&self, pattern: &GeneralizedPattern, w: &Word) -> Count {
        let mut search = Search {
            pattern: pattern.letters(),
            blocks: pattern.blocks(),
            word: w.letters(),
            values: Vec::with_capacity(pattern.len()),
            found: 0,
        };
        let remaining = pattern.len();
        search.place(0, 0, remaining);
        BigUint::from(search.found)
    }
}

struct Search<'a> {
    pattern: &'a [Letter],
    blocks: &'a [Vec<Letter>],
    word: &'a [Letter],
    values: Vec<Letter>,
    found: u128,
}

impl Search<'_> {
    fn consistent(&self, value: Letter) -> bool {
        let t = self.values.len();
        let letter = self.pattern[t];
        self.values
            .iter()
            .zip(self.pattern)
            .all(|(&v, &p)| p.cmp(&letter) == v.cmp(&value))
    }

    fn place(&mut self, block: usize, min_start: usize, remaining: usize) {
        if block == self.blocks.len() {
            self.found += 1;
            return;
        }
        let len = self.blocks[block].len();
        if self.word.len() < remaining {
            return;
        }
        let last_start = self.word.len() - remaining;
        for start in min_start..=last_start {
            let depth = self.values.len();
            let mut ok = true;
            for offset in 0..len {
                let value = self.word[start + offset];
                if !self.consistent(value) {
                    ok = false;
                    break;
                }
                self.values.push(value);
            }
            if ok {
                self.place(block + 1, start + len, remaining - len);
            }
            self.values.truncate(depth);
        }
    }
}

impl Counter for DashedPairScan {
    fn name(&self) -> &'static str {
        "dashed-pair-scan"
    }

    fn supports(&self, pattern: &GeneralizedPattern) -> bool {
        pattern.blocks().len() == 2 && pattern.blocks().iter().all(|b| b.len() == 1)
    }

    fn count(&self, pattern: &GeneralizedPattern, w: &Word) -> Count {
        let (first, second) = (pattern.letters()[0], pattern.letters()[1]);
        let mut seen = vec![0u128; w.max_letter() as usize + 1];
        let mut total = 0u128;
        for &b in w.letters() {
            let b = b as usize;
            total += match first.cmp(&second) {
                std::cmp::Ordering::Less => seen[..b].iter().sum::<u128>(),
                std::cmp::Ordering::Greater => seen[b + 1..].iter().sum::<u128>(),
                std::cmp::Ordering::Equal => seen[b],
            };
            seen[b] += 1;
        }
        BigUint::from(total)
    }
}

impl Counter for DashlessScan {
    fn name(&self) -> &'static str {
        "dashless-scan"
    }

    fn supports(&self, pattern: &GeneralizedPattern) -> bool {
        pattern.is_dashless()
    }

    fn count(&self, pattern: &GeneralizedPattern, w: &Word) -> Count {
        let p = pattern.letters();
        let hits = w
            .letters()
            .windows(p.len())
            .filter(|window| order_isomorphic(p, window))
            .count();
        BigUint::from(hits)
    }
}

/// Named counters, tried in registration order by [`CounterRegistry::select`].
pub struct CounterRegistry {
    counters: Vec<Box<dyn Counter>>,
}

impl CounterRegistry {
    pub fn empty() -> Self {
        CounterRegistry { counters: Vec::new() }
    }

    /// Fast paths first, the exhaustive enumerator last.
    pub fn standard() -> Self {
        let mut reg = CounterRegistry::empty();
        reg.register(Box::new(DashedPairScan));
        reg.register(Box::new(DashlessScan));
        reg.register(Box::new(Exhaustive));
        reg
    }

    pub fn register(&mut self, counter: Box<dyn Counter>) {
        self.counters.retain(|c| c.name() != counter.name());
        self.counters.push(counter);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.counters.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Counter> {
        self.counters
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn select(&self, pattern: &GeneralizedPattern) -> Option<&dyn Counter> {
        self.counters
            .iter()
            .find(|c| c.supports(pattern))
            .map(|c| c.as_ref())
    }
}

impl fmt::Debug for CounterRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// Occurrences of `pattern` in `w`, using the fastest applicable counter.
pub fn count_occurrences(pattern: &GeneralizedPattern, w: &Word) -> Count {
    thread_local! {
        static REGISTRY: CounterRegistry = CounterRegistry::standard();
    }
    REGISTRY.with(|reg| {
        reg.select(pattern)
            .expect("exhaustive counter supports every pattern")
            .count(pattern, w)
    })
}

/// Occurrences lying entirely inside the image `x` (`s_i`).
pub fn count_internal(pattern: &GeneralizedPattern, x: &Word) -> Count {
    count_occurrences(pattern, x)
}

/// Pairs `(a in x, b in y)` related as in `1-2` (`a < b`) or `2-1` (`a > b`).
/// With `x` placed before `y`, this is the number of occurrences that start
/// in `x` and end in `y`.
pub fn count_external_dashed2(pattern: &GeneralizedPattern, x: &Word, y: &Word) -> Result<Count> {
    if !pattern.is_dashed_pair() {
        return Err(Error::UnsupportedPattern {
            pattern: pattern.to_string(),
            reason: "expected 1-2 or 2-1".into(),
        });
    }
    let ascending = pattern.letters()[0] < pattern.letters()[1];
    let mut total = 0u128;
    for &a in x.letters() {
        for &b in y.letters() {
            if (ascending && a < b) || (!ascending && a > b) {
                total += 1;
            }
        }
    }
    Ok(BigUint::from(total))
}

/// Start offsets (into `x·middle·y`) of dashless occurrences that begin in
/// `x` and end in `y`, possibly using letters of `middle`.
pub fn external_placements_dashless(
    pattern: &GeneralizedPattern,
    x: &Word,
    middle: &Word,
    y: &Word,
) -> Result<Vec<usize>> {
    if !pattern.is_dashless() {
        return Err(Error::UnsupportedPattern {
            pattern: pattern.to_string(),
            reason: "expected a pattern without dashes".into(),
        });
    }
    let context = Word::concat([x, middle, y]);
    let p = pattern.letters();
    let y_start = x.len() + middle.len();
    let placements = (0..x.len())
        .filter(|&start| {
            let end = start + p.len() - 1;
            end >= y_start
                && end < context.len()
                && order_isomorphic(p, &context.letters()[start..=end])
        })
        .collect();
    Ok(placements)
}

pub fn count_external_dashless(
    pattern: &GeneralizedPattern,
    x: &Word,
    middle: &Word,
    y: &Word,
) -> Result<Count> {
    external_placements_dashless(pattern, x, middle, y).map(|v| BigUint::from(v.len()))
}
