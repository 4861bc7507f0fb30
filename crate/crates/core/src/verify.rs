//! Self-checks over the built-in corpus: every worked example is recomputed
//! with both the closed forms and the oracle, plus structural invariants.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closedform::{
    check_no_external, count_closed_dashed2, count_closed_dashless, count_closed_ones, descents_via_complement,
};
use crate::corpus;
use crate::morphism::{Morphism, DEFAULT_CAP};
use crate::oracle::{count_occurrences, CounterRegistry, Exhaustive, Counter};
use crate::pattern::GeneralizedPattern;
use crate::word::Word;
use crate::Count;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, outcome: Result<String, String>) -> Self {
        match outcome {
            Ok(detail) => Check { name, passed: true, detail },
            Err(detail) => Check { name, passed: false, detail },
        }
    }
}

type Outcome = Result<String, String>;

fn pat(s: &str) -> GeneralizedPattern {
    s.parse().expect("built-in pattern")
}

fn big(v: u64) -> Count {
    BigUint::from(v)
}

fn pow(base: u64, exp: u32) -> Count {
    big(base).pow(exp)
}

fn oracle(phi: &Morphism, pattern: &GeneralizedPattern, n: u32) -> Result<Count, String> {
    phi.iterate(n, DEFAULT_CAP)
        .map(|w| count_occurrences(pattern, &w))
        .map_err(|e| e.to_string())
}

/// Closed form, oracle and a printed formula must all agree for each `n`.
fn three_way(
    phi: &Morphism,
    pattern: &str,
    range: std::ops::RangeInclusive<u32>,
    closed: impl Fn(&Morphism, &GeneralizedPattern, u32) -> Result<Count, String>,
    printed: impl Fn(u32) -> Count,
) -> Outcome {
    let p = pat(pattern);
    let mut values = Vec::new();
    for n in range {
        let c = closed(phi, &p, n)?;
        let o = oracle(phi, &p, n)?;
        let f = printed(n);
        if c != o || o != f {
            return Err(format!("{pattern} at n={n}: closed {c}, oracle {o}, formula {f}"));
        }
        values.push(o.to_string());
    }
    Ok(format!("{pattern}: {}", values.join(", ")))
}

fn dashed(phi: &Morphism, p: &GeneralizedPattern, n: u32) -> Result<Count, String> {
    count_closed_dashed2(phi, p, n).map_err(|r| r.to_string())
}

fn dashless(phi: &Morphism, p: &GeneralizedPattern, n: u32) -> Result<Count, String> {
    count_closed_dashless(phi, p, n).map_err(|r| r.to_string())
}

fn rises_and_falls() -> Outcome {
    let phi = corpus::phi_w();
    let up = three_way(&phi, "1-2", 2..=7, dashed, |n| (3u32 * pow(4, n - 1) + pow(2, n)) / 2u32)?;
    let first = dashed(&phi, &pat("1-2"), 1)?;
    if first != big(3) {
        return Err(format!("1-2 at n=1: {first}, expected 3"));
    }
    Ok(up)
}

fn inversions() -> Outcome {
    let phi = corpus::phi_w();
    let down = three_way(&phi, "2-1", 2..=7, dashed, |n| (3u32 * pow(4, n - 1) - pow(2, n)) / 2u32)?;
    let first = dashed(&phi, &pat("2-1"), 1)?;
    if first != big(0) {
        return Err(format!("2-1 at n=1: {first}, expected 0"));
    }
    Ok(down)
}

fn growth9() -> Outcome {
    three_way(&corpus::growth9(), "1-2", 2..=5, dashed, |n| {
        5u32 * pow(9, n - 1) + 2u32 * pow(3, n - 2)
    })
}

fn erasing_discrepancy() -> Outcome {
    let phi = corpus::erasing4();
    let p = pat("1-2");
    let mut parts = Vec::new();
    for n in 2..=4 {
        let c = dashed(&phi, &p, n)?;
        let o = oracle(&phi, &p, n)?;
        let printed = 3u32 * pow(4, n - 1) + 11u32 * pow(2, n - 2);
        if c != o {
            return Err(format!("n={n}: formula {c} but oracle {o}"));
        }
        if c == printed {
            return Err(format!("n={n}: printed value {printed} unexpectedly matches"));
        }
        parts.push(format!("n={n} formula=oracle={o}; printed={printed}"));
    }
    Ok(format!("{} (documented discrepancy)", parts.join(", ")))
}

fn ones() -> Outcome {
    let phi = corpus::phi_w();
    three_way(
        &phi,
        "1-1-1-1",
        1..=6,
        |phi, _, n| count_closed_ones(phi, 4, n).map_err(|e| e.to_string()),
        |n| 3u32 * binomial(pow(2, n - 1), big(4)),
    )
}

fn dashless_phi_w() -> Outcome {
    let phi = corpus::phi_w();
    let rises = three_way(&phi, "12", 2..=7, dashless, |n| 3u32 * pow(2, n - 2))?;
    let runs = three_way(&phi, "123", 2..=7, dashless, |n| pow(2, n - 2))?;
    let descents = three_way(
        &phi,
        "21",
        2..=7,
        |phi, _, n| descents_via_complement(phi, n, DEFAULT_CAP).map_err(|r| r.to_string()),
        |n| 3u32 * pow(2, n - 2) - 1u32,
    )?;
    Ok(format!("{rises}; {runs}; {descents}"))
}

fn dashless4() -> Outcome {
    let phi = corpus::dashless4();
    let runs = three_way(&phi, "123", 1..=6, dashless, |n| pow(2, n - 1))?;
    for p in ["321", "132", "231"] {
        let report = check_no_external(&phi, &pat(p));
        if report.witnesses().next().is_none() {
            return Err(format!("{p} approved, expected a witness"));
        }
    }
    let report = check_no_external(&phi, &pat("321"));
    let spans = |needle: &[u32]| {
        report
            .witnesses()
            .any(|w| w.context.letters().windows(3).any(|f| f == needle) && w.occurrence.letters() == needle)
    };
    if !spans(&[4, 3, 1]) {
        return Err("no 321 witness covers 431".into());
    }
    let zero = three_way(&phi, "213", 1..=6, dashless, |_| big(0))?;
    Ok(format!("{runs}; 321, 132, 231 declined; {zero}"))
}

fn structure() -> Outcome {
    let mut checked = 0;
    for entry in corpus::all() {
        let phi = entry.morphism;
        let profile = phi.validate();
        if !profile.is_valid() {
            continue;
        }
        let ratio = profile.ratio();
        for n in 1..=7u32 {
            let Ok(w) = phi.iterate(n, DEFAULT_CAP) else { continue };
            let predicted = phi.predicted_length(n).map_err(|e| e.to_string())?;
            if big(w.len() as u64) != predicted {
                return Err(format!("{}: |phi^{n}(1)| = {} but predicted {predicted}", entry.name, w.len()));
            }
            let each = profile.ell * ratio.pow(n - 1);
            if w.letter_counts(phi.k()).iter().any(|&c| c != each) {
                return Err(format!("{}: letter multiplicities at n={n} are not all {each}", entry.name));
            }
            if n >= 2 {
                let blocks = phi.decompose(n, DEFAULT_CAP).map_err(|e| e.to_string())?;
                if phi.reconstruct(&blocks) != w {
                    return Err(format!("{}: decomposition at n={n} does not reconstruct", entry.name));
                }
                let copies = profile.ell * ratio.pow(n - 2);
                let idx = Word::new(blocks.iter().map(|&b| b as u32).collect()).expect("image indices");
                if idx.letter_counts(phi.k()).iter().any(|&c| c != copies) {
                    return Err(format!("{}: image multiplicity at n={n} is not {copies}", entry.name));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (morphism, n) pairs"))
}

/// `count` random words with letters in `1..=5`, length `0..=30`.
pub fn random_words(seed: u64, count: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=5u32);
            let len = rng.gen_range(0..=30usize);
            Word::new((0..len).map(|_| rng.gen_range(1..=k)).collect()).expect("positive letters")
        })
        .collect()
}

fn conservation() -> Outcome {
    let words = random_words(0x5eed, 1000);
    let reg = CounterRegistry::standard();
    let patterns: Vec<GeneralizedPattern> =
        ["1-2", "2-1", "1-1", "12", "21", "11", "123", "213", "1-1-1"].iter().map(|s| pat(s)).collect();
    for w in &words {
        let c = |s: &str| count_occurrences(&pat(s), w);
        if !w.is_empty() && c("12") + c("21") + c("11") != big(w.len() as u64 - 1) {
            return Err(format!("adjacent conservation fails on {w}"));
        }
        if c("1-2") + c("2-1") + c("1-1") != binomial(big(w.len() as u64), big(2)) {
            return Err(format!("pair conservation fails on {w}"));
        }
        for p in &patterns {
            let fast = reg.select(p).expect("some counter").count(p, w);
            let slow = Exhaustive.count(p, w);
            if fast != slow {
                return Err(format!("{p} on {w}: fast path {fast}, exhaustive {slow}"));
            }
        }
    }
    Ok(format!("{} random words", words.len()))
}

fn square_free() -> Outcome {
    let w = corpus::phi_w().iterate(6, DEFAULT_CAP).map_err(|e| e.to_string())?;
    if w.len() != 96 {
        return Err(format!("length {} instead of 96", w.len()));
    }
    if w.has_square() {
        return Err("found a square".into());
    }
    Ok("phi_w^6(1), 96 letters, no square".into())
}

/// Runs every check in a fixed order.
pub fn run_all() -> Vec<Check> {
    vec![
        Check::new("phi-w 1-2", rises_and_falls()),
        Check::new("phi-w 2-1", inversions()),
        Check::new("growth9 1-2", growth9()),
        Check::new("erasing4 1-2 discrepancy", erasing_discrepancy()),
        Check::new("phi-w 1-1-1-1", ones()),
        Check::new("phi-w 12, 123, 21", dashless_phi_w()),
        Check::new("dashless4 123, 321, 132, 231, 213", dashless4()),
        Check::new("structural invariants", structure()),
        Check::new("conservation and fast paths", conservation()),
        Check::new("square-free prefix", square_free()),
    ]
}
