//! Closed-form occurrence counts for uniform morphisms.
//!
//! Three formulas are available, each behind [`ClosedForm`]:
//!
//! * `dashed-pair` for `1-2` and `2-1`, from the internal counts `s_i`, the
//!   self-external counts `e_i` and the pairwise external counts `e_{i,j}`;
//! * `classical-ones` for `1-1-...-1`, a binomial in the letter multiplicity;
//! * `dashless` for single-block patterns that never straddle two images.
//!
//! Every precondition is checked. When one fails the formula is declined with
//! an [`ApplicabilityReport`] that says why, and the oracle remains the way to
//! get a number.
//!
//! All formulas use `c = l (d + l)^(n-2)`, the number of copies of each image
//! in `phi^n(1)`. For `l = 1` this is the familiar `(d + l)^(n-2)`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::One;

use crate::error::{Error, Result};
use crate::morphism::{copies_of_each_image, Morphism, UniformityProfile};
use crate::oracle::{count_external_dashed2, count_internal, count_occurrences, external_placements_dashless};
use crate::pattern::GeneralizedPattern;
use crate::word::Word;
use crate::Count;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternStats {
    /// Internal occurrences in each image.
    pub s: Vec<Count>,
    /// Occurrences starting in one copy of `X_i` and ending in a later copy.
    pub e: Vec<Count>,
    /// `external[i][j]`: occurrences starting in `X_{i+1}` and ending in a
    /// later `X_{j+1}`. The diagonal repeats `e`.
    pub external: Vec<Vec<Count>>,
}

impl PatternStats {
    pub fn k(&self) -> usize {
        self.s.len()
    }

    /// `e_{i,j}`, 1-based.
    pub fn pair(&self, i: usize, j: usize) -> &Count {
        &self.external[i - 1][j - 1]
    }

    /// Pairs `i < j` (1-based) with `e_{i,j} != e_{j,i}`.
    pub fn asymmetric_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.k();
        let mut out = Vec::new();
        for i in 1..=k {
            for j in i + 1..=k {
                if self.pair(i, j) != self.pair(j, i) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn sum_s(&self) -> Count {
        self.s.iter().sum()
    }

    pub fn sum_e(&self) -> Count {
        self.e.iter().sum()
    }

    /// `sum_{i<j} e_{i,j}`.
    pub fn sum_upper(&self) -> Count {
        let k = self.k();
        (1..=k)
            .flat_map(|i| (i + 1..=k).map(move |j| (i, j)))
            .map(|(i, j)| self.pair(i, j))
            .sum()
    }
}

/// A dashless occurrence that straddles images: it starts in `X_i`, ends in
/// `X_j` and may cover the images listed in `middle` on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalWitness {
    pub i: usize,
    pub j: usize,
    pub middle: Vec<usize>,
    /// `X_i · middle · X_j`.
    pub context: Word,
    /// Offset of the occurrence inside `context`.
    pub start: usize,
    pub occurrence: Word,
}

impl fmt::Display for ExternalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X_{}", self.i)?;
        for m in &self.middle {
            write!(f, " X_{m}")?;
        }
        write!(
            f,
            " X_{} = {} has {} at offset {}",
            self.j, self.context, self.occurrence, self.start
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    MorphismInvalid(Vec<String>),
    PatternShapeUnsupported { pattern: String, expected: &'static str },
    IterationOutOfRange { n: u32, min: u32 },
    ExternalAsymmetry { i: usize, j: usize, forward: Count, backward: Count },
    ExternalOccurrence(ExternalWitness),
    AdjacentEqualLetters { n: u32, position: usize },
    Uncertified(String),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::MorphismInvalid(v) => write!(f, "morphism-invalid: {}", v.join("; ")),
            Reason::PatternShapeUnsupported { pattern, expected } => {
                write!(f, "pattern-shape-unsupported: {pattern} (expected {expected})")
            }
            Reason::IterationOutOfRange { n, min } => {
                write!(f, "iteration-out-of-range: n = {n}, need n >= {min}")
            }
            Reason::ExternalAsymmetry { i, j, forward, backward } => write!(
                f,
                "external-asymmetry: e_{{{i},{j}}} = {forward} but e_{{{j},{i}}} = {backward}"
            ),
            Reason::ExternalOccurrence(w) => write!(f, "external-occurrence-found: {w}"),
            Reason::AdjacentEqualLetters { n, position } => write!(
                f,
                "adjacent-equal-letters: phi^{n}(1) repeats a letter at positions {position} and {}",
                position + 1
            ),
            Reason::Uncertified(why) => write!(f, "uncertified: {why}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApplicabilityReport {
    pub reasons: Vec<Reason>,
}

impl ApplicabilityReport {
    pub fn applicable() -> Self {
        ApplicabilityReport::default()
    }

    pub fn declined(reason: Reason) -> Self {
        ApplicabilityReport { reasons: vec![reason] }
    }

    pub fn is_applicable(&self) -> bool {
        self.reasons.is_empty()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &ExternalWitness> {
        self.reasons.iter().filter_map(|r| match r {
            Reason::ExternalOccurrence(w) => Some(w),
            _ => None,
        })
    }

    fn into_result(self) -> std::result::Result<(), ApplicabilityReport> {
        if self.is_applicable() {
            Ok(())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for ApplicabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reasons.is_empty() {
            return f.write_str("applicable");
        }
        for (idx, r) in self.reasons.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

pub type Closed = std::result::Result<Count, ApplicabilityReport>;

fn uniform(phi: &Morphism) -> std::result::Result<UniformityProfile, Reason> {
    let profile = phi.validate();
    if profile.is_valid() {
        Ok(profile)
    } else {
        Err(Reason::MorphismInvalid(profile.violations))
    }
}

/// `s`, `e` and the ordered external matrix of `1-2` or `2-1` over the images.
pub fn compute_stats(phi: &Morphism, pattern: &GeneralizedPattern) -> Result<PatternStats> {
    let profile = phi.validate();
    if !profile.is_valid() {
        return Err(Error::NotUniform(profile.violations));
    }
    if !pattern.is_dashed_pair() {
        return Err(Error::UnsupportedPattern {
            pattern: pattern.to_string(),
            reason: "expected 1-2 or 2-1".into(),
        });
    }
    let images = phi.images();
    let s = images.iter().map(|x| count_internal(pattern, x)).collect();
    let external: Vec<Vec<Count>> = images
        .iter()
        .map(|x| {
            images
                .iter()
                .map(|y| count_external_dashed2(pattern, x, y))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let e = (0..images.len()).map(|i| external[i][i].clone()).collect();
    Ok(PatternStats { s, e, external })
}

/// `1-2` / `2-1` in `phi^n(1)`: `s_1` at `n = 1`, otherwise
/// `c sum s_i + C(c, 2) sum e_i + c^2 sum_{i<j} e_{i,j}`.
///
/// Requires `e_{i,j} = e_{j,i}` for every pair, because the images are
/// interleaved in an order the formula does not track.
pub fn count_closed_dashed2(phi: &Morphism, pattern: &GeneralizedPattern, n: u32) -> Closed {
    DashedPairFormula.evaluate(phi, pattern, n)
}

/// `1-1-...-1` with `r` blocks: `k C(m, r)` where `m` is the multiplicity of
/// each letter in `phi^n(1)`.
pub fn count_closed_ones(phi: &Morphism, r: usize, n: u32) -> Result<Count> {
    if r == 0 {
        return Err(Error::UnsupportedPattern {
            pattern: String::new(),
            reason: "r must be at least 1".into(),
        });
    }
    let counts = phi.letter_counts(n)?;
    Ok(BigUint::from(phi.k()) * binomial(counts[0].clone(), BigUint::from(r)))
}

/// Certifies that no occurrence of the dashless `pattern` can straddle two
/// images in any `phi^n(1)`.
///
/// For every ordered pair `(i, j)`, `i = j` included, and every sequence `W`
/// of nonempty images with `|W| <= |pattern| - 2` (`W` may be empty), the
/// word `X_i W X_j` must have no occurrence starting in `X_i` and ending in
/// `X_j`. Any block context inside an actual `phi^n(1)` is among these, so an
/// approval is sound; a refusal may be conservative.
///
/// The report holds the first witness for each failing pair, in order of
/// `(i, j)` and then of `W`.
pub fn check_no_external(phi: &Morphism, pattern: &GeneralizedPattern) -> ApplicabilityReport {
    let mut report = ApplicabilityReport::applicable();
    if let Err(r) = uniform(phi) {
        report.reasons.push(r);
    }
    if !pattern.is_dashless() {
        report.reasons.push(Reason::PatternShapeUnsupported {
            pattern: pattern.to_string(),
            expected: "a pattern without dashes",
        });
        return report;
    }

    let budget = pattern.len().saturating_sub(2);
    let middles = middle_sequences(phi, budget);
    let k = phi.k();
    for i in 1..=k {
        let x = phi.image(i);
        if x.is_empty() {
            continue;
        }
        for j in 1..=k {
            let y = phi.image(j);
            if y.is_empty() {
                continue;
            }
            let witness = middles.iter().find_map(|middle| {
                let w = phi.reconstruct(middle);
                let placements = external_placements_dashless(pattern, x, &w, y)
                    .expect("pattern is dashless");
                placements.first().map(|&start| {
                    let context = Word::concat([x, &w, y]);
                    let occurrence = Word::new(context.letters()[start..start + pattern.len()].to_vec())
                        .expect("letters of a word");
                    ExternalWitness {
                        i,
                        j,
                        middle: middle.clone(),
                        context,
                        start,
                        occurrence,
                    }
                })
            });
            if let Some(w) = witness {
                report.reasons.push(Reason::ExternalOccurrence(w));
            }
        }
    }
    report
}

/// Sequences of nonempty image indices with total length at most `budget`,
/// the empty sequence first, then depth-first in index order.
fn middle_sequences(phi: &Morphism, budget: usize) -> Vec<Vec<usize>> {
    fn extend(phi: &Morphism, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for i in 1..=phi.k() {
            let len = phi.image(i).len();
            if len == 0 || len > budget {
                continue;
            }
            cur.push(i);
            extend(phi, budget - len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(phi, budget, &mut Vec::new(), &mut out);
    out
}

/// Dashless `pattern` in `phi^n(1)`: `s_1` at `n = 1`, otherwise `c sum s_i`.
pub fn count_closed_dashless(phi: &Morphism, pattern: &GeneralizedPattern, n: u32) -> Closed {
    DashlessFormula.evaluate(phi, pattern, n)
}

/// Descents (`21`) in `phi^n(1)` as `|phi^n(1)| - #rises - 1`, valid when no
/// two adjacent letters are equal. That condition is checked on the
/// materialized word, so `n` is limited by `cap`.
pub fn descents_via_complement(phi: &Morphism, n: u32, cap: usize) -> Closed {
    if n < 2 {
        return Err(ApplicabilityReport::declined(Reason::IterationOutOfRange { n, min: 2 }));
    }
    let rise: GeneralizedPattern = "12".parse().expect("valid pattern");
    let rises = count_closed_dashless(phi, &rise, n)?;
    let word = phi.iterate(n, cap).map_err(|e| {
        ApplicabilityReport::declined(Reason::Uncertified(format!(
            "cannot check adjacent letters: {e}"
        )))
    })?;
    if let Some(position) = word.letters().windows(2).position(|p| p[0] == p[1]) {
        return Err(ApplicabilityReport::declined(Reason::AdjacentEqualLetters { n, position }));
    }
    let length = phi.predicted_length(n).expect("morphism is uniform");
    Ok(length - rises - BigUint::one())
}

/// A closed-form counting strategy.
pub trait ClosedForm: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether the pattern has the shape this formula is about.
    fn supports(&self, pattern: &GeneralizedPattern) -> bool;

    /// Every precondition that does not depend on `n`.
    fn applicability(&self, phi: &Morphism, pattern: &GeneralizedPattern) -> ApplicabilityReport;

    fn evaluate(&self, phi: &Morphism, pattern: &GeneralizedPattern, n: u32) -> Closed;
}

pub struct DashedPairFormula;
pub struct ClassicalOnesFormula;
pub struct DashlessFormula;

fn shape_check(
    form: &dyn ClosedForm,
    pattern: &GeneralizedPattern,
    expected: &'static str,
) -> Option<Reason> {
    (!form.supports(pattern)).then(|| Reason::PatternShapeUnsupported {
        pattern: pattern.to_string(),
        expected,
    })
}

fn require_n(n: u32) -> std::result::Result<(), ApplicabilityReport> {
    if n == 0 {
        Err(ApplicabilityReport::declined(Reason::IterationOutOfRange { n, min: 1 }))
    } else {
        Ok(())
    }
}

impl ClosedForm for DashedPairFormula {
    fn name(&self) -> &'static str {
        "dashed-pair"
    }

    fn supports(&self, pattern: &GeneralizedPattern) -> bool {
        pattern.is_dashed_pair()
    }

    fn applicability(&self, phi: &Morphism, pattern: &GeneralizedPattern) -> ApplicabilityReport {
        let mut report = ApplicabilityReport::applicable();
        if let Err(r) = uniform(phi) {
            report.reasons.push(r);
        }
        if let Some(r) = shape_check(self, pattern, "1-2 or 2-1") {
            report.reasons.push(r);
        }
        if !report.is_applicable() {
            return report;
        }
        let stats = compute_stats(phi, pattern).expect("preconditions checked");
        for (i, j) in stats.asymmetric_pairs() {
            report.reasons.push(Reason::ExternalAsymmetry {
                i,
                j,
                forward: stats.pair(i, j).clone(),
                backward: stats.pair(j, i).clone(),
            });
        }
        report
    }

    fn evaluate(&self, phi: &Morphism, pattern: &GeneralizedPattern, n: u32) -> Closed {
        self.applicability(phi, pattern).into_result()?;
        require_n(n)?;
        let stats = compute_stats(phi, pattern).expect("preconditions checked");
        if n == 1 {
            return Ok(stats.s[0].clone());
        }
        let c = copies_of_each_image(&phi.validate(), n);
        let same_image_pairs = binomial(c.clone(), BigUint::from(2u32));
        Ok(&c * stats.sum_s() + same_image_pairs * stats.sum_e() + &c * &c * stats.sum_upper())
    }
}

impl ClosedForm for ClassicalOnesFormula {
    fn name(&self) -> &'static str {
        "classical-ones"
    }

    fn supports(&self, pattern: &GeneralizedPattern) -> bool {
        pattern.is_classical_ones()
    }

    fn applicability(&self, phi: &Morphism, pattern: &GeneralizedPattern) -> ApplicabilityReport {
        let mut report = ApplicabilityReport::applicable();
        if let Err(r) = uniform(phi) {
            report.reasons.push(r);
        }
        if let Some(r) = shape_check(self, pattern, "1-1-...-1") {
            report.reasons.push(r);
        }
        report
    }

    fn evaluate(&self, phi: &Morphism, pattern: &GeneralizedPattern, n: u32) -> Closed {
        self.applicability(phi, pattern).into_result()?;
        require_n(n)?;
        Ok(count_closed_ones(phi, pattern.len(), n).expect("preconditions checked"))
    }
}

impl ClosedForm for DashlessFormula {
    fn name(&self) -> &'static str {
        "dashless"
    }

    fn supports(&self, pattern: &GeneralizedPattern) -> bool {
        pattern.is_dashless()
    }

    fn applicability(&self, phi: &Morphism, pattern: &GeneralizedPattern) -> ApplicabilityReport {
        check_no_external(phi, pattern)
    }

    fn evaluate(&self, phi: &Morphism, pattern: &GeneralizedPattern, n: u32) -> Closed {
        self.applicability(phi, pattern).into_result()?;
        require_n(n)?;
        let s: Vec<Count> = phi.images().iter().map(|x| count_internal(pattern, x)).collect();
        if n == 1 {
            return Ok(s[0].clone());
        }
        let c = copies_of_each_image(&phi.validate(), n);
        Ok(c * s.iter().sum::<Count>())
    }
}

/// Named closed forms, tried in registration order by [`ClosedFormRegistry::select`].
pub struct ClosedFormRegistry {
    forms: Vec<Box<dyn ClosedForm>>,
}

impl ClosedFormRegistry {
    pub fn empty() -> Self {
        ClosedFormRegistry { forms: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut reg = ClosedFormRegistry::empty();
        reg.register(Box::new(DashedPairFormula));
        reg.register(Box::new(ClassicalOnesFormula));
        reg.register(Box::new(DashlessFormula));
        reg
    }

    pub fn register(&mut self, form: Box<dyn ClosedForm>) {
        self.forms.retain(|f| f.name() != form.name());
        self.forms.push(form);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.forms.iter().map(|f| f.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn ClosedForm> {
        self.forms
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn select(&self, pattern: &GeneralizedPattern) -> Option<&dyn ClosedForm> {
        self.forms.iter().find(|f| f.supports(pattern)).map(|f| f.as_ref())
    }

    /// Evaluates the first formula that supports `pattern`; returns its name
    /// with the value.
    pub fn count(
        &self,
        phi: &Morphism,
        pattern: &GeneralizedPattern,
        n: u32,
    ) -> std::result::Result<(&'static str, Count), ApplicabilityReport> {
        let form = self.select(pattern).ok_or_else(|| {
            ApplicabilityReport::declined(Reason::PatternShapeUnsupported {
                pattern: pattern.to_string(),
                expected: "1-2, 2-1, 1-1-...-1 or a pattern without dashes",
            })
        })?;
        form.evaluate(phi, pattern, n).map(|c| (form.name(), c))
    }
}

impl fmt::Debug for ClosedFormRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// Oracle count of `pattern` in `phi^n(1)`, or `None` past the cap.
pub fn oracle_count(phi: &Morphism, pattern: &GeneralizedPattern, n: u32, cap: usize) -> Option<Count> {
    phi.iterate(n, cap).ok().map(|w| count_occurrences(pattern, &w))
}
