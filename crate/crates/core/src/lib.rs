//! Occurrence counting for generalized patterns in the finite approximations
//! `phi^n(1)` of words generated by a morphism.
//!
//! Two independent routes are provided: an exhaustive [`oracle`] that counts
//! occurrences straight from the definition, and [`closedform`] formulas for
//! uniform morphisms that never materialize the word. Both are organized as
//! registries of named strategies.

pub mod cli;
pub mod closedform;
pub mod corpus;
pub mod error;
pub mod morphism;
pub mod oracle;
pub mod pattern;
pub mod verify;
pub mod word;

/// Occurrence counts and lengths; closed forms grow like `(d + l)^(2n)`.
pub type Count = num_bigint::BigUint;

pub use closedform::{ApplicabilityReport, ClosedForm, ClosedFormRegistry, PatternStats, Reason};
pub use error::{Error, Result};
pub use morphism::{Morphism, UniformityProfile, DEFAULT_CAP};
pub use oracle::{count_occurrences, Counter, CounterRegistry};
pub use pattern::GeneralizedPattern;
pub use word::{Letter, Word};
