//! Built-in morphisms, embedded from `data/*.morph`.

use crate::morphism::Morphism;

pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub morphism: Morphism,
}

const ENTRIES: [(&str, &str); 5] = [
    ("phi-w", include_str!("../data/phi_w.morph")),
    ("erasing4", include_str!("../data/erasing4.morph")),
    ("growth9", include_str!("../data/growth9.morph")),
    ("dashless4", include_str!("../data/dashless4.morph")),
    ("nonuniform", include_str!("../data/nonuniform.morph")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(name, _)| *name)
}

pub fn get(name: &str) -> Option<CorpusEntry> {
    ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(name, text)| CorpusEntry {
            name,
            text,
            morphism: Morphism::parse(text).expect("built-in morphism parses"),
        })
}

pub fn all() -> Vec<CorpusEntry> {
    names().filter_map(get).collect()
}

fn load(name: &str) -> Morphism {
    get(name).expect("known corpus entry").morphism
}

/// `1 -> 123, 2 -> 13, 3 -> 2`; its fixed point is square-free.
pub fn phi_w() -> Morphism {
    load("phi-w")
}

/// `1 -> 1324, 2 -> ., 3 -> 14, 4 -> 23`.
pub fn erasing4() -> Morphism {
    load("erasing4")
}

/// `1 -> 13542, 2 -> 423, 3 -> ., 4 -> 5115, 5 -> 234`.
pub fn growth9() -> Morphism {
    load("growth9")
}

/// `1 -> 1243, 2 -> 3, 3 -> ., 4 -> 124`.
pub fn dashless4() -> Morphism {
    load("dashless4")
}

/// `1 -> 12, 2 -> 1`: not uniform.
pub fn nonuniform() -> Morphism {
    load("nonuniform")
}
