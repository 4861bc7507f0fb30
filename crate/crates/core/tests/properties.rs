use morphpat::closedform::{
    check_no_external, compute_stats, count_closed_dashed2, count_closed_ones, ClosedFormRegistry,
};
use morphpat::corpus;
use morphpat::oracle::{count_occurrences, Counter, Exhaustive};
use morphpat::{Count, GeneralizedPattern, Morphism, Word, DEFAULT_CAP};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORD_LIMIT: usize = 400;

fn pat(s: &str) -> GeneralizedPattern {
    s.parse().unwrap()
}

/// A random morphism satisfying the uniformity preconditions: `X_1` starts
/// with 1 and has `ell` copies of each letter, `X_2..X_k` together hold `d`
/// copies of each letter, split at random cut points (empty images allowed).
fn uniform_morphism(seed: u64) -> Morphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(2..=4u32);
    let ell = rng.gen_range(1..=2usize);
    let d = rng.gen_range(0..=2usize);

    let mut head: Vec<u32> = (1..=k).flat_map(|a| std::iter::repeat_n(a, ell)).collect();
    head.remove(0);
    head.shuffle(&mut rng);
    head.insert(0, 1);

    let mut tail: Vec<u32> = (1..=k).flat_map(|a| std::iter::repeat_n(a, d)).collect();
    tail.shuffle(&mut rng);
    let mut cuts: Vec<usize> = (0..k as usize - 2).map(|_| rng.gen_range(0..=tail.len())).collect();
    cuts.sort_unstable();
    let mut images = vec![Word::new(head).unwrap()];
    let mut prev = 0;
    for cut in cuts.into_iter().chain([tail.len()]) {
        images.push(Word::new(tail[prev..cut].to_vec()).unwrap());
        prev = cut;
    }
    Morphism::new(images).unwrap()
}

/// Counts `1-2`/`2-1` through the block decomposition with ordered external
/// counts, so it holds whatever the symmetry of `e_{i,j}`.
fn arrangement_count(phi: &Morphism, pattern: &GeneralizedPattern, n: u32) -> Count {
    let stats = compute_stats(phi, pattern).unwrap();
    let blocks = phi.decompose(n, DEFAULT_CAP).unwrap();
    let mut total: Count = blocks.iter().map(|&b| stats.s[b - 1].clone()).sum();
    for (p, &a) in blocks.iter().enumerate() {
        for &b in &blocks[p + 1..] {
            total += stats.pair(a, b);
        }
    }
    total
}

const PATTERNS: [&str; 11] = ["1-2", "2-1", "1-1", "1-1-1", "1", "12", "21", "11", "123", "132", "212"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_morphisms_are_uniform(seed in any::<u64>()) {
        let phi = uniform_morphism(seed);
        prop_assert!(phi.validate().is_valid(), "{}", phi);
    }

    #[test]
    fn structure_of_random_morphisms(seed in any::<u64>()) {
        let phi = uniform_morphism(seed);
        let profile = phi.validate();
        for n in 1..=5u32 {
            let Ok(w) = phi.iterate(n, WORD_LIMIT) else { break };
            prop_assert_eq!(BigUint::from(w.len()), phi.predicted_length(n).unwrap());
            let each = phi.letter_counts(n).unwrap()[0].clone();
            for c in w.letter_counts(phi.k()) {
                prop_assert_eq!(BigUint::from(c), each.clone());
            }
            if n >= 2 {
                let blocks = phi.decompose(n, WORD_LIMIT).unwrap();
                prop_assert_eq!(phi.reconstruct(&blocks), w);
                let copies = profile.ell * profile.ratio().pow(n - 2);
                for i in 1..=phi.k() {
                    prop_assert_eq!(blocks.iter().filter(|&&b| b == i).count() as u64, copies);
                }
            }
        }
    }

    /// Whenever a closed form accepts, it matches the oracle exactly.
    #[test]
    fn closed_forms_match_oracle(seed in any::<u64>()) {
        let phi = uniform_morphism(seed);
        let registry = ClosedFormRegistry::standard();
        for text in PATTERNS {
            let p = pat(text);
            for n in 1..=5u32 {
                let Ok(w) = phi.iterate(n, WORD_LIMIT) else { break };
                if let Ok((name, closed)) = registry.count(&phi, &p, n) {
                    prop_assert_eq!(closed, count_occurrences(&p, &w), "{} via {} at n={} on\n{}", text, name, n, phi);
                }
            }
        }
    }

    #[test]
    fn decomposition_sum_matches_oracle(seed in any::<u64>(), ascending in any::<bool>()) {
        let phi = uniform_morphism(seed);
        let p = if ascending { pat("1-2") } else { pat("2-1") };
        for n in 2..=3u32 {
            let w = phi.iterate(n, DEFAULT_CAP).unwrap();
            let by_blocks = arrangement_count(&phi, &p, n);
            prop_assert_eq!(&by_blocks, &count_occurrences(&p, &w));
            if let Ok(closed) = count_closed_dashed2(&phi, &p, n) {
                prop_assert_eq!(closed, by_blocks);
            }
        }
    }

    #[test]
    fn approved_dashless_patterns_never_straddle(seed in any::<u64>()) {
        // soundness: approval means every occurrence in phi^n(1) sits inside one image
        let phi = uniform_morphism(seed);
        for text in ["12", "21", "123", "132", "213", "11"] {
            let p = pat(text);
            if !check_no_external(&phi, &p).is_applicable() {
                continue;
            }
            for n in 2..=4u32 {
                let blocks = phi.decompose(n, WORD_LIMIT).unwrap();
                let w = phi.reconstruct(&blocks);
                let internal: Count = blocks.iter().map(|&b| count_occurrences(&p, phi.image(b))).sum();
                prop_assert_eq!(count_occurrences(&p, &w), internal, "{} at n={}", text, n);
            }
        }
    }
}

#[test]
fn classical_ones_matches_oracle_on_corpus() {
    for entry in corpus::all() {
        let phi = &entry.morphism;
        if !phi.validate().is_valid() {
            continue;
        }
        for n in 1..=7u32 {
            let Ok(w) = phi.iterate(n, WORD_LIMIT) else { break };
            assert_eq!(
                count_closed_ones(phi, 2, n).unwrap(),
                count_occurrences(&pat("1-1"), &w),
                "{} n={n}",
                entry.name
            );
        }
    }
}

#[test]
fn formula_equals_decomposition_on_symmetric_corpus() {
    for entry in corpus::all() {
        let phi = &entry.morphism;
        if !phi.validate().is_valid() {
            continue;
        }
        for text in ["1-2", "2-1"] {
            let p = pat(text);
            for n in 2..=3 {
                if let Ok(closed) = count_closed_dashed2(phi, &p, n) {
                    assert_eq!(closed, arrangement_count(phi, &p, n), "{} {text} n={n}", entry.name);
                }
            }
        }
    }
}

#[test]
fn doubled_head_morphism() {
    // l = 2: each image appears l (d + l)^(n-2) times, not (d + l)^(n-2)
    let phi = Morphism::parse("k: 2\n1 -> 1221\n2 -> 21\n").unwrap();
    let profile = phi.validate();
    assert_eq!((profile.ell, profile.d), (2, 1));
    for n in 1..=5 {
        let w = phi.iterate(n, DEFAULT_CAP).unwrap();
        assert_eq!(BigUint::from(w.len()), phi.predicted_length(n).unwrap());
        for text in ["1-2", "2-1", "1-1", "1-1-1"] {
            let p = pat(text);
            if let Ok((_, closed)) = ClosedFormRegistry::standard().count(&phi, &p, n) {
                assert_eq!(closed, Exhaustive.count(&p, &w), "{text} n={n}");
            }
        }
    }
}

#[test]
fn descent_complement_on_phi_w() {
    let phi = corpus::phi_w();
    for n in 2..=7 {
        let w = phi.iterate(n, DEFAULT_CAP).unwrap();
        let rises = count_occurrences(&pat("12"), &w);
        let descents = count_occurrences(&pat("21"), &w);
        assert_eq!(descents, BigUint::from(w.len()) - rises - 1u32);
    }
}
