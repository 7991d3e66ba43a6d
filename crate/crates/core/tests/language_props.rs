//! Language and complexity properties against brute-force oracles.

use std::collections::BTreeSet;

use autlab::shiftlang::{builtin_shift, Alphabet, ShiftPresentation, Side, Word, BUILTIN_SHIFTS};
use proptest::prelude::*;

/// Central n-factors of all words of length `n + 2t` avoiding `forbidden`.
/// With `t` at least the number of (m)-block states, every such factor
/// extends forever in both directions by pumping a repeated state.
fn sft_oracle(k: u8, forbidden: &[Word], n: usize, t: usize) -> BTreeSet<Word> {
    let len = n + 2 * t;
    let mut out = BTreeSet::new();
    let mut w: Word = vec![0; len];
    let total = (k as u64).pow(len as u32);
    for mut code in 0..total {
        for slot in w.iter_mut().rev() {
            *slot = (code % k as u64) as u8;
            code /= k as u64;
        }
        let ok = !forbidden
            .iter()
            .any(|f| w.windows(f.len()).any(|x| x == f.as_slice()));
        if ok {
            out.insert(w[t..t + n].to_vec());
        }
    }
    out
}

/// n-factors of a long iterate of the substitution from symbol 0.
fn substitution_oracle(rule: &[Word], n: usize) -> BTreeSet<Word> {
    let mut s: Word = vec![0];
    while s.len() < 20_000 {
        s = s.iter().flat_map(|&c| rule[c as usize].iter().copied()).collect();
    }
    s.windows(n).map(<[u8]>::to_vec).collect()
}

fn words(n: usize, x: &ShiftPresentation) -> BTreeSet<Word> {
    x.words_of_length(n).iter().cloned().collect()
}

fn binary_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn binary_sft_matches_brute_force(forbidden in prop::collection::vec(binary_word(3), 1..4)) {
        let a = Alphabet::digits(2).unwrap();
        let Ok(x) = ShiftPresentation::sft(a, forbidden.clone()) else {
            return Ok(());
        };
        // memory at most 2, so at most 4 block states
        for n in 1..=6 {
            prop_assert_eq!(words(n, &x), sft_oracle(2, &forbidden, n, 4), "n = {}", n);
        }
    }

    #[test]
    fn ternary_sft_matches_brute_force(forbidden in prop::collection::vec(prop::collection::vec(0u8..3, 1..=2), 1..5)) {
        let a = Alphabet::digits(3).unwrap();
        let Ok(x) = ShiftPresentation::sft(a, forbidden.clone()) else {
            return Ok(());
        };
        for n in 1..=4 {
            prop_assert_eq!(words(n, &x), sft_oracle(3, &forbidden, n, 3), "n = {}", n);
        }
    }

    #[test]
    fn substitution_matches_iterates(rule in prop::collection::vec(binary_word(3), 2)) {
        let a = Alphabet::digits(2).unwrap();
        let Ok(x) = ShiftPresentation::substitution(a, rule.clone()) else {
            return Ok(());
        };
        for n in 1..=6 {
            prop_assert_eq!(words(n, &x), substitution_oracle(&rule, n), "n = {}", n);
        }
    }

    #[test]
    fn complexity_monotone_and_submultiplicative(forbidden in prop::collection::vec(binary_word(3), 1..4)) {
        let a = Alphabet::digits(2).unwrap();
        let Ok(x) = ShiftPresentation::sft(a, forbidden) else {
            return Ok(());
        };
        for n in 1..=8 {
            prop_assert!(x.complexity(n) <= x.complexity(n + 1));
            for m in 1..=8 {
                prop_assert!(x.complexity(m + n) <= x.complexity(m) * x.complexity(n));
            }
        }
        prop_assert_eq!(x.complexity(0), 1);
    }

    #[test]
    fn periodic_orbit_complexity(seed in binary_word(6)) {
        let a = Alphabet::digits(2).unwrap();
        let x = ShiftPresentation::periodic(a, seed.clone()).unwrap();
        let p = autlab::shiftlang::primitive_root(&seed).len() as u128;
        prop_assert!(x.is_finite());
        for n in 1..=10 {
            prop_assert!(x.complexity(n) <= p);
        }
        prop_assert_eq!(x.complexity(10), p);
    }
}

#[test]
fn extension_consistency_on_builtins() {
    for name in BUILTIN_SHIFTS {
        let x = builtin_shift(name).unwrap();
        for n in 1..=8 {
            let short = words(n, &x);
            let long = x.words_of_length(n + 1);
            for w in long.iter() {
                assert!(short.contains(&w[..n]) && short.contains(&w[1..]), "{name}: factor closure");
            }
            for w in &short {
                assert!(long.iter().any(|v| &v[..n] == w.as_slice()), "{name}: right extension");
                assert!(long.iter().any(|v| &v[1..] == w.as_slice()), "{name}: left extension");
            }
        }
    }
}

#[test]
fn special_words_count_the_growth() {
    // P(n+1) − P(n) = Σ over right-special words of (followers − 1); for
    // binary shifts that is the number of right-special words.
    for name in ["full-2", "golden-mean", "fibonacci", "thue-morse"] {
        let x = builtin_shift(name).unwrap();
        for n in 1..=8 {
            let d = x.complexity(n + 1) - x.complexity(n);
            assert_eq!(x.special_words(n, Side::Right).len() as u128, d, "{name} n={n}");
            assert_eq!(x.special_words(n, Side::Left).len() as u128, d, "{name} n={n}");
        }
    }
}

#[test]
fn builtins_against_oracles() {
    let golden = builtin_shift("golden-mean").unwrap();
    let fib = builtin_shift("fibonacci").unwrap();
    let tm = builtin_shift("thue-morse").unwrap();
    for n in 1..=8 {
        assert_eq!(words(n, &golden), sft_oracle(2, &[vec![1, 1]], n, 2));
        assert_eq!(words(n, &fib), substitution_oracle(&[vec![0, 1], vec![0]], n));
        assert_eq!(words(n, &tm), substitution_oracle(&[vec![0, 1], vec![1, 0]], n));
    }
}
