//! Algebraic properties of block codes and their spacetime patches.

use std::sync::Arc;

use autlab::blockcode::{BlockCode, TableBudget};
use autlab::par::Exec;
use autlab::shiftlang::{Alphabet, ShiftPresentation, Symbol, Word};
use autlab::spacetime::{
    build_patches, coding_check, cyr_kra_audit, rectangle_complexity, uniform_vertical_period, CellSet, CyrKra,
    VerticalPeriod,
};
use proptest::prelude::*;

const B: TableBudget = TableBudget { max_rows: 1 << 16 };

fn full(k: usize) -> Arc<ShiftPresentation> {
    Arc::new(ShiftPresentation::full(Alphabet::digits(k).unwrap()))
}

/// Index of a window in base `k`, most significant first.
fn window_index(w: &[Symbol], k: usize) -> usize {
    w.iter().fold(0, |acc, &s| acc * k + usize::from(s))
}

/// A random local rule on the full shift, given by its full lookup table.
#[derive(Debug, Clone)]
struct RandomCode {
    k: usize,
    radius: usize,
    table: Vec<Symbol>,
}

impl RandomCode {
    fn build(&self) -> BlockCode {
        let k = self.k;
        BlockCode::from_fn(full(k), self.radius, B, Exec::Sequential, |w| self.table[window_index(w, k)]).unwrap()
    }

    /// Direct evaluation, independent of the tabulated rule.
    fn eval(&self, w: &[Symbol]) -> Word {
        let span = 2 * self.radius + 1;
        w.windows(span).map(|x| self.table[window_index(x, self.k)]).collect()
    }
}

fn random_code(k: usize) -> impl Strategy<Value = RandomCode> {
    (0usize..=1).prop_flat_map(move |radius| {
        let rows = k.pow(2 * radius as u32 + 1);
        prop::collection::vec(0..k as Symbol, rows).prop_map(move |table| RandomCode { k, radius, table })
    })
}

fn word(k: usize, len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k as Symbol, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_matches_direct_evaluation(c in random_code(3), w in word(3, 9)) {
        prop_assert_eq!(c.build().apply_to_word(&w).unwrap(), c.eval(&w));
    }

    #[test]
    fn composition_applies_inner_first(f in random_code(2), g in random_code(2), w in word(2, 10)) {
        let fg = f.build().compose(&g.build(), B, Exec::Sequential).unwrap();
        prop_assert_eq!(fg.apply_to_word(&w).unwrap(), f.eval(&g.eval(&w)));
    }

    #[test]
    fn composition_is_associative(f in random_code(2), g in random_code(2), h in random_code(2)) {
        let (f, g, h) = (f.build(), g.build(), h.build());
        let left = f.compose(&g, B, Exec::Sequential).unwrap().compose(&h, B, Exec::Sequential).unwrap();
        let right = f.compose(&g.compose(&h, B, Exec::Sequential).unwrap(), B, Exec::Sequential).unwrap();
        prop_assert!(left.same_map(&right));
    }

    #[test]
    fn identity_is_neutral(f in random_code(3)) {
        let f = f.build();
        let id = BlockCode::identity(f.domain().clone());
        prop_assert!(f.compose(&id, B, Exec::Sequential).unwrap().same_map(&f));
        prop_assert!(id.compose(&f, B, Exec::Sequential).unwrap().same_map(&f));
    }

    #[test]
    fn range_is_subadditive(f in random_code(2), g in random_code(2)) {
        let (f, g) = (f.build(), g.build());
        let fg = f.compose(&g, B, Exec::Sequential).unwrap();
        prop_assert!(fg.minimal_range() <= f.minimal_range() + g.minimal_range());
    }

    #[test]
    fn minimized_keeps_the_map(f in random_code(2), g in random_code(2)) {
        let fg = f.build().compose(&g.build(), B, Exec::Sequential).unwrap();
        let m = fg.minimized();
        prop_assert!(m.same_map(&fg));
        prop_assert_eq!(m.declared_range(), fg.minimal_range());
        prop_assert_eq!(m.minimal_range(), m.declared_range());
        prop_assert!(BlockCode::from_key(fg.domain().clone(), &fg.key()).same_map(&fg));
    }

    #[test]
    fn power_matches_repeated_composition(f in random_code(2), n in 1usize..5) {
        let f = f.build();
        let mut acc = BlockCode::identity(f.domain().clone());
        for _ in 0..n {
            acc = f.compose(&acc, B, Exec::Sequential).unwrap();
        }
        prop_assert!(f.power(n, B, Exec::Sequential).unwrap().same_map(&acc));
    }

    #[test]
    fn sequential_and_parallel_agree(f in random_code(2), g in random_code(2)) {
        let (f, g) = (f.build(), g.build());
        let s = f.compose(&g, B, Exec::Sequential).unwrap();
        let p = f.compose(&g, B, Exec::Parallel).unwrap();
        prop_assert_eq!(s.key(), p.key());
        let ps = build_patches(&f, 3, 3, B, Exec::Sequential).unwrap();
        let pp = build_patches(&f, 3, 3, B, Exec::Parallel).unwrap();
        prop_assert_eq!(ps.patches(), pp.patches());
    }

    #[test]
    fn one_row_patches_count_words(f in random_code(2), n in 1usize..7) {
        let f = f.build();
        let p = rectangle_complexity(&f, n, 1, B, Exec::Sequential).unwrap();
        prop_assert_eq!(p as u128, f.domain().complexity(n));
    }

    #[test]
    fn rectangle_complexity_is_monotone(f in random_code(2), n in 1usize..5, k in 1usize..4) {
        let f = f.build();
        let base = rectangle_complexity(&f, n, k, B, Exec::Sequential).unwrap();
        prop_assert!(base <= rectangle_complexity(&f, n + 1, k, B, Exec::Sequential).unwrap());
        prop_assert!(base <= rectangle_complexity(&f, n, k + 1, B, Exec::Sequential).unwrap());
        prop_assert!(base as u128 <= f.domain().complexity(n).pow(k as u32));
    }

    #[test]
    fn rows_code_the_next_row(f in random_code(2), half in 0i64..2) {
        let f = f.build();
        let r = f.minimal_range() as i64;
        let n = (2 * (half + r) + 1) as usize;
        let patches = build_patches(&f, n, 2, B, Exec::Sequential).unwrap();
        let a = CellSet::segment(-half - r, half + r, 0);
        let b = CellSet::segment(-half, half, 1);
        prop_assert!(coding_check(&patches, &a, &b).unwrap());
        // Enlarging the coding set keeps the relation.
        prop_assert!(coding_check(&patches, &a.union(&b), &b).unwrap());
        prop_assert!(coding_check(&patches, &a, &a).unwrap());
    }

    #[test]
    fn periodic_orbits_have_translation_vectors(seed in prop::collection::vec(0u8..2, 1..6), j in -2i64..=2) {
        let x = Arc::new(ShiftPresentation::periodic(Alphabet::digits(2).unwrap(), seed.clone()).unwrap());
        let p = autlab::shiftlang::primitive_root(&seed).len();
        let phi = BlockCode::shift_power(x, j, B).unwrap();
        let patches = build_patches(&phi, p + 1, 2, B, Exec::Sequential).unwrap();
        prop_assert!(patches.len() <= p);
        let found = matches!(cyr_kra_audit(&patches), CyrKra::BelowThreshold { .. });
        prop_assert!(found);

        let tall = build_patches(&phi, 1, 2 * p, B, Exec::Sequential).unwrap();
        match uniform_vertical_period(&tall) {
            VerticalPeriod::Period(t) => prop_assert_eq!(p as u64 % t, 0),
            VerticalPeriod::NotEventuallyConcluded => prop_assert!(false, "period not found"),
        }
    }
}
