//! Group axioms, certificates and distortion profiles against independent models.

use std::collections::BTreeMap;

use autlab::grouplab::{
    ball_growth, base_q_certificate, bfs_word_length, bs_horner_certificate, commutator_power_check,
    distortion_profile, evaluate, heisenberg_square_certificate, CertificateSource, Element, Group, GroupModel,
    Token, WordExpr, WordLength,
};
use autlab::par::Exec;
use autlab::trend::classify;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Random word of length up to `max` in the given generator names.
fn random_word(names: &'static [&'static str], max: usize) -> impl Strategy<Value = WordExpr> {
    prop::collection::vec((0..names.len(), any::<bool>()), 0..=max).prop_map(move |v| WordExpr {
        tokens: v
            .into_iter()
            .map(|(i, inverse)| Token {
                name: names[i].to_string(),
                inverse,
            })
            .collect(),
    })
}

fn element(model: &GroupModel, w: &WordExpr) -> Element {
    evaluate(w, model, &model.standard_generators().binding()).unwrap()
}

const HEIS: &[&str] = &["u", "t", "s"];
const BS: &[&str] = &["a", "b"];
const Z3: &[&str] = &["e1", "e2", "e3"];

/// 3×3 upper unitriangular matrix `[[1,x,z],[0,1,y],[0,0,1]]`.
type Mat = [[i64; 3]; 3];

fn heis_matrix(e: &Element) -> Mat {
    let Element::Heisenberg([x, y, z]) = *e else { panic!() };
    [[1, x, z], [0, 1, y], [0, 0, 1]]
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    c
}

/// Applies the affine map of a BS(1,n) element to the rational `p/q`,
/// returning an unreduced fraction.
fn affine_apply(n: u32, e: &Element, (p, q): (BigInt, BigInt)) -> (BigInt, BigInt) {
    let Element::Affine { k, m } = e else { panic!() };
    let nb = BigInt::from(n);
    let (sp, sq) = if *k >= 0 {
        (nb.pow(*k as u32), BigInt::from(1))
    } else {
        (BigInt::from(1), nb.pow(k.unsigned_abs() as u32))
    };
    let mden = nb.pow(m.exp);
    // sp/sq · p/q + m.num/mden
    let den = &sq * &q * &mden;
    let num = &sp * &p * &mden + &m.num * &sq * &q;
    (num, den)
}

fn same_fraction(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> bool {
    &a.0 * &b.1 == &b.0 * &a.1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn group_axioms(which in 0usize..4, x in random_word(HEIS, 8), y in random_word(BS, 8), z in random_word(Z3, 8)) {
        let (model, words): (GroupModel, [WordExpr; 3]) = match which {
            0 => (GroupModel::Heisenberg, [x.clone(), x.inverse(), x.clone().concat(&x)]),
            1 => (GroupModel::bs(2).unwrap(), [y.clone(), y.inverse(), y.clone().concat(&y)]),
            2 => (GroupModel::bs(3).unwrap(), [y.inverse(), y.clone(), y.clone().concat(&y.inverse())]),
            _ => (GroupModel::zd(3).unwrap(), [z.clone(), z.inverse(), z.clone().concat(&z)]),
        };
        let [a, b, c] = words.map(|w| element(&model, &w));
        let e = model.identity();
        prop_assert_eq!(model.multiply(&model.multiply(&a, &b), &c), model.multiply(&a, &model.multiply(&b, &c)));
        prop_assert_eq!(model.multiply(&a, &e), a.clone());
        prop_assert_eq!(model.multiply(&e, &a), a.clone());
        prop_assert_eq!(model.multiply(&a, &model.inverse(&a)), e.clone());
        prop_assert_eq!(model.multiply(&model.inverse(&a), &a), e);
        prop_assert!(model.contains(&a));
    }

    #[test]
    fn word_evaluation_is_a_homomorphism(x in random_word(HEIS, 10), y in random_word(HEIS, 10)) {
        let h = GroupModel::Heisenberg;
        let xy = element(&h, &x.clone().concat(&y));
        prop_assert_eq!(xy, h.multiply(&element(&h, &x), &element(&h, &y)));
        prop_assert_eq!(element(&h, &x.inverse()), h.inverse(&element(&h, &x)));
    }

    #[test]
    fn heisenberg_matches_matrices(x in random_word(HEIS, 12), y in random_word(HEIS, 12)) {
        let h = GroupModel::Heisenberg;
        let (a, b) = (element(&h, &x), element(&h, &y));
        prop_assert_eq!(heis_matrix(&h.multiply(&a, &b)), matmul(&heis_matrix(&a), &heis_matrix(&b)));
    }

    #[test]
    fn heisenberg_commutators_are_central(x in random_word(HEIS, 8), y in random_word(HEIS, 8), z in random_word(HEIS, 8)) {
        let h = GroupModel::Heisenberg;
        let (a, b, c) = (element(&h, &x), element(&h, &y), element(&h, &z));
        let k = h.commutator(&a, &b);
        prop_assert_eq!(h.multiply(&k, &c), h.multiply(&c, &k));
        let Element::Heisenberg([kx, ky, _]) = k else { unreachable!() };
        prop_assert_eq!((kx, ky), (0, 0));
    }

    #[test]
    fn commutator_powers(m1 in -40i64..40, m2 in -40i64..40) {
        prop_assert!(commutator_power_check(m1, m2));
    }

    #[test]
    fn bs_matches_affine_maps(n in 2u32..5, x in random_word(BS, 10), y in random_word(BS, 10), p in -50i64..50) {
        let g = GroupModel::bs(n).unwrap();
        let (a, b) = (element(&g, &x), element(&g, &y));
        let t = (BigInt::from(p), BigInt::from(7));
        // g·h applies h first
        let lhs = affine_apply(n, &g.multiply(&a, &b), t.clone());
        let rhs = affine_apply(n, &a, affine_apply(n, &b, t));
        prop_assert!(same_fraction(&lhs, &rhs));
    }

    #[test]
    fn horner_certificates_are_sound(n in 2u32..6, m in 1u64..100_000) {
        let g = GroupModel::bs(n).unwrap();
        let w = bs_horner_certificate(m, n).unwrap();
        let a = &g.standard_generators().binding()["a"];
        prop_assert_eq!(element(&g, &w), g.power(a, m as i64));
        let k = (m as f64).log(n as f64).floor() as usize;
        prop_assert!(w.len() <= k + n as usize * (k + 1) + k);
    }

    #[test]
    fn center_certificates_are_sound(n in 0u64..200_000) {
        let h = GroupModel::Heisenberg;
        let s = Element::Heisenberg([0, 0, 1]);
        let w = base_q_certificate(n);
        prop_assert_eq!(element(&h, &w), h.power(&s, n as i64));
        prop_assert!((w.len() as f64) <= 16.0 * ((n as f64).sqrt() + 1.0));
        let r = (n as f64).sqrt() as u64;
        let sq = heisenberg_square_certificate(r);
        prop_assert_eq!(element(&h, &sq), h.power(&s, (r * r) as i64));
        prop_assert_eq!(sq.len() as u64, 4 * r);
    }

    #[test]
    fn word_text_round_trips(w in random_word(&["a", "b", "gen_2"], 12)) {
        let parsed: WordExpr = w.to_string().parse().unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn trend_is_scale_invariant(c in 0.01f64..100.0, shape in 0usize..4) {
        let pts: Vec<(u64, f64)> = (1..=64u64)
            .map(|n| {
                let x = n as f64;
                let y = match shape {
                    0 => x,
                    1 => x.sqrt(),
                    2 => x.cbrt() + 0.3 * (x * 0.7).sin(),
                    _ => x.ln() + 1.0,
                };
                (n, y)
            })
            .collect();
        let scaled: Vec<(u64, f64)> = pts.iter().map(|&(n, y)| (n, c * y)).collect();
        prop_assert_eq!(classify(&pts).trend, classify(&scaled).trend);
    }
}

#[test]
fn bs_relation_holds() {
    for n in 2..8 {
        let g = GroupModel::bs(n).unwrap();
        let gens = g.standard_generators().binding();
        let (a, b) = (&gens["a"], &gens["b"]);
        let lhs = g.multiply(&g.multiply(b, a), &g.inverse(b));
        assert_eq!(lhs, g.power(a, i64::from(n)), "n = {n}");
    }
}

#[test]
fn certificates_dominate_exact_lengths() {
    let g = GroupModel::bs(2).unwrap();
    let gens = g.standard_generators();
    let steps = gens.steps(&g);
    let a = gens.binding()["a"].clone();
    for m in 1..=40u64 {
        let w = bs_horner_certificate(m, 2).unwrap();
        let exact = bfs_word_length(&g, &steps, &g.power(&a, m as i64), 12, 1 << 22, Exec::Parallel).unwrap();
        match exact {
            WordLength::Exact(l) => assert!(l as usize <= w.len(), "m = {m}"),
            WordLength::ExceedsRadius => assert!(w.len() > 12, "m = {m}"),
        }
    }
    let h = GroupModel::Heisenberg;
    let gens = h.standard_generators();
    let steps = gens.steps(&h);
    for m in 1..=30u64 {
        let target = Element::Heisenberg([0, 0, m as i64]);
        let w = base_q_certificate(m);
        if let WordLength::Exact(l) = bfs_word_length(&h, &steps, &target, 10, 1 << 22, Exec::Parallel).unwrap() {
            assert!(l as usize <= w.len(), "m = {m}");
        }
    }
}

#[test]
fn distortion_profiles_are_subadditive() {
    let cases = [
        (GroupModel::bs(2).unwrap(), "a", CertificateSource::Horner { a: "a".into(), b: "b".into() }),
        (GroupModel::Heisenberg, "s", CertificateSource::HeisenbergCenter { u: "u".into(), t: "t".into() }),
        (GroupModel::zd(2).unwrap(), "e1", CertificateSource::Horner { a: "a".into(), b: "b".into() }),
    ];
    for (model, name, cert) in cases {
        let gens = model.standard_generators();
        let g = gens.binding()[name].clone();
        let p = distortion_profile(&model, &gens, &g, 48, 8, 1 << 20, &[cert], Exec::Parallel).unwrap();
        let len: BTreeMap<u64, u64> = p.entries.iter().map(|e| (e.n, e.length)).collect();
        for a in 1..=48 {
            for b in 1..=48 - a {
                assert!(len[&(a + b)] <= len[&a] + len[&b], "{} at {a}+{b}", model.name());
            }
        }
        for e in &p.entries {
            if let Some(r) = e.exceeds {
                assert!(e.length > r);
            }
        }
    }
}

#[test]
fn zd_balls_match_the_lattice_count() {
    // |B(r)| in Z² with the standard generators is 2r² + 2r + 1.
    let z2 = GroupModel::zd(2).unwrap();
    let g = ball_growth(&z2, &z2.standard_generators(), 12, 1 << 20, Exec::Sequential).unwrap();
    for (r, &size) in g.sizes.iter().enumerate() {
        assert_eq!(size, 2 * r * r + 2 * r + 1);
    }
}
