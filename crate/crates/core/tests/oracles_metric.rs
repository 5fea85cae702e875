use marked_groups::construct;
use marked_groups::metric::{agreement_radius, Agreement};
use marked_groups::oracle::AbelianData;
use marked_groups::surface::{surface_group, SurfaceSpec};
use marked_groups::word::reduced_words_upto;
use marked_groups::{MarkedGroup, Word};
use proptest::prelude::*;

fn g(i: usize) -> Word {
    Word::gen(i)
}

fn word(n: i32, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(
        (1..=n, any::<bool>()).prop_map(|(i, s)| if s { i } else { -i }),
        0..=max,
    )
    .prop_map(|r| Word::from_raw(&r))
}

/// A shortest two-letter C'(1/6) relator.
fn small_cancellation_relator() -> Word {
    Word::from_raw(&[1, 1, 1, 2, 1, 1, -2, 1, 2, -1, -2, -2, -2])
}

/// Two-generator groups with different oracle kinds.
fn pool() -> Vec<MarkedGroup> {
    let f2 = MarkedGroup::free(2);
    vec![
        f2.clone(),
        MarkedGroup::free_abelian(2),
        MarkedGroup::integers_marked(&[1, 3]),
        MarkedGroup::abelian(AbelianData::from_moduli(&[0, 4])),
        construct::free_product(&MarkedGroup::cyclic(2), &MarkedGroup::cyclic(3)).unwrap(),
        construct::quotient(&f2, &[small_cancellation_relator()]).unwrap(),
        f2.remark_subgroup(&[g(1), g(2).pow(2)]).unwrap(),
    ]
}

fn genus_two_double() -> MarkedGroup {
    construct::double(&MarkedGroup::free(2), &Word::commutator(&g(1), &g(2))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relations_form_a_normal_subgroup(u in word(2, 8), v in word(2, 8), c in word(2, 5)) {
        for m in pool() {
            let (ru, rv) = (m.relation_test(&u), m.relation_test(&v));
            prop_assert_eq!(ru, m.relation_test(&u.inverse()));
            prop_assert_eq!(ru, m.relation_test(&u.conjugate_by(&c)));
            if ru && rv {
                prop_assert!(m.relation_test(&u.mul(&v)));
            }
            if ru {
                prop_assert_eq!(rv, m.relation_test(&u.mul(&v)));
            }
        }
    }

    #[test]
    fn dehn_surface_matches_the_double(w in word(4, 10), c in word(4, 4), k in 0usize..3) {
        let s = surface_group(SurfaceSpec::orientable(2)).unwrap();
        // a1 b1 a2 b2 = a, b, bbar, abar
        let d = genus_two_double().remark_subgroup(&[g(1), g(2), g(4), g(3)]).unwrap();
        let r = SurfaceSpec::orientable(2).relator();
        let mut x = w.clone();
        for _ in 0..k {
            x = x.mul(&r.conjugate_by(&c));
        }
        x = x.mul(&w.inverse());
        prop_assert!(s.relation_test(&x) && d.relation_test(&x));
        prop_assert_eq!(s.relation_test(&w), d.relation_test(&w));
        prop_assert_eq!(s.relation_test(&w.mul(&c)), d.relation_test(&w.mul(&c)));
    }

    #[test]
    fn substitution_is_transitive(t1 in prop::collection::vec(word(2, 3), 2), t2 in prop::collection::vec(word(2, 3), 2), w in word(2, 6)) {
        let base = construct::quotient(&MarkedGroup::free(2), &[small_cancellation_relator()]).unwrap();
        let once = base.remark_subgroup(&t1).unwrap().remark_subgroup(&t2).unwrap();
        let composed: Vec<Word> = t2.iter().map(|x| x.substitute(&t1)).collect();
        let direct = base.remark_subgroup(&composed).unwrap();
        prop_assert_eq!(once.relation_test(&w), direct.relation_test(&w));
    }
}

/// Naive normal form in Z/2 * Z/3 by merging syllables.
fn free_product_trivial(raw: &[i32]) -> bool {
    let order = |i: i32| if i == 1 { 2 } else { 3 };
    let mut st: Vec<(i32, i32)> = Vec::new();
    for &x in raw {
        let (f, e) = (x.abs(), x.signum());
        match st.last_mut() {
            Some((lf, le)) if *lf == f => {
                *le = (*le + e).rem_euclid(order(f));
                if *le == 0 {
                    st.pop();
                }
            }
            _ => st.push((f, e.rem_euclid(order(f)))),
        }
    }
    st.is_empty()
}

#[test]
fn free_product_agrees_with_syllable_reduction() {
    let m = construct::free_product(&MarkedGroup::cyclic(2), &MarkedGroup::cyclic(3)).unwrap();
    for w in reduced_words_upto(2, 8) {
        assert_eq!(m.relation_test(&w), free_product_trivial(&w.raw()), "{w}");
    }
}

#[test]
fn balls_and_relations_are_dual() {
    let r = 2;
    for m in pool() {
        let ball = m.ball(r).unwrap();
        let rels = m.relations_upto(2 * r);
        let words = reduced_words_upto(2, r);
        let mut classes: Vec<Word> = Vec::new();
        for u in &words {
            if !classes.iter().any(|c| m.equal(c, u)) {
                classes.push(u.clone());
            }
            for v in &words {
                assert_eq!(m.equal(u, v), rels.contains(&u.mul(&v.inverse())));
            }
        }
        assert_eq!(ball.len(), classes.len());
        assert!(rels.words.iter().all(|w| m.relation_test(w)));
    }
}

#[test]
fn metric_is_a_symmetric_ultrametric_with_valid_witnesses() {
    let rmax = 5;
    let ms = pool();
    let mut radius = vec![vec![0; ms.len()]; ms.len()];
    for (i, a) in ms.iter().enumerate() {
        for (j, b) in ms.iter().enumerate() {
            let ag = agreement_radius(a, b, rmax).unwrap();
            radius[i][j] = ag.radius();
            if let Agreement::Exact { v, witness } = &ag {
                assert_eq!(witness.len(), v + 1);
                assert_ne!(a.relation_test(witness), b.relation_test(witness));
                for w in reduced_words_upto(2, *v) {
                    assert_eq!(a.relation_test(&w), b.relation_test(&w));
                }
            }
        }
    }
    for i in 0..ms.len() {
        assert_eq!(radius[i][i], rmax);
        for j in 0..ms.len() {
            assert_eq!(radius[i][j], radius[j][i]);
            for k in 0..ms.len() {
                assert!(radius[i][k] >= radius[i][j].min(radius[j][k]));
            }
        }
    }
}

#[test]
fn free_products_are_continuous() {
    let z = MarkedGroup::free(1);
    let f2 = construct::free_product(&MarkedGroup::integers_marked(&[1]), &z).unwrap();
    for i in 2..=6 {
        let a = construct::free_product(&MarkedGroup::cyclic(i), &z).unwrap();
        let ag = agreement_radius(&a, &f2, 8).unwrap();
        assert_eq!(ag.radius(), i as usize - 1);
        assert_eq!(ag.witness(), Some(&g(1).pow(i)));
    }
}
