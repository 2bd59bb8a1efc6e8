use num_traits::One;
use proptest::prelude::*;
use sofic_core::perm::{
    direct_sum, embed_sym_in_alt, length_of_tensor_power, replicate, tensor_power,
};
use sofic_core::rational::ratio;
use sofic_core::{FiniteGroup, Permutation, Rational};

fn moved(images: &[u32]) -> usize {
    images
        .iter()
        .enumerate()
        .filter(|&(i, &p)| i as u32 != p)
        .count()
}

fn hamming(p: &Permutation) -> Rational {
    ratio(moved(p.images()) as i64, p.degree() as i64)
}

fn arb_perm(max_degree: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_degree)
        .prop_flat_map(|m| Just((0..m as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn arb_pair(max_degree: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max_degree).prop_flat_map(|m| {
        let v: Vec<u32> = (0..m as u32).collect();
        (Just(v.clone()).prop_shuffle(), Just(v).prop_shuffle()).prop_map(|(a, b)| {
            (
                Permutation::from_images(a).unwrap(),
                Permutation::from_images(b).unwrap(),
            )
        })
    })
}

#[test]
fn right_action_convention() {
    // (1)(1 2)(2 3) = (2)(2 3) = 3: apply the left factor first
    let a = Permutation::parse("(1 2)", 3).unwrap();
    let b = Permutation::parse("(2 3)", 3).unwrap();
    let ab = a.compose(&b).unwrap();
    assert_eq!(ab.apply(0), 2);
    assert_eq!(ab, Permutation::parse("(1 3 2)", 3).unwrap());
}

#[test]
fn tensor_power_identity_on_s4() {
    let s4 = FiniteGroup::symmetric(4).unwrap();
    for h in s4.elements() {
        for r in 1..=3u32 {
            let t = tensor_power(h, r, 1 << 20).unwrap();
            let fixed = Rational::one() - hamming(&t);
            let formula = (Rational::one() - hamming(h)).pow(r as i32);
            assert_eq!(fixed, formula, "{h} r={r}");
            assert_eq!(
                length_of_tensor_power(&h.hamming_length(), r).value(),
                &hamming(&t)
            );
        }
    }
}

#[test]
fn direct_sum_formula_on_s3_times_s4() {
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let s4 = FiniteGroup::symmetric(4).unwrap();
    for a in s3.elements() {
        for b in s4.elements() {
            let s = direct_sum(a, b);
            assert_eq!(s.degree(), 7);
            let expected = (hamming(a) * ratio(3, 1) + hamming(b) * ratio(4, 1)) / ratio(7, 1);
            assert_eq!(hamming(&s), expected);
        }
    }
}

#[test]
fn sym_to_alt_embedding_on_s4() {
    let s4 = FiniteGroup::symmetric(4).unwrap();
    let mut images = Vec::new();
    for g in s4.elements() {
        let e = embed_sym_in_alt(g);
        assert_eq!(e.degree(), 8);
        // even: an even number of even-length cycles
        let even_cycles = e.cycles().iter().filter(|c| c.len() % 2 == 0).count();
        assert_eq!(even_cycles % 2, 0, "{g}");
        assert_eq!(hamming(&e), hamming(g));
        for h in s4.elements() {
            let gh = g.compose(h).unwrap();
            assert_eq!(
                embed_sym_in_alt(&gh),
                embed_sym_in_alt(g).compose(&embed_sym_in_alt(h)).unwrap()
            );
        }
        images.push(e);
    }
    images.sort();
    images.dedup();
    assert_eq!(images.len(), 24);
}

proptest! {
    #[test]
    fn replication_keeps_length(p in arb_perm(7), copies in 1usize..4) {
        let r = replicate(&p, copies);
        prop_assert_eq!(r.degree(), p.degree() * copies);
        prop_assert_eq!(hamming(&r), hamming(&p));
    }

    #[test]
    fn direct_sum_is_blockwise((a, b) in arb_pair(6), (c, d) in arb_pair(5)) {
        // (a⊕c)(b⊕d) = ab ⊕ cd
        let lhs = direct_sum(&a, &c).compose(&direct_sum(&b, &d)).unwrap();
        let rhs = direct_sum(&a.compose(&b).unwrap(), &c.compose(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_power_is_multiplicative((a, b) in arb_pair(4), r in 1u32..4) {
        let lhs = tensor_power(&a.compose(&b).unwrap(), r, 1 << 16).unwrap();
        let rhs = tensor_power(&a, r, 1 << 16).unwrap().compose(&tensor_power(&b, r, 1 << 16).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn length_is_subadditive_and_invariant((g, h) in arb_pair(9)) {
        let gh = g.compose(&h).unwrap();
        prop_assert!(hamming(&gh) <= hamming(&g) + hamming(&h));
        prop_assert_eq!(hamming(&g.conjugate(&h).unwrap()), hamming(&g));
        prop_assert_eq!(g.hamming_length().into_inner(), hamming(&g));
    }

    #[test]
    fn cycle_notation_round_trip(p in arb_perm(9)) {
        let text = p.to_string();
        prop_assert_eq!(Permutation::parse(&text, p.degree()).unwrap(), p);
    }
}
