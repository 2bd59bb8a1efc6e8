use std::collections::BTreeSet;

use proptest::prelude::*;
use sofic_core::group::{consequences, is_n_separated};
use sofic_core::{FiniteGroup, Permutation};

/// Literal `C_n(X, G)` with permutation arithmetic only.
fn oracle(group: &FiniteGroup, x: &[Permutation], n: usize) -> BTreeSet<Permutation> {
    let mut letters = BTreeSet::new();
    for base in x {
        for s in [base.clone(), base.inverse()] {
            for g in group.elements() {
                letters.insert(g.inverse().compose(&s).unwrap().compose(g).unwrap());
            }
        }
    }
    let mut layer = BTreeSet::from([Permutation::identity(group.degree())]);
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|a| letters.iter().map(move |b| a.compose(b).unwrap()))
            .collect();
    }
    layer
}

fn pick(group: &FiniteGroup, ids: &[usize]) -> Vec<Permutation> {
    ids.iter()
        .map(|&i| group.element(i % group.order()).clone())
        .collect()
}

fn arb_ids() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..24, 1..3)
}

fn s4() -> FiniteGroup {
    FiniteGroup::symmetric(4).unwrap()
}

#[test]
fn matches_literal_definition_on_s4() {
    let g = s4();
    for x in g.elements().iter().step_by(3) {
        for n in 1..=4 {
            let set = consequences(&g, std::slice::from_ref(x), n).unwrap();
            let expected: Vec<Permutation> =
                oracle(&g, std::slice::from_ref(x), n).into_iter().collect();
            assert_eq!(set.elements, expected, "x = {x}, n = {n}");
        }
    }
}

#[test]
fn klein_closure_in_a4() {
    let a4 = FiniteGroup::alternating(4).unwrap();
    let x = Permutation::parse("(1 2)(3 4)", 4).unwrap();
    let y = Permutation::parse("(1 2 3)", 4).unwrap();
    for n in 1..=8 {
        let r = is_n_separated(&a4, std::slice::from_ref(&y), std::slice::from_ref(&x), n).unwrap();
        assert!(r.verdict.is_separated());
    }
}

#[test]
fn projection_onto_factors() {
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let product = FiniteGroup::direct_product("S3xZ4", &[&s3, &z4]).unwrap();
    let factors = [&s3, &z4];
    for x in product.elements().iter().step_by(5) {
        for n in 1..=3 {
            let whole = consequences(&product, std::slice::from_ref(x), n).unwrap();
            for (j, factor) in factors.iter().enumerate() {
                let projected: BTreeSet<Permutation> = whole
                    .elements
                    .iter()
                    .map(|p| product.project(p, j))
                    .collect();
                let xj = product.project(x, j);
                let direct: BTreeSet<Permutation> = consequences(factor, &[xj], n)
                    .unwrap()
                    .elements
                    .into_iter()
                    .collect();
                assert_eq!(projected, direct, "x = {x}, n = {n}, factor {j}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_saturated(ids in arb_ids(), n in 1usize..4) {
        let g = s4();
        let x = pick(&g, &ids);
        let set: BTreeSet<Permutation> = consequences(&g, &x, n).unwrap().elements.into_iter().collect();
        for h in g.elements() {
            let moved: BTreeSet<Permutation> = set.iter().map(|c| c.conjugate(h).unwrap()).collect();
            prop_assert_eq!(&moved, &set);
        }
    }

    #[test]
    fn depth_monotone_by_two(ids in arb_ids(), n in 1usize..5) {
        let g = s4();
        let x = pick(&g, &ids);
        let small: BTreeSet<Permutation> = consequences(&g, &x, n).unwrap().elements.into_iter().collect();
        let large: BTreeSet<Permutation> = consequences(&g, &x, n + 2).unwrap().elements.into_iter().collect();
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn separation_inherited_two_steps_down(xs in arb_ids(), ys in arb_ids(), n in 3usize..7) {
        let g = FiniteGroup::alternating(4).unwrap();
        let x = pick(&g, &xs);
        let y = pick(&g, &ys);
        let far = is_n_separated(&g, &y, &x, n).unwrap();
        if far.verdict.is_separated() {
            prop_assert!(is_n_separated(&g, &y, &x, n - 2).unwrap().verdict.is_separated());
        }
    }
}
