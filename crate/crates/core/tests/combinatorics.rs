//! The pair-multiplicity lemmas on randomly generated small groups.

use moelab::combinatorics::{
    ball2_has_involution, girth, is_minimal_generating_set, pair_multiplicity, pair_multiplicity_free_product,
};
use moelab::groups::{FreeFactor, DEFAULT_BUDGET};
use moelab::GroupSpec;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Cyclic groups with arbitrary generating subsets and small direct products.
fn small_group() -> impl Strategy<Value = GroupSpec> {
    let cyclic = (3u64..20)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::sample::subsequence((1..n).collect::<Vec<_>>(), 1..=(n as usize - 1).min(3)),
            )
        })
        .prop_filter_map("not generating", |(n, gens)| GroupSpec::cyclic_with(n, gens).ok());
    let product = (2u64..6, 2u64..6)
        .prop_map(|(a, b)| GroupSpec::direct_product(vec![GroupSpec::cyclic(a), GroupSpec::cyclic(b)]).unwrap());
    let power = (2u64..5, 2usize..4).prop_map(|(n, k)| GroupSpec::direct_power(GroupSpec::cyclic(n), k).unwrap());
    prop_oneof![3 => cyclic, 1 => product, 1 => power]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minimal_without_involution_forces_multiplicity_one(g in small_group()) {
        let minimal = is_minimal_generating_set(&g, DEFAULT_BUDGET).unwrap();
        let involution = ball2_has_involution(&g, DEFAULT_BUDGET).unwrap();
        if minimal && !involution {
            prop_assert_eq!(pair_multiplicity(&g, DEFAULT_BUDGET).unwrap().value, 1, "{}", g);
        }
    }

    #[test]
    fn girth_five_forces_multiplicity_one(g in small_group()) {
        let gi = girth(&g, 32, DEFAULT_BUDGET).unwrap();
        if gi.value.value().is_none_or(|v| v >= 5) {
            prop_assert_eq!(pair_multiplicity(&g, DEFAULT_BUDGET).unwrap().value, 1, "{}", g);
        }
    }

    #[test]
    fn free_product_multiplicity_is_max_over_factors(
        a in small_group(),
        b in small_group(),
        ca in 1u32..3,
        cb in 1u32..3,
    ) {
        let factors = vec![
            FreeFactor { group: a.clone(), copies: BigUint::from(ca) },
            FreeFactor { group: b.clone(), copies: BigUint::from(cb) },
        ];
        let lemma = pair_multiplicity_free_product(&factors, DEFAULT_BUDGET).unwrap();
        let expanded = GroupSpec::free_product([(a, BigUint::from(ca)), (b, BigUint::from(cb))]).unwrap();
        let direct = pair_multiplicity(&expanded, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(lemma.value, direct.value, "{}", expanded);
    }
}

#[test]
fn multiplicity_witnesses_share_the_quotient() {
    for spec in ["Z4[1,2,3]", "Z12[3,4,6]", "Z2^3", "dprod(Z4,Z6)"] {
        let g = GroupSpec::parse(spec).unwrap();
        let r = pair_multiplicity(&g, DEFAULT_BUDGET).unwrap();
        let gens = g.generators(DEFAULT_BUDGET).unwrap();
        let w = r.witness.expect("non-degenerate");
        assert_eq!(w.pairs.len() as u64, r.value);
        let quotients: Vec<_> = w
            .pairs
            .iter()
            .map(|&(s, t)| g.multiply(&g.inverse(&gens[s]).unwrap(), &gens[t]).unwrap())
            .collect();
        assert!(quotients.windows(2).all(|q| q[0] == q[1]), "{spec}");
        assert!(!g.is_identity(&quotients[0]));
        assert_eq!(g.format_element(&quotients[0]), w.element);
    }
}
