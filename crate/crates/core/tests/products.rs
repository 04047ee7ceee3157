use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zsl_core::cyclic_lemma::subset_sums;
use zsl_core::group::MetacyclicParams;
use zsl_core::product::{brute_force_oracle, compute_products, word_product};
use zsl_core::sequence::enumerate_multisets;
use zsl_core::{Group, Sequence, DEFAULT_STATE_BUDGET};

/// Every group of order at most 24 the crate can build: `C_m` and each valid `C_n ⋊_s C_2`.
fn small_groups() -> Vec<Group> {
    let mut groups: Vec<Group> = (1..=24).map(|m| Group::cyclic(m).unwrap()).collect();
    for n in 3..=12 {
        for s in 0..n {
            if let Ok(params) = MetacyclicParams::new(n, s) {
                groups.push(Group::metacyclic(params).unwrap());
            }
        }
    }
    groups
}

fn assert_matches_oracle(group: &Group, seq: &Sequence) {
    let fast = compute_products(group, seq, DEFAULT_STATE_BUDGET).unwrap();
    let slow = brute_force_oracle(group, seq).unwrap();
    assert_eq!(fast.pi, slow.pi, "{} {:?}", group.spec(), seq.terms());
    assert_eq!(fast.subproducts, slow.subproducts, "{} {:?}", group.spec(), seq.terms());
    assert_eq!(fast.product_one_free, slow.product_one_free);
}

#[test]
fn exhaustive_oracle_agreement_up_to_three_terms() {
    for group in small_groups() {
        for k in 0..=3 {
            for seq in enumerate_multisets(group.order(), k) {
                assert_matches_oracle(&group, &seq);
            }
        }
    }
}

#[test]
fn random_oracle_agreement_up_to_seven_terms() {
    let groups = small_groups();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..600 {
        let group = &groups[rng.gen_range(0..groups.len())];
        let k = rng.gen_range(1..=7);
        let terms: Vec<usize> = (0..k).map(|_| rng.gen_range(0..group.order())).collect();
        let seq = Sequence::from_indices(group.order(), terms.iter().copied());
        assert_matches_oracle(group, &seq);
    }
}

#[test]
fn cyclic_products_are_subset_sums() {
    for m in 2..=20u32 {
        let group = Group::cyclic(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(m));
        for _ in 0..50 {
            let k = rng.gen_range(1..=12);
            let residues: Vec<u32> = (0..k).map(|_| rng.gen_range(0..m)).collect();
            let indices: Vec<usize> = residues.iter().map(|&r| r as usize).collect();
            let seq = Sequence::from_indices(m as usize, indices);
            let report = compute_products(&group, &seq, DEFAULT_STATE_BUDGET).unwrap();
            assert_eq!(report.subproducts.0, subset_sums(&residues, m));
            assert_eq!(report.pi.len(), 1);
        }
    }
}

fn metacyclic_case() -> impl Strategy<Value = (Group, Vec<usize>)> {
    prop::sample::select(vec![(8i64, 3i64), (8, 5), (12, 5), (12, 7), (6, 5), (10, 9)]).prop_flat_map(|(n, s)| {
        let group = Group::metacyclic(MetacyclicParams::new(n, s).unwrap()).unwrap();
        let order = group.order();
        (Just(group), prop::collection::vec(0..order, 0..10))
    })
}

proptest! {
    #[test]
    fn subproducts_grow_with_the_sequence((group, terms) in metacyclic_case(), extra in 0usize..24) {
        let g = extra % group.order();
        let seq = Sequence::from_indices(group.order(), terms.iter().copied());
        let mut longer = seq.clone();
        longer.push(g, 1);
        let small = compute_products(&group, &seq, DEFAULT_STATE_BUDGET).unwrap();
        let big = compute_products(&group, &longer, DEFAULT_STATE_BUDGET).unwrap();
        prop_assert_eq!(small.subproducts.0 & !big.subproducts.0, 0);
        prop_assert!(small.product_one_free || !big.product_one_free);
    }

    #[test]
    fn rotating_an_ordering_conjugates_its_product((group, terms) in metacyclic_case()) {
        let seq = Sequence::from_indices(group.order(), terms.iter().copied());
        let pi = compute_products(&group, &seq, DEFAULT_STATE_BUDGET).unwrap().pi;
        for (s, _) in seq.support() {
            let rest = seq.remove(&Sequence::from_indices(group.order(), [s])).unwrap();
            let tail = compute_products(&group, &rest, DEFAULT_STATE_BUDGET).unwrap().pi;
            for p in tail.iter() {
                let h = group.op(s, p);
                prop_assert!(pi.contains(h));
                prop_assert!(pi.contains(group.op(group.op(group.inv(s), h), s)));
            }
        }
    }

    #[test]
    fn witnesses_are_orderings_of_subsequences((group, terms) in metacyclic_case()) {
        let seq = Sequence::from_indices(group.order(), terms.iter().copied());
        let report = compute_products(&group, &seq, DEFAULT_STATE_BUDGET).unwrap();
        match report.witness {
            Some(word) => {
                prop_assert!(!report.product_one_free);
                prop_assert!(!word.is_empty());
                prop_assert_eq!(word_product(&group, &word), group.identity());
                let used = Sequence::from_indices(group.order(), word.iter().copied());
                prop_assert!(used.divides(&seq));
            }
            None => prop_assert!(report.product_one_free),
        }
    }
}
