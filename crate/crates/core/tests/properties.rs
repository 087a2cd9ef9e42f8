//! Property suites that do not depend on the published tables.

use atlas_algebra::PrimeField;
use proptest::prelude::*;
use quintic_atlas::apolar::{apolar_profile, stable_profile};
use quintic_atlas::enumerate::tabulated_states;
use quintic_atlas::filters::{run_pipeline, PipelineConfig};
use quintic_atlas::forms::sample_generic_with;
use quintic_atlas::lattice::{
    all_perms, barycenter_position, halfspace, BarycenterPosition, MonomialSet, Relation,
    WeightVector, ETA, LATTICE_SIZE,
};
use quintic_atlas::seeds;
use quintic_atlas::singular::milnor_number;
use rand::SeedableRng;

fn weight() -> impl Strategy<Value = WeightVector> {
    prop::array::uniform4(-30i64..=30)
        .prop_map(|a| WeightVector([a[0], a[1], a[2], a[3], -a.iter().sum::<i64>()]))
}

fn subset() -> impl Strategy<Value = MonomialSet> {
    any::<u128>().prop_map(|m| MonomialSet(m & MonomialSet::full().0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn halfspaces_partition_the_lattice(r in weight()) {
        let pos = halfspace(&r, Relation::Gt);
        let zero = halfspace(&r, Relation::Eq);
        let neg = halfspace(&r.neg(), Relation::Gt);
        prop_assert_eq!(pos.len() + zero.len() + neg.len(), LATTICE_SIZE);
        prop_assert!(pos.intersection(&zero).is_empty() && pos.intersection(&neg).is_empty());
        prop_assert_eq!(pos.union(&zero).union(&neg), MonomialSet::full());
        prop_assert_eq!(halfspace(&r, Relation::Ge), pos.union(&zero));
        prop_assert_eq!(halfspace(&r, Relation::Ge).intersection(&halfspace(&r.neg(), Relation::Ge)), zero);
        prop_assert!(zero.contains(&ETA));
    }

    #[test]
    fn halfspaces_are_scale_and_permutation_equivariant(r in weight(), c in 1i64..5, p in 0usize..120) {
        let scaled = WeightVector(r.0.map(|x| x * c));
        prop_assert_eq!(halfspace(&scaled, Relation::Ge), halfspace(&r, Relation::Ge));
        let sigma = &all_perms()[p];
        prop_assert_eq!(
            halfspace(&r.permuted(sigma), Relation::Ge),
            halfspace(&r, Relation::Ge).permuted(sigma)
        );
        prop_assert_eq!(halfspace(&r.dominant(), Relation::Ge).len(), halfspace(&r, Relation::Ge).len());
    }

    #[test]
    fn destabilized_sets_are_not_stable(r in weight()) {
        prop_assume!(!r.is_zero());
        let open = halfspace(&r, Relation::Gt);
        if !open.is_empty() {
            prop_assert_eq!(barycenter_position(&open).unwrap(), BarycenterPosition::Unstable);
        }
        prop_assert_ne!(barycenter_position(&halfspace(&r, Relation::Ge)).unwrap(), BarycenterPosition::Stable);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apolar_profiles_are_gorenstein(s in subset(), seed in any::<u64>()) {
        prop_assume!(!s.is_empty());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = sample_generic_with(&s, &mut rng, &PrimeField::default());
        let p = apolar_profile(&f).unwrap();
        prop_assert!(p.is_symmetric());
        prop_assert_eq!(p.hf[0], 1);
        prop_assert!(p.hf[1] <= 5 && p.hf[2] <= 15);
    }

    #[test]
    fn milnor_number_of_diagonal_types(a in prop::array::uniform4(2u32..8)) {
        // x^a + y^b + z^c + w^d has weights D/a, …, and Milnor number ∏(a - 1)
        let d: u32 = a.iter().product();
        let w = a.map(|e| d / e);
        prop_assert_eq!(milnor_number(&w, d).unwrap(), a.iter().map(|&e| (e - 1) as u64).product::<u64>());
    }
}

#[test]
fn state_profiles_are_gorenstein() {
    for st in tabulated_states() {
        let p = stable_profile(&st.support, 4, 11, &PrimeField::default())
            .unwrap()
            .profile;
        assert!(p.is_symmetric(), "k = {}", st.k);
    }
}

#[test]
fn early_stages_partition_the_pairs() {
    let states = tabulated_states();
    for seed in [1, 2] {
        let cfg = PipelineConfig {
            seed,
            last_stage: 2,
            ..Default::default()
        };
        let r = run_pipeline(&states, &PrimeField::default(), &cfg).unwrap();
        assert!(r.is_partition());
        assert_eq!(r.start.len(), 1406);
        let removed: usize = r.stages.iter().map(|s| s.excluded.len()).sum();
        assert_eq!(removed + r.survivors().len(), 1406);
    }
}

#[test]
fn seeds_are_reproducible() {
    let s = tabulated_states()[0].support;
    let a = sample_generic_with(&s, &mut seeds::rng(5, "x", 1), &PrimeField::default());
    let b = sample_generic_with(&s, &mut seeds::rng(5, "x", 1), &PrimeField::default());
    assert_eq!(a, b);
}
