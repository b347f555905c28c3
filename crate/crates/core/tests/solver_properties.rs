use proptest::prelude::*;
use stabmap_core::cultures::{generate, generate_sm, Culture, CultureSpec};
use stabmap_core::solvers::{
    count_blocking_pairs, enumerate_stable_matchings, gale_shapley, irving_stable_matching,
    min_blocking_pairs_matching, min_weight_perfect_matching, optimal_stable_matching, regret, summed_rank,
    Objective, Side, DEFAULT_LIMIT_K, DEFAULT_STABLE_CAP,
};

fn culture() -> impl Strategy<Value = Culture> {
    prop_oneof![
        Just(Culture::Ic),
        (0.0f64..=1.0).prop_map(|norm_phi| Culture::Mallows { norm_phi }),
        (1usize..=2).prop_map(|d| Culture::Euclidean { d }),
        (0.0f64..=0.5).prop_map(|p| Culture::TwoIc { p }),
        (0.0f64..=1.0).prop_map(|norm_phi| Culture::MallowsMd { norm_phi }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn irving_result_is_stable(c in culture(), seed in any::<u64>(), half in 2usize..=7) {
        let i = generate(&CultureSpec::new(c, seed), 2 * half).unwrap();
        if let Some(m) = irving_stable_matching(i.profile()) {
            prop_assert_eq!(count_blocking_pairs(i.profile(), &m).unwrap(), 0);
        }
    }

    #[test]
    fn stable_set_bounds(c in culture(), seed in any::<u64>(), half in 2usize..=5) {
        let i = generate(&CultureSpec::new(c, seed), 2 * half).unwrap();
        let p = i.profile();
        let set = enumerate_stable_matchings(p, DEFAULT_STABLE_CAP).unwrap();
        prop_assert_eq!(set.matchings.is_empty(), irving_stable_matching(p).is_none());
        let (_, w) = min_weight_perfect_matching(p).unwrap();
        for m in &set.matchings {
            prop_assert_eq!(count_blocking_pairs(p, m).unwrap(), 0);
            prop_assert!(w <= summed_rank(p, m));
        }
        if let Some(r) = optimal_stable_matching(p, Objective::MinRegret).unwrap().value() {
            prop_assert!(set.matchings.iter().all(|m| r <= regret(p, m)));
        }
        let k = min_blocking_pairs_matching(p, DEFAULT_LIMIT_K).unwrap().value().unwrap();
        prop_assert_eq!(k == 0, !set.matchings.is_empty());
    }

    #[test]
    fn marriage_stable_sets_contain_both_extremes(seed in any::<u64>(), n in 1usize..=6) {
        let s = generate_sm(&CultureSpec::new(Culture::Ic, seed), n).unwrap();
        let set = enumerate_stable_matchings(s.profile(), DEFAULT_STABLE_CAP).unwrap();
        for side in [Side::Men, Side::Women] {
            let m = gale_shapley(&s, side);
            prop_assert!(set.matchings.contains(&m));
        }
    }
}
