use proptest::prelude::*;

use ksep_core::compression::check_preconditions;
use ksep_core::{
    compatibility_graph, compress_family, enumerate_k_separated, is_intersecting, is_k_separated,
    max_clique, restrict_pair, sample_intersecting, shift, star_bound, trace, CompatGraph, Family,
    KSet, Params, SampleMode,
};

/// Parameters with a nonempty universe, small enough to enumerate quickly.
fn nonempty_params() -> impl Strategy<Value = Params> {
    (1u32..=4, 1u32..=5)
        .prop_flat_map(|(k, r)| {
            (
                (k + 1) * r..=((k + 1) * r + 5).min(18).max((k + 1) * r),
                Just(k),
                Just(r),
            )
        })
        .prop_map(|(n, k, r)| Params::new(n, k, r).unwrap())
}

/// Instances small enough for repeated exact clique searches.
fn search_params() -> impl Strategy<Value = Params> {
    (1u32..=3, 1u32..=4)
        .prop_flat_map(|(k, r)| {
            (
                (k + 1) * r..=((k + 1) * r + 3).min(12).max((k + 1) * r),
                Just(k),
                Just(r),
            )
        })
        .prop_map(|(n, k, r)| Params::new(n, k, r).unwrap())
}

/// A parameter set plus one of its members.
fn member() -> impl Strategy<Value = KSet> {
    nonempty_params().prop_flat_map(|p| {
        let sets = enumerate_k_separated(p);
        (0..sets.len()).prop_map(move |i| sets[i].clone())
    })
}

/// A parameter set plus an arbitrary subfamily.
fn subfamily() -> impl Strategy<Value = Family> {
    nonempty_params().prop_flat_map(|p| {
        let sets = enumerate_k_separated(p);
        let m = sets.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            Family::new(
                p,
                sets.iter()
                    .zip(&keep)
                    .filter(|(_, &k)| k)
                    .map(|(s, _)| s.clone()),
            )
            .unwrap()
        })
    })
}

fn modes() -> impl Strategy<Value = SampleMode> {
    prop_oneof![
        Just(SampleMode::Greedy),
        Just(SampleMode::StarSeeded),
        Just(SampleMode::ShiftActive)
    ]
}

proptest! {
    #[test]
    fn rotation_round_trip_keeps_separation(s in member(), d in -100i64..100) {
        let p = s.params();
        let rotated = s.rotate(d);
        prop_assert_eq!(rotated.rotate(-d), s.clone());
        prop_assert!(is_k_separated(rotated.elems(), p.n, p.k).unwrap());
        prop_assert_eq!(s.rotate(p.n as i64), s);
    }

    #[test]
    fn shift_is_closed_and_idempotent(s in member()) {
        let p = s.params();
        prop_assume!(p.n > (p.k + 1) * p.r);
        let image = shift(&s).unwrap();
        prop_assert!(is_k_separated(image.elems(), p.n, p.k).unwrap());
        prop_assert_eq!(shift(&image).unwrap(), image);
    }

    #[test]
    fn compression_preserves_size(f in subfamily()) {
        prop_assert_eq!(compress_family(&f).unwrap().len(), f.len());
    }

    #[test]
    fn trace_counts_members(f in subfamily(), i in 1u32..=18) {
        let p = f.params();
        prop_assume!(i <= p.n);
        let t = trace(&f, i).unwrap();
        prop_assert_eq!(t.len(), f.iter().filter(|s| s.contains(i)).count());
        prop_assert!(t.iter().all(|s| s.len() + 1 == p.r as usize));
    }

    #[test]
    fn pair_restriction_is_a_subfamily(f in subfamily(), i in 1u32..=18, j in 1u32..=18) {
        let p = f.params();
        prop_assume!(i <= p.n && j <= p.n && i != j);
        let part = restrict_pair(&f, i, j).unwrap();
        prop_assert!(part.is_subfamily_of(&f));
        prop_assert_eq!(trace(&part, j).unwrap().len(), part.len());
    }

    #[test]
    fn samples_are_intersecting_and_reproducible(
        p in nonempty_params(),
        seed in any::<u64>(),
        density in 0.0f64..=1.0,
        mode in modes(),
    ) {
        let a = sample_intersecting(p, seed, density, mode).unwrap();
        prop_assert!(is_intersecting(&a.family).holds());
        prop_assert_eq!(&a, &sample_intersecting(p, seed, density, mode).unwrap());
    }

    #[test]
    fn sampled_families_meet_the_decomposition_preconditions(
        p in nonempty_params(),
        seed in any::<u64>(),
    ) {
        prop_assume!(p.r >= 2 && p.n > (p.k + 1) * p.r);
        let a = sample_intersecting(p, seed, 0.8, SampleMode::ShiftActive).unwrap();
        prop_assert!(check_preconditions(&a.family).is_ok());
    }
}

fn rotated_graph(p: Params, d: i64) -> CompatGraph {
    let sets = enumerate_k_separated(p)
        .iter()
        .map(|s| s.rotate(d))
        .collect();
    CompatGraph::from_sets(p, sets)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn optimum_is_rotation_invariant(p in search_params(), d in proptest::collection::vec(1i64..64, 2)) {
        let hint = star_bound(p.n, p.k, p.r).unwrap() as usize;
        let base = max_clique(&compatibility_graph(p), hint);
        for shift_by in d {
            let g = rotated_graph(p, shift_by);
            let c = max_clique(&g, hint);
            prop_assert_eq!(c.size, base.size);
            prop_assert!(g.is_clique(&c.vertices));
        }
    }

    #[test]
    fn solver_is_deterministic(p in search_params()) {
        let g = compatibility_graph(p);
        let hint = star_bound(p.n, p.k, p.r).unwrap() as usize;
        prop_assert_eq!(max_clique(&g, hint), max_clique(&g, hint));
    }
}
