use proptest::prelude::*;

use bttp::bounds::{ilb_total, lb_lemma1};
use bttp::construction::{build_schedule, choose_params, Labeling, ParamMode, Variant};
use bttp::localsearch::{labeling_weight, swap_improve, SearchConfig};
use bttp::schedule::{total_distance, validate_schedule};
use bttp::{Instance, Schedule};

fn instance_from(n: usize, pts: &[(f64, f64)]) -> Instance {
    let m = pts
        .iter()
        .map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
        .collect();
    Instance::from_matrix("prop", n, m, None).unwrap()
}

fn feasible_n() -> impl Strategy<Value = usize> {
    (3usize..=30).prop_filter("has parameters", |&n| choose_params(n, ParamMode::Practical).is_ok())
}

fn instance(n: usize) -> impl Strategy<Value = Instance> {
    prop::collection::vec((0.0..500.0f64, 0.0..500.0f64), 2 * n).prop_map(move |pts| instance_from(n, &pts))
}

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Path3), Just(Variant::Cycle3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn any_labeling_gives_a_feasible_schedule(
        (n, inst) in feasible_n().prop_flat_map(|n| (Just(n), instance(n))),
        seed in any::<u64>(),
        variant in variant(),
    ) {
        let p = choose_params(n, ParamMode::Practical).unwrap();
        let s = build_schedule(&inst, &p, &Labeling::random(n, seed), variant).unwrap();
        prop_assert!(validate_schedule(&s).is_empty());
        prop_assert_eq!(s.game_count(), 2 * n * n);
        prop_assert_eq!(s.days(), 2 * n);
    }

    #[test]
    fn schedule_json_round_trips(n in feasible_n(), seed in any::<u64>(), variant in variant()) {
        let inst = instance_from(n, &vec![(0.0, 0.0); 2 * n]);
        let p = choose_params(n, ParamMode::Practical).unwrap();
        let s = build_schedule(&inst, &p, &Labeling::random(n, seed), variant).unwrap();
        prop_assert_eq!(Schedule::parse(s.to_json().as_bytes()).unwrap(), s);
    }

    #[test]
    fn distance_scales_linearly(
        (n, inst) in feasible_n().prop_flat_map(|n| (Just(n), instance(n))),
        seed in any::<u64>(),
        factor in 0.1..10.0f64,
    ) {
        let p = choose_params(n, ParamMode::Practical).unwrap();
        let s = build_schedule(&inst, &p, &Labeling::random(n, seed), Variant::Path3).unwrap();
        let base = total_distance(&s, &inst).unwrap();
        let scaled = total_distance(&s, &inst.scaled(factor)).unwrap();
        prop_assert!((scaled - factor * base).abs() <= 1e-9 * scaled.max(1.0));
    }

    #[test]
    fn schedules_respect_lower_bounds(
        (n, inst) in (3usize..=12)
            .prop_filter("has parameters", |&n| choose_params(n, ParamMode::Practical).is_ok())
            .prop_flat_map(|n| (Just(n), instance(n))),
        seed in any::<u64>(),
        variant in variant(),
    ) {
        let p = choose_params(n, ParamMode::Practical).unwrap();
        let w = labeling_weight(&inst, &p, &Labeling::random(n, seed), variant).unwrap();
        let tol = 1.0 + 1e-9;
        prop_assert!(w * tol >= ilb_total(&inst).unwrap());
        prop_assert!(w * tol >= lb_lemma1(&inst));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn local_search_never_worsens(
        (n, inst) in (3usize..=9)
            .prop_filter("has parameters", |&n| choose_params(n, ParamMode::Practical).is_ok())
            .prop_flat_map(|n| (Just(n), instance(n))),
        seed in any::<u64>(),
        variant in variant(),
    ) {
        let p = choose_params(n, ParamMode::Practical).unwrap();
        let start = Labeling::random(n, seed);
        let before = labeling_weight(&inst, &p, &start, variant).unwrap();
        let cfg = SearchConfig { seed, max_passes: 2, variant };
        let out = swap_improve(&inst, &p, &start, &cfg).unwrap();
        prop_assert!(out.weight <= before);
        out.labeling.validate(n).unwrap();
        prop_assert_eq!(out.weight, labeling_weight(&inst, &p, &out.labeling, variant).unwrap());
    }
}
