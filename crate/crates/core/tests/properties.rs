mod common;

use std::cmp::Ordering;

use proptest::prelude::*;

use conflict_zones::config::ScenarioConfig;
use conflict_zones::model::DistanceTable;
use conflict_zones::scenario::utility_field;
use conflict_zones::utility::deposit_utility_with;
use conflict_zones::{
    classify, distance_field, great_circle_km, io, rank_cells, run_scenario, sweep_alpha,
    CountryCode, DecayFunction, GradeField, Resource, ResourceLayer, SortedGradeVector,
    ThresholdScheme,
};

use common::gen::instance;

fn grade_fields() -> impl Strategy<Value = Vec<GradeField>> {
    (1usize..6, 1usize..25).prop_flat_map(|(countries, cells)| {
        proptest::collection::vec(proptest::collection::vec(0u8..6, cells), countries).prop_map(
            |rows| {
                rows.into_iter()
                    .enumerate()
                    .map(|(k, grades)| GradeField {
                        country: Some(CountryCode::new(format!("K{k}"))),
                        resource: Resource::Fish,
                        levels: 6,
                        grades,
                    })
                    .collect()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn distance_is_min_over_sources_and_lipschitz(inst in instance()) {
        let w = &inst.world;
        for c in w.countries() {
            let d = distance_field(w, &c.code).unwrap();
            let owned: Vec<usize> = w.owned_cells(&c.code).collect();
            for cell in 0..w.len() {
                let here = w.grid().center(cell);
                if owned.contains(&cell) {
                    prop_assert_eq!(d.values[cell], 0.0);
                } else if !owned.is_empty() {
                    let best = owned
                        .iter()
                        .map(|&s| common::chord_distance_km((here.lat, here.lon), {
                            let p = w.grid().center(s);
                            (p.lat, p.lon)
                        }))
                        .fold(f64::INFINITY, f64::min);
                    prop_assert!((d.values[cell] - best).abs() < 1e-6, "{} vs {}", d.values[cell], best);
                }
                prop_assert!(d.values[cell] >= 0.0);
                // Distance to a set moves no faster than the point does.
                for other in 0..w.len() {
                    let step = great_circle_km(here, w.grid().center(other));
                    prop_assert!((d.values[cell] - d.values[other]).abs() <= step + 1e-6);
                }
            }
        }
    }

    #[test]
    fn deposit_utility_is_monotone(inst in instance(), cell_pick in any::<prop::sample::Index>(), bump in 0.5f64..50.0, a1 in 0.0f64..=1.0, a2 in 0.0f64..=1.0) {
        let w = &inst.world;
        let layer = inst.layers.get(Resource::Oil).unwrap();
        let g = DecayFunction::default();
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let cell = cell_pick.index(w.len());
        let mut bumped = layer.values().to_vec();
        bumped[cell] += bump;
        let bumped = ResourceLayer::new(Resource::Oil, bumped).unwrap();
        for c in w.countries() {
            let d = distance_field(w, &c.code).unwrap();
            let u_lo = deposit_utility_with(w, &d, layer, &g, lo).unwrap();
            let u_hi = deposit_utility_with(w, &d, layer, &g, hi).unwrap();
            for i in 0..w.len() {
                prop_assert!(u_lo.values[i] <= u_hi.values[i]);
            }
            let u_b = deposit_utility_with(w, &d, &bumped, &g, hi).unwrap();
            for i in 0..w.len() {
                if i == cell {
                    prop_assert!(u_b.values[i] >= u_hi.values[i]);
                } else {
                    prop_assert_eq!(u_b.values[i], u_hi.values[i]);
                }
            }
            // Equal deposits and treatment: the nearer cell is worth at least as much.
            for i in 0..w.len() {
                for j in 0..w.len() {
                    let same = layer.values()[i] == layer.values()[j]
                        && w.cell_status(i, &c.code) == w.cell_status(j, &c.code);
                    if same && d.values[i] <= d.values[j] {
                        prop_assert!(u_hi.values[i] >= u_hi.values[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_one_matches_relabeled_world_per_cell(inst in instance()) {
        let w = &inst.world;
        let relabeled = w.relabeled_international();
        let distances = DistanceTable::compute(w).unwrap();
        let cfg = ScenarioConfig::default().with_uniform_alpha(1.0);
        for r in Resource::ALL {
            let layer = inst.layers.get(r).unwrap();
            for c in w.countries() {
                let a = utility_field(w, &distances, layer, &c.code, &cfg).unwrap();
                let b = utility_field(&relabeled, &distances, layer, &c.code, &cfg).unwrap();
                prop_assert_eq!(a.values, b.values);
            }
        }
    }

    #[test]
    fn classes_respect_the_ranking(fields in grade_fields()) {
        let ranking = rank_cells(&fields).unwrap();
        let boundaries = vec![
            SortedGradeVector::new(vec![1; fields.len()]).unwrap(),
            SortedGradeVector::new(std::iter::once(4).chain(std::iter::repeat_n(0, fields.len() - 1)).collect()).unwrap(),
            SortedGradeVector::new(vec![5; fields.len()]).unwrap(),
        ];
        for scheme in [ThresholdScheme::quantile(6), ThresholdScheme::ReferenceVectors { boundaries }] {
            let classes = classify(&ranking, &scheme).unwrap();
            let n = fields[0].grades.len();
            for a in 0..n {
                if ranking.vector(a).is_zero() {
                    prop_assert_eq!(classes.classes[a], 0);
                } else if matches!(scheme, ThresholdScheme::Quantile { .. }) {
                    prop_assert!(classes.classes[a] > 0);
                }
                for b in 0..n {
                    match ranking.compare_cells(a, b) {
                        Ordering::Greater => prop_assert!(classes.classes[a] >= classes.classes[b]),
                        Ordering::Equal => prop_assert_eq!(classes.classes[a], classes.classes[b]),
                        Ordering::Less => prop_assert!(classes.classes[a] <= classes.classes[b]),
                    }
                }
            }
        }
    }

    #[test]
    fn runs_are_deterministic_and_sweeps_match_single_runs(inst in instance(), a in 0.0f64..=1.0) {
        let cfg = ScenarioConfig::default().with_uniform_alpha(a);
        let r1 = run_scenario(&inst.world, &inst.layers, &cfg).unwrap();
        let r2 = run_scenario(&inst.world, &inst.layers, &cfg).unwrap();
        prop_assert_eq!(io::write_result(&r1), io::write_result(&r2));
        let swept = sweep_alpha(&inst.world, &inst.layers, &ScenarioConfig::default(), &[1.0 - a, a]).unwrap();
        prop_assert_eq!(&swept[1].1, &r1);
        prop_assert_eq!(r1.class_counts.iter().sum::<usize>(), inst.world.len());
    }
}
