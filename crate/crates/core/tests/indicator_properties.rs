use lta_core::directions::{gen_unv, Provenance};
use lta_core::objective::sample_front;
use lta_core::r2hvc::r2hvc_all;
use lta_core::{dominates, r2hvc, DirectionSet, FrontShape, FrontSpec, LengthMatrix, ReferencePoint, SolutionSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, dim: usize, points: usize) -> (SolutionSet, ReferencePoint) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = if seed.is_multiple_of(2) { FrontShape::Triangular } else { FrontShape::Inverted };
    let p = rng.random_range(0.5..=2.0);
    let set = sample_front(&FrontSpec::new(shape, p, dim).unwrap(), points, &mut rng).unwrap();
    (set, ReferencePoint::uniform(dim, 1.2).unwrap())
}

fn without(dirs: &DirectionSet, k: usize) -> DirectionSet {
    let rows: Vec<Vec<f64>> = dirs.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| v.to_vec()).collect();
    DirectionSet::new(rows, Provenance::new("subset")).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

#[test]
fn leave_one_out_matches_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..100u64 {
        let dim = [2, 3, 5][case as usize % 3];
        let points = rng.random_range(2..=20);
        let n = rng.random_range(2..=10);
        let (set, r) = instance(case, dim, points);
        let dirs = gen_unv(dim, n, &mut rng).unwrap();
        let matrix = LengthMatrix::build(&set, &dirs, &r).unwrap();
        for k in 0..n {
            let fast = matrix.leave_one_out_values(k).unwrap();
            let reduced = without(&dirs, k);
            for (i, v) in fast.iter().enumerate() {
                let slow = r2hvc(set.point(i), &set, &reduced, &r).unwrap();
                assert!(close(*v, slow, 1e-9), "case {case} k={k} i={i}: {v} vs {slow}");
            }
        }
    }
}

#[test]
fn identical_columns_make_leave_one_out_independent_of_k() {
    let (set, r) = instance(4, 3, 10);
    let lambda = vec![0.6, 0.0, 0.8];
    let dirs = DirectionSet::new(vec![lambda.clone(); 4], Provenance::new("same")).unwrap();
    let matrix = LengthMatrix::build(&set, &dirs, &r).unwrap();
    let first = matrix.leave_one_out_values(0).unwrap();
    for k in 1..4 {
        assert_eq!(matrix.leave_one_out_values(k).unwrap(), first);
    }
}

#[test]
fn batch_values_equal_single_calls() {
    let (set, r) = instance(7, 3, 15);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dirs = gen_unv(3, 12, &mut rng).unwrap();
    let all = r2hvc_all(&set, &dirs, &r).unwrap();
    for (i, v) in all.iter().enumerate() {
        assert!(close(*v, r2hvc(set.point(i), &set, &dirs, &r).unwrap(), 1e-12));
    }
}

fn unit_strategy(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, dim).prop_filter_map("zero vector", |v| {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| v.iter().map(|x| x / norm).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dominance_is_irreflexive_and_antisymmetric(
        a in prop::collection::vec(-5.0f64..5.0, 3),
        b in prop::collection::vec(-5.0f64..5.0, 3),
    ) {
        prop_assert!(!dominates(&a, &a).unwrap());
        prop_assert!(!(dominates(&a, &b).unwrap() && dominates(&b, &a).unwrap()));
    }

    #[test]
    fn value_is_non_negative_and_positive_on_fronts(seed in 0u64..1000, n in 1usize..8) {
        let (set, r) = instance(seed, 3, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dirs = gen_unv(3, n, &mut rng).unwrap();
        for s in set.iter() {
            prop_assert!(r2hvc(s, &set, &dirs, &r).unwrap() > 0.0);
        }
    }

    #[test]
    fn adding_points_never_increases_the_value(seed in 0u64..1000, extra in 1usize..5) {
        let (set, r) = instance(seed, 3, 6 + extra);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let dirs = gen_unv(3, 6, &mut rng).unwrap();
        let small = set.select(&(0..6).collect::<Vec<_>>());
        for s in small.iter() {
            let before = r2hvc(s, &small, &dirs, &r).unwrap();
            let after = r2hvc(s, &set, &dirs, &r).unwrap();
            prop_assert!(after <= before);
        }
    }

    #[test]
    fn translation_leaves_the_value_unchanged(
        seed in 0u64..1000,
        shift in prop::collection::vec(-3.0f64..3.0, 3),
        lambda in unit_strategy(3),
    ) {
        let (set, r) = instance(seed, 3, 6);
        let dirs = DirectionSet::new(vec![lambda], Provenance::new("p")).unwrap();
        let moved = SolutionSet::new(
            set.iter().map(|p| p.iter().zip(&shift).map(|(a, t)| a + t).collect()).collect(),
        ).unwrap();
        let moved_r = ReferencePoint::new(r.coords().iter().zip(&shift).map(|(a, t)| a + t).collect()).unwrap();
        for i in 0..set.len() {
            let a = r2hvc(set.point(i), &set, &dirs, &r).unwrap();
            let b = r2hvc(moved.point(i), &moved, &dirs, &moved_r).unwrap();
            prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
        }
    }

    #[test]
    fn scaling_multiplies_by_the_mth_power(seed in 0u64..1000, alpha in 0.1f64..10.0) {
        let (set, r) = instance(seed, 3, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dirs = gen_unv(3, 5, &mut rng).unwrap();
        let scaled = SolutionSet::new(set.iter().map(|p| p.iter().map(|a| a * alpha).collect()).collect()).unwrap();
        let scaled_r = ReferencePoint::new(r.coords().iter().map(|a| a * alpha).collect()).unwrap();
        for i in 0..set.len() {
            let a = r2hvc(set.point(i), &set, &dirs, &r).unwrap();
            let b = r2hvc(scaled.point(i), &scaled, &dirs, &scaled_r).unwrap();
            prop_assert!(close(a * alpha.powi(3), b, 1e-9));
        }
    }
}
