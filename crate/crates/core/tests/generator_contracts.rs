use lta_core::directions::{
    das_count, gen_das, gen_jas, gen_kmeans_u, gen_mss, gen_mss_d, gen_mss_u, gen_unv, Provenance,
};
use lta_core::DirectionSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn assert_unit_non_negative(dirs: &DirectionSet) {
    for v in dirs.iter() {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() <= 1e-12, "norm {norm}");
        assert!(v.iter().all(|x| *x >= 0.0));
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn lattice_counts_follow_the_binomial_formula() {
    let pairs = [
        (2, 1), (2, 4), (2, 10), (2, 99), (3, 1), (3, 2), (3, 5), (3, 12), (3, 13), (3, 30),
        (4, 1), (4, 3), (4, 6), (4, 10), (5, 1), (5, 4), (5, 6), (5, 8), (6, 2), (6, 4),
        (6, 6), (7, 3), (7, 5), (8, 2), (8, 3), (8, 4), (9, 3), (10, 2), (10, 3), (12, 2),
    ];
    for (m, h) in pairs {
        let want = binomial((h + m - 1) as u128, (m - 1) as u128) as usize;
        assert_eq!(das_count(m, h).unwrap(), want, "m={m} H={h}");
        let dirs = gen_das(m, h).unwrap();
        assert_eq!(dirs.len(), want, "m={m} H={h}");
        assert_unit_non_negative(&dirs);
    }
}

#[test]
fn every_generator_yields_unit_non_negative_vectors() {
    for m in [2, 3, 5] {
        assert_unit_non_negative(&gen_das(m, 4).unwrap());
        assert_unit_non_negative(&gen_unv(m, 200, &mut rng(1)).unwrap());
        assert_unit_non_negative(&gen_jas(m, 200, &mut rng(1)).unwrap());
        assert_unit_non_negative(&gen_mss_d(m, 12, 300).unwrap());
        assert_unit_non_negative(&gen_mss_u(m, 12, 300, &mut rng(1)).unwrap());
        assert_unit_non_negative(&gen_kmeans_u(m, 12, 300, &mut rng(1)).unwrap());
    }
}

#[test]
fn randomized_generators_reproduce_under_a_seed() {
    for seed in [0, 1, 42, u64::MAX] {
        assert_eq!(gen_unv(3, 50, &mut rng(seed)).unwrap(), gen_unv(3, 50, &mut rng(seed)).unwrap());
        assert_eq!(gen_jas(3, 50, &mut rng(seed)).unwrap(), gen_jas(3, 50, &mut rng(seed)).unwrap());
        assert_eq!(
            gen_mss_u(3, 20, 500, &mut rng(seed)).unwrap(),
            gen_mss_u(3, 20, 500, &mut rng(seed)).unwrap()
        );
        assert_eq!(
            gen_kmeans_u(3, 20, 500, &mut rng(seed)).unwrap(),
            gen_kmeans_u(3, 20, 500, &mut rng(seed)).unwrap()
        );
    }
    assert_ne!(gen_unv(3, 5, &mut rng(1)).unwrap(), gen_unv(3, 5, &mut rng(2)).unwrap());
}

#[test]
fn uniform_directions_have_mean_angle_quarter_pi() {
    let dirs = gen_unv(2, 10_000, &mut rng(1)).unwrap();
    let angles: Vec<f64> = dirs.iter().map(|v| v[1].atan2(v[0])).collect();
    let n = angles.len() as f64;
    let mean = angles.iter().sum::<f64>() / n;
    // Uniform on [0, π/2]: standard deviation (π/2)/√12.
    let se = core::f64::consts::FRAC_PI_2 / 12f64.sqrt() / n.sqrt();
    assert!((mean - core::f64::consts::FRAC_PI_4).abs() <= 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn mss_picks_the_centre_after_the_axes() {
    let c = 1.0 / 3f64.sqrt();
    let base = DirectionSet::new(
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.8, 0.6, 0.0],
            vec![c, c, c],
            vec![0.0, 0.6, 0.8],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ],
        Provenance::new("hand"),
    )
    .unwrap();
    let out = gen_mss(&base, 4).unwrap();
    assert_eq!(&out.as_flat()[..9], &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);

    // Brute force: the base vector whose nearest axis is farthest away.
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let best = base
        .iter()
        .max_by(|a, b| {
            let da = axes.iter().map(|x| dist(a, x)).fold(f64::INFINITY, f64::min);
            let db = axes.iter().map(|x| dist(b, x)).fold(f64::INFINITY, f64::min);
            da.total_cmp(&db)
        })
        .unwrap();
    assert_eq!(out.get(3), best);
    assert_eq!(out.get(3), &[c, c, c]);
}

#[test]
fn mss_on_a_lattice_starts_with_the_axes() {
    let out = gen_mss(&gen_das(3, 12).unwrap(), 3).unwrap();
    assert_eq!(out.as_flat(), &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn mss_spacing_shrinks_as_the_set_grows() {
    let base = gen_unv(3, 400, &mut rng(3)).unwrap();
    let mut previous = f64::INFINITY;
    for n in 3..40 {
        let d = gen_mss(&base, n).unwrap().min_pairwise_distance();
        assert!(d <= previous, "n={n}: {d} > {previous}");
        previous = d;
    }
}

#[test]
fn single_cluster_picks_the_member_nearest_the_pool_mean() {
    for seed in 0..5 {
        let out = gen_kmeans_u(3, 1, 200, &mut rng(seed)).unwrap();
        let pool = gen_unv(3, 200, &mut rng(seed)).unwrap();
        let mut mean = [0.0; 3];
        for v in pool.iter() {
            for (m, x) in mean.iter_mut().zip(v) {
                *m += x / 200.0;
            }
        }
        let nearest = pool
            .iter()
            .min_by(|a, b| {
                let da: f64 = a.iter().zip(&mean).map(|(x, y)| (x - y) * (x - y)).sum();
                let db: f64 = b.iter().zip(&mean).map(|(x, y)| (x - y) * (x - y)).sum();
                da.total_cmp(&db)
            })
            .unwrap();
        assert_eq!(out.get(0), nearest);
    }
}

#[test]
fn kmeans_outputs_distinct_pool_members() {
    let out = gen_kmeans_u(3, 91, 10_000, &mut rng(1)).unwrap();
    let pool = gen_unv(3, 10_000, &mut rng(1)).unwrap();
    assert_eq!(out.len(), 91);
    for (i, v) in out.iter().enumerate() {
        assert!(pool.iter().any(|p| p == v));
        for w in out.iter().skip(i + 1) {
            assert_ne!(v, w);
        }
    }
}
