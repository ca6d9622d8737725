use haar_moments::montecarlo::{
    estimate_moment, estimate_moment_left, estimate_sphere_moment, CMatrix, SamplerConfig,
};
use haar_moments::query::MomentQuery;
use num_traits::ToPrimitive;

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn same_seed_same_bits_across_thread_counts() {
    let q = MomentQuery::new(3, vec![1, 2], vec![1, 2], vec![2, 1], vec![2, 1]);
    let cfg = SamplerConfig::new(99, 3 * 4096 + 17, 3).unwrap();
    let one = in_pool(1, || estimate_moment(&q, &cfg).unwrap());
    let four = in_pool(4, || estimate_moment(&q, &cfg).unwrap());
    assert_eq!(one.mean.re.to_bits(), four.mean.re.to_bits());
    assert_eq!(one.mean.im.to_bits(), four.mean.im.to_bits());
    assert_eq!(one.stderr.to_bits(), four.stderr.to_bits());

    let other = SamplerConfig::new(100, cfg.samples, 3).unwrap();
    assert_ne!(estimate_moment(&q, &other).unwrap().mean, one.mean);
}

#[test]
fn left_invariance_under_permutations() {
    let n = 3;
    let v = CMatrix::permutation(&[2, 0, 1]);
    let cfg = SamplerConfig::new(5, 60_000, n).unwrap();
    let queries = [
        MomentQuery::new(n, vec![1], vec![1], vec![1], vec![1]),
        MomentQuery::new(n, vec![1, 1], vec![1, 2], vec![1, 1], vec![1, 2]),
        MomentQuery::new(n, vec![1, 2], vec![1, 2], vec![2, 1], vec![2, 1]),
        MomentQuery::new(n, vec![1, 2], vec![1, 1], vec![1, 2], vec![1, 1]),
    ];
    for q in &queries {
        let a = estimate_moment(q, &cfg).unwrap();
        let b =
            estimate_moment_left(q, &SamplerConfig::new(6, cfg.samples, n).unwrap(), &v).unwrap();
        let combined = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.mean - b.mean).norm() < 5.0 * combined, "{q}");
    }
}

#[test]
fn first_moment_vanishes() {
    let cfg = SamplerConfig::new(11, 50_000, 4).unwrap();
    let est = haar_moments::montecarlo::estimate(&cfg, |rng| {
        haar_moments::montecarlo::sample_haar(4, rng).get(0, 0)
    });
    assert!(est.agrees_with(0.0), "{:?}", est);
}

#[test]
fn sphere_fourth_moment() {
    let cfg = SamplerConfig::new(3, 100_000, 3).unwrap();
    let est = estimate_sphere_moment(&[4], &cfg).unwrap();
    assert!(est.agrees_with(0.2), "{:?}", est);
    let exact = haar_moments::sphere::sphere_moment(&[4, 0, 0]).unwrap();
    assert_eq!(exact.to_f64().unwrap(), 0.2);
}

#[test]
fn sampled_moments_match_exact() {
    let n = 3;
    let cfg = SamplerConfig::new(21, 100_000, n).unwrap();
    for q in [
        MomentQuery::new(n, vec![1, 1], vec![1, 1], vec![1, 1], vec![1, 1]),
        MomentQuery::new(n, vec![1, 2], vec![1, 2], vec![1, 2], vec![2, 1]),
        MomentQuery::new(n, vec![1, 2], vec![1, 2], vec![2, 1], vec![2, 1]),
    ] {
        let exact = haar_moments::weingarten::evaluate_fixed(&q).unwrap();
        let est = estimate_moment(&q, &cfg).unwrap();
        assert!(
            est.agrees_with(exact.to_f64().unwrap()),
            "{q}: {:?} vs {exact}",
            est
        );
    }
}
