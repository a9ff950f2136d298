use proptest::prelude::*;
use rnifs::system::{self, generate_orbit, sample_index, ProbabilityVector, RnifsSystem};
use rnifs::{Error, MapDescriptor, Mat2, Point2, Xoshiro256pp};

fn frequencies(probs: &[f64], draws: usize, seed: u64) -> Vec<f64> {
    let pv = ProbabilityVector::new(probs.to_vec()).unwrap();
    let mut rng = Xoshiro256pp::seed_from_u64(seed);
    let mut hits = vec![0usize; probs.len()];
    for _ in 0..draws {
        hits[sample_index(&pv, &mut rng)] += 1;
    }
    hits.into_iter().map(|h| h as f64 / draws as f64).collect()
}

#[test]
fn fair_coin_frequency() {
    let f = frequencies(&[0.5, 0.5], 1_000_000, 42);
    assert!((0.498..=0.502).contains(&f[0]), "{f:?}");
}

#[test]
fn selection_frequencies_within_binomial_band() {
    let m = 1_000_000;
    for (probs, seed) in [(vec![0.6, 0.2, 0.2], 1), (vec![0.5, 0.3, 0.2], 2), (vec![0.3, 0.4, 0.3], 3)] {
        let f = frequencies(&probs, m, seed);
        for (fi, pi) in f.iter().zip(&probs) {
            let sigma = (pi * (1.0 - pi) / m as f64).sqrt();
            assert!((fi - pi).abs() < 4.0 * sigma, "{probs:?}: {f:?}");
        }
    }
}

#[test]
fn degenerate_distribution_always_picks_zero() {
    assert_eq!(frequencies(&[1.0], 1000, 0), vec![1.0]);
}

#[test]
fn deterministic_halving() {
    let sys = RnifsSystem::from_ids(&["sier1"], &[1.0]).unwrap();
    let cloud = generate_orbit(&sys, Point2::new(1.0, 1.0), 4, 0, 0).unwrap();
    let want = [0.5, 0.25, 0.125, 0.0625];
    for (p, w) in cloud.points().iter().zip(want) {
        assert_eq!((p.x, p.y), (w, w));
    }
}

/// Barycentric containment in the hull of (0,0), (1,0), (1/2, √3/2) grown by `tol`.
fn in_triangle(p: Point2, tol: f64) -> bool {
    let h = 3f64.sqrt() / 2.0;
    let l3 = p.y / h;
    let l2 = p.x - 0.5 * l3;
    let l1 = 1.0 - l2 - l3;
    [l1, l2, l3].iter().all(|&l| l >= -tol)
}

#[test]
fn sierpinski_orbit_stays_in_hull() {
    let cloud = generate_orbit(&RnifsSystem::sierpinski(), Point2::new(0.1, 0.1), 100_000, 100, 11).unwrap();
    assert_eq!(cloud.len(), 99_900);
    assert!(cloud.points().iter().all(|&p| in_triangle(p, 1e-9)));
}

#[test]
fn affine_contraction_decays_by_its_ratio() {
    // fixed point of x ↦ 0.3x + c is c / 0.7
    let c = Point2::new(0.4, -0.2);
    let fixed = c * (1.0 / 0.7);
    let sys = RnifsSystem::new(
        vec![MapDescriptor::affine("s", Mat2::scaling(0.3), c)],
        ProbabilityVector::new(vec![1.0]).unwrap(),
    )
    .unwrap();
    let cloud = generate_orbit(&sys, Point2::new(5.0, 5.0), 12, 0, 0).unwrap();
    let d: Vec<f64> = cloud.points().iter().map(|p| p.distance(fixed)).collect();
    for w in d.windows(2) {
        assert!((w[1] / w[0] - 0.3).abs() < 1e-9, "{w:?}");
    }
}

#[test]
fn expanding_system_reports_divergence_step() {
    let sys = RnifsSystem::new(
        vec![MapDescriptor::similitude("x2", 2.0, Point2::new(0.0, 0.0))],
        ProbabilityVector::new(vec![1.0]).unwrap(),
    )
    .unwrap();
    // 0.1 · 2^k first exceeds 100 at k = 10
    match generate_orbit(&sys, Point2::new(0.1, 0.1), 1000, 0, 0) {
        Err(Error::Diverged { step }) => assert_eq!(step, 10),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dirichlet_concentration_and_means() {
    let mut rng = Xoshiro256pp::seed_from_u64(3);
    let p = system::dirichlet_probabilities(&[1e6, 1e6], &mut rng).unwrap();
    assert!(p.as_slice().iter().all(|v| (v - 0.5).abs() < 0.01));
    assert_eq!(system::dirichlet_probabilities(&[1.0], &mut rng).unwrap().as_slice(), &[1.0]);

    let draws = 10_000;
    let mut mean = [0.0; 3];
    for _ in 0..draws {
        let p = system::dirichlet_probabilities(&[1.0, 1.0, 1.0], &mut rng).unwrap();
        let s: f64 = p.as_slice().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        for (m, v) in mean.iter_mut().zip(p.as_slice()) {
            *m += v / draws as f64;
        }
    }
    assert!(mean.iter().all(|m| (m - 1.0 / 3.0).abs() < 0.02), "{mean:?}");
}

#[test]
fn points_csv_round_trip_is_exact() {
    let cloud = generate_orbit(&RnifsSystem::sierpinski_nonlinear(), system::DEFAULT_X0, 2000, 100, 5).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    cloud.write_csv(&path).unwrap();
    let back = system::read_points_csv(&path).unwrap();
    assert_eq!(back, cloud.points());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn burn_in_arithmetic(total in 1usize..3000, frac in 0.0f64..1.0, seed in any::<u64>()) {
        let burn = ((total as f64) * frac) as usize % total;
        let cloud = generate_orbit(&RnifsSystem::sierpinski(), system::DEFAULT_X0, total, burn, seed).unwrap();
        prop_assert_eq!(cloud.len(), total - burn);
    }

    #[test]
    fn orbits_are_reproducible(seed in any::<u64>()) {
        let sys = RnifsSystem::sierpinski_nonlinear();
        let a = generate_orbit(&sys, system::DEFAULT_X0, 500, 10, seed).unwrap();
        let b = generate_orbit(&sys, system::DEFAULT_X0, 500, 10, seed).unwrap();
        prop_assert_eq!(a.points(), b.points());
    }

    #[test]
    fn probability_vectors_need_positive_unit_sum(v in prop::collection::vec(0.01f64..1.0, 1..6)) {
        let s: f64 = v.iter().sum();
        let normalized: Vec<f64> = v.iter().map(|x| x / s).collect();
        prop_assert!(ProbabilityVector::new(normalized).is_ok());
        let mut shifted = v.clone();
        shifted.push(1.0);
        prop_assert!(ProbabilityVector::new(shifted).is_err());
    }
}
