use wetpaper::experiments::*;

fn within_3_sigma(empirical: f64, p: f64, trials: u64) -> bool {
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    (empirical - p).abs() <= 3.0 * sigma
}

#[test]
fn full_rank_frequency_t20() {
    for (m, seed) in [(0, 101), (2, 102)] {
        let rep = monte_carlo_rank(20, m, 100_000, seed).unwrap();
        let q = q_m(m, DEFAULT_TERMS);
        assert!((rep.theoretical[0] - q).abs() < 1e-15);
        assert!(within_3_sigma(rep.empirical[0], q, 100_000), "m={m}: {}", rep.summary_line());
    }
}

#[test]
fn extra_rows_mean_t30() {
    let rep = monte_carlo_overhead(30, 100_000, 103).unwrap();
    let mean = rep.get("mean_empirical").unwrap();
    let sigma = rep.get("sigma_mean").unwrap();
    let m_tilde = average_overhead(DEFAULT_TERMS).unwrap();
    assert!((mean - m_tilde).abs() <= 3.0 * sigma, "{}", rep.summary_line());
    assert!((rep.get("mean_theoretical").unwrap() - m_tilde).abs() < 1e-12);
}

#[test]
fn both_overhead_readings_agree() {
    let rows = monte_carlo_overhead(30, 50_000, 104).unwrap();
    let dry = monte_carlo_dry_overhead(60, 30, 50_000, 105).unwrap();
    let (a, b) = (rows.get("mean_empirical").unwrap(), dry.get("mean_empirical").unwrap());
    let s = (rows.get("sigma_mean").unwrap().powi(2) + dry.get("sigma_mean").unwrap().powi(2)).sqrt();
    assert!((a - b).abs() <= 3.0 * s, "{a} vs {b}");
    // The finite-size law of the dry reading agrees with its simulation.
    let mean = dry.get("mean_theoretical").unwrap();
    assert!((dry.get("mean_empirical").unwrap() - mean).abs() <= 3.0 * dry.get("sigma_mean").unwrap());
    assert!((mean - average_overhead(DEFAULT_TERMS).unwrap()).abs() < 0.01);
}

#[test]
fn feasibility_against_exact_probability() {
    for (n, r, delta, seed) in [(16, 6, 8, 106), (20, 10, 10, 107), (16, 6, 6, 108)] {
        let trials = 10_000;
        let rep = monte_carlo_wet_feasibility(n, r, delta, trials, seed, false).unwrap();
        let exact = exact_solvability_probability(n, r, delta).unwrap();
        assert!(within_3_sigma(rep.empirical[0], exact, trials), "{}", rep.summary_line());
        assert!(rep.get("formula").unwrap() <= exact);
    }
}

#[test]
fn threshold_filter_makes_every_instance_solvable() {
    let rep = monte_carlo_wet_feasibility(14, 6, 11, 2000, 109, true).unwrap();
    assert_eq!(rep.empirical, vec![1.0]);
    let rep = monte_carlo_wet_feasibility(16, 6, 16, 2000, 110, false).unwrap();
    assert_eq!(rep.empirical, vec![1.0]);
}

#[test]
fn rank_law_normalization_large_t() {
    for t in [30, 45, 64] {
        for m in 0..=6 {
            let total: f64 = (0..=t).map(|s| rank_defect_probability(t, m, s, DEFAULT_TERMS).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn telescoping_extra_rows() {
    // Σ_{m=1}^{M} (Q_m - Q_{m-1}) = Q_M - Q_0.
    let big_m = 50;
    let sum: f64 = (1..=big_m).map(|m| q_m(m, DEFAULT_TERMS) - q_m(m - 1, DEFAULT_TERMS)).sum();
    assert!((sum - (q_m(big_m, DEFAULT_TERMS) - q_m(0, DEFAULT_TERMS))).abs() < 1e-12);
    let dist = extra_rows_distribution(60, DEFAULT_TERMS);
    assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let mean: f64 = dist.iter().enumerate().map(|(m, p)| m as f64 * p).sum();
    assert!((mean - average_overhead(DEFAULT_TERMS).unwrap()).abs() < 1e-12);
}

#[test]
fn partial_sums_increase_below_two() {
    let mut last = 0.0;
    for terms in 1..=64 {
        let v = average_overhead(terms).unwrap();
        // Late terms fall below one ulp, so only the early ones must show.
        assert!(if terms <= 40 { v > last } else { v >= last });
        assert!(v < 2.0);
        last = v;
    }
    assert!((last - 1.6067).abs() < 1e-3);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| monte_carlo_wet_feasibility(12, 4, 6, 9000, 111, false).unwrap())
    };
    assert_eq!(run(1), run(4));
}
