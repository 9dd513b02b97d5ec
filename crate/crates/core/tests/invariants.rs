use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rgg_core::bounds::connectivity_threshold;
use rgg_core::concentration::{
    coupled_shortfalls, failure_probability_upper, g_function, lower_tail_bound, upper_tail_bound,
};
use rgg_core::geometry::{dist_sq, fit_strip, StripPlacement};
use rgg_core::sampler::{sample_poissonized, sample_uniform, SeedSpec};
use rgg_core::spatial_graph::{bfs_distance, build_graph};
use rgg_core::strip_path::{
    alpha_unchecked, default_lower_alpha, exploratory_delta, greedy_strip_path, lower_chain_certificate, PathStatus,
    ProofConstants,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampling_is_deterministic_and_closed(n in 1u64..3000, master in any::<u64>(), trial in 0u64..1000) {
        let seed = SeedSpec::new(master, trial);
        let a = sample_uniform(n, 1.0, seed).unwrap();
        let b = sample_uniform(n, 1.0, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.points.len() as u64, n);
        let half = (n as f64).sqrt() / 2.0;
        prop_assert!(a.points.iter().all(|p| p.x.abs() <= half && p.y.abs() <= half));

        let p = sample_poissonized(n, 1.0, seed, None, None).unwrap();
        prop_assert_eq!(&p, &sample_poissonized(n, 1.0, seed, None, None).unwrap());
        prop_assert!(p.points.iter().all(|q| q.x.abs() <= half && q.y.abs() <= half));
    }

    #[test]
    fn tail_bounds_are_probabilities(count in 1u64..100_000, delta in 1e-6f64..50.0, low in 1e-6f64..0.999_999) {
        for b in [upper_tail_bound(count, delta).unwrap(), lower_tail_bound(count, low).unwrap()] {
            prop_assert!(b.log_value <= 0.0);
            let v = b.value();
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn g_is_nonnegative_and_vanishes_only_at_zero(x in -0.999_999f64..1e6) {
        let g = g_function(x).unwrap();
        prop_assert!(g >= 0.0);
        if x.abs() > 1e-4 {
            prop_assert!(g > 0.0);
        }
    }

    #[test]
    fn failure_bound_falls_with_delta(r in 60.0f64..500.0, n in 1e3f64..1e8, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let c = ProofConstants::default();
        let (lo, hi) = c.delta_range(r);
        let (a, b) = (a.min(b), a.max(b));
        prop_assume!(b - a > 1e-6);
        let t = 10.0 * r;
        let da = lo + a * (hi - lo);
        let db = lo + b * (hi - lo);
        let fa = failure_probability_upper(t, r, n, da, &c).unwrap();
        let fb = failure_probability_upper(t, r, n, db, &c).unwrap();
        prop_assert!(fb.log_value <= fa.log_value);
        prop_assert!((0.0..=1.0).contains(&fa.value()));
    }

    #[test]
    fn coupled_shortfalls_are_dominated(rate in 0.01f64..20.0, rho in 0.1f64..10.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain = coupled_shortfalls(rate, rho, 64, &mut rng).unwrap();
        let mut prev = 0.0;
        for s in &chain {
            prop_assert!(s.realized <= s.dominating);
            prop_assert!(s.realized >= 0.0 && s.realized <= rho - prev + 1e-12);
            prev = s.realized;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn greedy_chains_are_consistent(master in any::<u64>(), factor in 3.0f64..8.0) {
        let c = ProofConstants::default();
        let n = 4000u64;
        let r = factor * connectivity_threshold(n as f64).unwrap();
        let g = build_graph(sample_uniform(n, r, SeedSpec::new(master, 0)).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(master);
        for _ in 0..6 {
            let u = rand::Rng::random_range(&mut rng, 0..n as usize);
            let v = rand::Rng::random_range(&mut rng, 0..n as usize);
            let t = (g.point(u) - g.point(v)).norm();
            if u == v || t <= r {
                continue;
            }
            let delta = exploratory_delta(n as f64, r, t, &c).unwrap();
            let Ok(pl) = fit_strip(g.point(u), g.point(v), alpha_unchecked(delta, r, &c), n as f64) else {
                continue;
            };
            let res = greedy_strip_path(&g, &pl, u, v, delta, &c).unwrap();
            let chain = res.chain_record();
            prop_assert!(chain.telescoping_error() <= 1e-9);
            prop_assert!(chain.is_well_formed(1e-9));
            if res.status == PathStatus::Success {
                let hops = res.hops.unwrap();
                prop_assert!(hops <= res.budget_k);
                prop_assert_eq!(res.path.len() as u64, hops + 1);
                prop_assert!(res.path.windows(2).all(|w| dist_sq(g.point(w[0]), g.point(w[1])) <= r * r));
                let d = bfs_distance(&g, u, v, false).unwrap().hops.unwrap();
                prop_assert!(u64::from(d) <= hops);
            } else {
                prop_assert!(res.path.is_empty());
            }
        }
    }

    #[test]
    fn lower_chains_telescope(master in any::<u64>(), k in 1u64..40) {
        let n = 3000u64;
        let r = 2.0 * connectivity_threshold(n as f64).unwrap();
        let g = build_graph(sample_uniform(n, r, SeedSpec::new(master, 1)).unwrap()).unwrap();
        let (u, v) = (0, 1);
        let t = (g.point(u) - g.point(v)).norm();
        prop_assume!(t > r);
        let pl = StripPlacement::between(g.point(u), g.point(v), default_lower_alpha(k, r, t)).unwrap();
        let (chain, certified) = lower_chain_certificate(&g, &pl, u, v, k).unwrap();
        prop_assert_eq!(chain.entries.len() as u64, k);
        prop_assert!(chain.telescoping_error() <= 1e-9);
        prop_assert!(chain.is_well_formed(1e-9));
        prop_assert!(chain.last_x() <= k as f64 * r + 1e-9);
        prop_assert_eq!(certified, chain.last_x() < t - 1e-9);
    }
}
