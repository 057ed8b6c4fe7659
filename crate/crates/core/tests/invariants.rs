//! Property tests for structural invariants.

use cocycle_core::cocycle::{LocallyConstantCocycle, Mat2};
use cocycle_core::rng::{random_cocycle, seeded};
use cocycle_core::spectrum::{covering_bound, periodic_spectrum, spectrum_measure};
use cocycle_core::subshift::{expand_prefix, factor_set, frequency_table, SubshiftSpec};
use proptest::prelude::*;

fn spec(i: usize) -> SubshiftSpec {
    match i % 4 {
        0 => SubshiftSpec::fibonacci(),
        1 => SubshiftSpec::thue_morse(),
        2 => SubshiftSpec::period_doubling(),
        _ => SubshiftSpec::sturmian(vec![2, 1, 3, 1, 2, 2, 1, 4, 1, 1, 2, 3, 1, 2, 1, 1]).unwrap(),
    }
}

fn cocycle(seed: u64, base: usize, radius: usize) -> LocallyConstantCocycle {
    random_cocycle(&mut seeded(seed), spec(base), radius, 0.6).unwrap()
}

fn rel_diff(a: &Mat2, b: &Mat2) -> f64 {
    a.sub(b).max_abs() / a.max_abs().max(b.max_abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cocycle_identity(seed in any::<u64>(), base in 0usize..3, radius in 0usize..3, n in 0usize..30, m in 0usize..30) {
        let c = cocycle(seed, base, radius);
        let config = expand_prefix(&spec(base), 200).unwrap();
        let cfg = config.as_bytes();
        let s = radius + 5;
        let whole = c.iterate(cfg, s, (n + m) as isize).unwrap();
        let split = c.iterate(cfg, s + n, m as isize).unwrap() * c.iterate(cfg, s, n as isize).unwrap();
        prop_assert!(rel_diff(&whole, &split) < 1e-10);
    }

    #[test]
    fn inverse_has_same_norm(seed in any::<u64>(), base in 0usize..3, radius in 0usize..3, n in 1usize..60) {
        let c = cocycle(seed, base, radius);
        let config = expand_prefix(&spec(base), 200).unwrap();
        let cfg = config.as_bytes();
        let s = radius + 2;
        let fwd = c.iterate_scaled(cfg, s, n as isize).unwrap().log_norm();
        let back = c.iterate_scaled(cfg, s + n, -(n as isize)).unwrap().log_norm();
        prop_assert!((fwd - back).abs() <= 1e-9 * n as f64);
    }

    #[test]
    fn determinant_stays_one(seed in any::<u64>(), base in 0usize..3, n in 1usize..12) {
        let c = cocycle(seed, base, 1);
        let config = expand_prefix(&spec(base), 100).unwrap();
        let det = c.iterate(config.as_bytes(), 1, n as isize).unwrap().det();
        prop_assert!((det - 1.0).abs() <= n as f64 * 1e-10);
    }

    #[test]
    fn frequencies_sum_to_one(base in 0usize..4, n in 1usize..12, sample in 100usize..5000) {
        let t = frequency_table(&spec(base), n, sample).unwrap();
        prop_assert!((t.total() - 1.0).abs() <= t.sum_tolerance());
    }

    #[test]
    fn language_is_factorial(base in 0usize..4, n in 1usize..24) {
        let long = factor_set(&spec(base), n + 1).unwrap();
        let short = factor_set(&spec(base), n).unwrap();
        for w in long.iter() {
            let w = w.as_bytes();
            prop_assert!(short.contains(&w[..n]) && short.contains(&w[1..]));
        }
    }

    #[test]
    fn band_structure(potential in prop::collection::vec(-3.0f64..3.0, 1..10), eps in 0.0f64..0.1, m in 0usize..20) {
        let bands = periodic_spectrum(&potential).unwrap();
        prop_assert!(bands.bands.len() <= potential.len());
        prop_assert!(bands.bands.windows(2).all(|p| p[0].1 < p[1].0));
        let measure = spectrum_measure(&bands.bands);
        prop_assert!(covering_bound(&bands.bands, eps, m) >= measure);
    }
}
