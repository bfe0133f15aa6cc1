use proptest::prelude::*;

use rsekit::approx::gap_approx;
use rsekit::exact::ExactOptions;
use rsekit::lab::{gen_random, grid_oracle, RandomOptions};
use rsekit::learning::check_br_inclusion;
use rsekit::{
    br_delta, evaluate, inducibility_gap, solve_exact, solve_exact_with, solve_maximin, solve_sse, Game, Gap,
    MixedStrategy, Rational, Scalar,
};

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn grid_game(m: usize, n: usize, seed: u64) -> Game<Rational> {
    gen_random(m, n, seed, &RandomOptions { grid: Some(10), ..Default::default() }).unwrap()
}

fn strategy(m: usize, weights: &[u32]) -> MixedStrategy<Rational> {
    let w: Vec<u32> = weights.iter().take(m).map(|w| w + 1).collect();
    let total: u32 = w.iter().sum();
    MixedStrategy::new(w.iter().map(|&v| r(v as i64, total as i64)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn br_sets_are_nested(m in 1usize..4, n in 1usize..5, seed in any::<u64>(),
                          w in prop::collection::vec(0u32..10, 4), a in 0i64..20, b in 0i64..20) {
        let g = grid_game(m, n, seed);
        let x = strategy(m, &w);
        let (lo, hi) = (a.min(b), a.max(b));
        let small = br_delta(&g, &x, &r(lo, 20)).unwrap();
        let big = br_delta(&g, &x, &r(hi, 20)).unwrap();
        prop_assert!(!small.is_empty());
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn curve_properties(m in 1usize..4, n in 1usize..4, seed in any::<u64>()) {
        let g = grid_game(m, n, seed);
        let sse = solve_sse(&g).unwrap().leader_value;
        let mm = solve_maximin(&g).unwrap().leader_value;
        let gap = inducibility_gap(&g).unwrap();
        let deltas: Vec<Rational> = (1..=10).map(|i| r(i, 20)).collect();
        let values: Vec<Rational> = deltas.iter().map(|d| solve_exact(&g, d).unwrap().value().clone()).collect();
        for (d, v) in deltas.iter().zip(&values) {
            prop_assert!(mm <= *v && *v <= sse, "sandwich at {}", d);
            if gap.exceeds(d) {
                let bound = match &gap {
                    Gap::Finite(big) => (r(1, 1) - d.clone() / big.clone()) * sse.clone(),
                    Gap::Infinite => sse.clone(),
                };
                prop_assert!(*v >= bound, "gap bound at {}", d);
            }
        }
        prop_assert!(values.windows(2).all(|w| w[0] >= w[1]), "monotone");
        if let Gap::Finite(big) = &gap {
            if *big > r(0, 1) {
                let lip = r(2, 1) / big.clone();
                let edge = big.clone() / r(2, 1);
                for i in 0..deltas.len() {
                    for j in i + 1..deltas.len() {
                        if deltas[j] <= edge {
                            let drop = values[i].clone() - values[j].clone();
                            prop_assert!(drop <= lip.clone() * (deltas[j].clone() - deltas[i].clone()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn two_action_leader_curve_is_convex(n in 2usize..5, seed in any::<u64>()) {
        let g = grid_game(2, n, seed);
        let Gap::Finite(big) = inducibility_gap(&g).unwrap() else { return Ok(()) };
        prop_assume!(big > r(0, 1));
        let deltas: Vec<Rational> = (1..12).map(|i| big.clone() * r(i, 12)).collect();
        let v: Vec<Rational> = deltas.iter().map(|d| solve_exact(&g, d).unwrap().value().clone()).collect();
        for i in 1..v.len() - 1 {
            // equally spaced grid: midpoint below the chord
            prop_assert!(v[i].clone() * r(2, 1) <= v[i - 1].clone() + v[i + 1].clone());
        }
    }

    #[test]
    fn exact_value_is_achieved(m in 1usize..4, n in 1usize..5, seed in any::<u64>(), d in 1i64..20) {
        let g = grid_game(m, n, seed);
        let delta = r(d, 20);
        let sol = solve_exact(&g, &delta).unwrap();
        let trace = sol.trace.clone().unwrap();
        prop_assert_eq!(sol.value(), &trace.lp_value);
        prop_assert!(trace.repaired_set.is_subset(&trace.chosen.set));
        prop_assert!(trace.repaired_set.contains(trace.repaired_response));
        let re = evaluate(&g, &sol.outcome.strategy, &delta).unwrap();
        prop_assert_eq!(&re.leader_value, sol.value());
        let full = solve_exact_with(&g, &delta, ExactOptions { exhaustive: true, ..Default::default() }).unwrap();
        prop_assert_eq!(full.value(), sol.value());
        prop_assert_eq!(full.trace.unwrap().chosen, trace.chosen);
    }

    #[test]
    fn grid_oracle_never_beats_exact(m in 1usize..4, n in 1usize..4, seed in any::<u64>(), d in 1i64..10) {
        let g = grid_game(m, n, seed);
        let delta = r(d, 20);
        let oracle = grid_oracle(&g, &delta, 12).unwrap();
        prop_assert!(oracle.leader_value <= *solve_exact(&g, &delta).unwrap().value());
    }

    #[test]
    fn gap_approx_meets_its_bound(m in 1usize..4, n in 1usize..4, seed in any::<u64>(), d in 1i64..20) {
        let g = grid_game(m, n, seed);
        let delta = r(d, 40);
        match gap_approx(&g, &delta) {
            Ok(sol) => {
                let cert = sol.certificate.clone().unwrap();
                prop_assert!(*sol.value() >= cert.lower_bound);
                prop_assert!(sol.value() <= solve_exact(&g, &delta).unwrap().value());
            }
            Err(rsekit::Error::GapTooSmall { .. }) => {
                prop_assert!(!inducibility_gap(&g).unwrap().exceeds(&delta));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn perturbed_follower_keeps_br_inclusion(m in 1usize..4, n in 1usize..5, seed in any::<u64>(),
                                             w in prop::collection::vec(0u32..10, 4),
                                             signs in prop::collection::vec(-1i64..=1, 16), d in 0i64..10) {
        let g = grid_game(m, n, seed);
        let eps = r(1, 20);
        let mut k = 0;
        let uf: Vec<Vec<Rational>> = g.follower().iter().map(|row| row.iter().map(|v| {
            k += 1;
            let p = v.clone() + eps.clone() * r(signs[k % signs.len()], 1);
            Rational::min_of(Rational::max_of(p, r(0, 1)), r(1, 1))
        }).collect()).collect();
        let est = Game::new(g.leader().to_vec(), uf).unwrap();
        let x = strategy(m, &w);
        prop_assert!(check_br_inclusion(&g, &est, &x, &r(d, 20), &eps).unwrap());
    }

    #[test]
    fn float_and_exact_agree(m in 1usize..4, n in 1usize..4, seed in any::<u64>(), d in 1i64..20) {
        let g = grid_game(m, n, seed);
        let delta = r(d, 20) + r(1, 1009);
        let exact = solve_exact(&g, &delta).unwrap();
        let float = solve_exact(&g.to_f64(), &delta.to_f64()).unwrap();
        prop_assert!((exact.value().to_f64() - float.value()).abs() < 1e-7);
    }

    #[test]
    fn json_round_trip(m in 1usize..5, n in 1usize..5, seed in any::<u64>()) {
        let g: Game<f64> = gen_random(m, n, seed, &RandomOptions::default()).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back: Game<f64> = Game::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, g.clone());
        let q = grid_game(m, n, seed);
        prop_assert_eq!(Game::<Rational>::from_json(&q.to_json()).unwrap(), q);
    }
}
