use std::collections::BTreeMap;

use rsekit::approx::{gap_approx, qptas};
use rsekit::lab::{catalog, parse_params, CATALOG_NAMES};
use rsekit::{evaluate, inducibility_gap, solve_exact, solve_maximin, solve_sse, Gap, MixedStrategy, Rational, Scalar};

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn entry(name: &str, params: &str) -> rsekit::lab::CatalogEntry<Rational> {
    catalog(name, &parse_params(params).unwrap()).unwrap()
}

#[test]
fn baselines_match_catalog() {
    for name in CATALOG_NAMES {
        let e = catalog::<Rational>(name, &BTreeMap::new()).unwrap();
        if let Some(v) = e.expected.get("sse") {
            assert_eq!(&solve_sse(&e.game).unwrap().leader_value, v, "{name} sse");
        }
        if let Some(v) = e.expected.get("maximin") {
            assert_eq!(&solve_maximin(&e.game).unwrap().leader_value, v, "{name} maximin");
        }
        if let Some(v) = e.expected.get("gap") {
            assert_eq!(inducibility_gap(&e.game).unwrap(), Gap::Finite(v.clone()), "{name} gap");
        }
        if let (Some(d), Some(v)) = (e.delta(), e.expected.get("rse_value")) {
            assert_eq!(solve_exact(&e.game, d).unwrap().value(), v, "{name} rse");
        }
    }
}

#[test]
fn table1_rse_is_pure_middle_row() {
    let e = entry("table1", "");
    let sol = solve_exact(&e.game, e.delta().unwrap()).unwrap();
    assert_eq!(sol.outcome.strategy, MixedStrategy::pure(3, 1));
    assert_eq!(sol.value(), &r(1, 1));
}

#[test]
fn table2_strategies_collapse() {
    let e = entry("table2", "");
    let d = r(1, 4);
    let sse = solve_sse(&e.game).unwrap();
    let mm = solve_maximin(&e.game).unwrap();
    assert_eq!(evaluate(&e.game, &sse.strategy, &d).unwrap().leader_value, r(1, 4));
    assert_eq!(evaluate(&e.game, &mm.strategy, &d).unwrap().leader_value, r(1, 4));
    assert_eq!(solve_exact(&e.game, &d).unwrap().value(), &r(1, 2));
}

#[test]
fn table3_tie_break_gap() {
    let e = entry("table3", "Delta=0.4,c=0.2,delta=0.3");
    let sol = solve_exact(&e.game, &r(3, 10)).unwrap();
    assert_eq!(sol.outcome.strategy, MixedStrategy::pure(3, 1));
    let ul = e.game.leader_payoffs(&sol.outcome.strategy);
    let optimistic = sol.outcome.response_set.actions().iter().map(|&j| ul[j].clone()).fold(r(0, 1), Rational::max_of);
    assert_eq!(optimistic - sol.value().clone(), r(1, 5));
}

#[test]
fn table4_curve_matches_formula() {
    for eps in [r(1, 2), r(1, 4)] {
        let e = catalog::<Rational>("table4", &BTreeMap::from([("eps".to_string(), eps.clone())])).unwrap();
        for i in 1..=24 {
            let d = r(i, 20);
            let v = solve_exact(&e.game, &d).unwrap();
            assert_eq!(v.value(), &e.expected_rse(&d).unwrap(), "eps {eps} delta {d}");
        }
    }
}

#[test]
fn table5_values() {
    let e = entry("table5", "Delta=0.4,c=0.8");
    for (d, v) in [(r(1, 20), r(1, 1)), (r(3, 20), r(9, 10)), (r(3, 10), r(4, 5))] {
        assert_eq!(solve_exact(&e.game, &d).unwrap().value(), &v);
        assert_eq!(e.expected_rse(&d), Some(v));
    }
}

#[test]
fn table6_and_7_values() {
    for name in ["table6-g1", "table6-g2", "table7-g1", "table7-g2"] {
        let e = entry(name, "");
        let d = e.delta().unwrap().clone();
        assert_eq!(solve_exact(&e.game, &d).unwrap().value(), &e.expected["rse_value"], "{name}");
    }
    let g2 = entry("table6-g2", "Delta=0.5,delta=0.1,eps=0.1");
    assert_eq!(g2.expected["rse_value"], r(4, 5));
}

#[test]
fn degenerate_game_has_zero_rse() {
    let e = entry("degenerate-1x2", "");
    assert_eq!(solve_sse(&e.game).unwrap().leader_value, r(1, 1));
    for d in [r(1, 1000), r(1, 2)] {
        assert_eq!(solve_exact(&e.game, &d).unwrap().value(), &r(0, 1));
    }
}

#[test]
fn gap_approx_on_table4() {
    let e = entry("table4", "eps=0.5");
    for d in [r(1, 10), r(1, 2), r(9, 10)] {
        let sol = gap_approx(&e.game, &d).unwrap();
        let bound = (r(1, 1) - d.clone()) * r(1, 1);
        assert!(sol.value() >= &bound);
        assert_eq!(sol.certificate.as_ref().unwrap().lower_bound, bound);
    }
    assert!(gap_approx(&e.game, &r(1, 1)).is_err());
}

#[test]
fn qptas_float_on_catalog() {
    for name in ["table2", "table4", "table5"] {
        let e = catalog::<f64>(name, &BTreeMap::new()).unwrap();
        let d = e.delta().copied().unwrap_or(0.3);
        let exact = solve_exact(&e.game, &d).unwrap();
        let approx = qptas(&e.game, &d, &0.2).unwrap();
        assert!(approx.value() >= &(exact.value() - 0.2), "{name}");
        let cert = approx.certificate.clone().unwrap();
        assert!(approx.value() + 1e-9 >= cert.lower_bound);
    }
}
