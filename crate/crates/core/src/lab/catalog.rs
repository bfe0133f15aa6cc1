//! Named example games with their known values.

use std::collections::BTreeMap;

use crate::baseline::inducibility_gap;
use crate::error::{Error, Result};
use crate::game::Game;
use crate::scalar::Scalar;

pub const CATALOG_NAMES: [&str; 10] = [
    "table1",
    "table2",
    "table3",
    "table4",
    "table5",
    "table6-g1",
    "table6-g2",
    "table7-g1",
    "table7-g2",
    "degenerate-1x2",
];

#[derive(Clone, Debug)]
pub struct CatalogEntry<T> {
    pub name: String,
    /// Parameters as supplied, defaults filled in; `delta` is in raw units.
    pub params: BTreeMap<String, T>,
    /// Quantities recomputed on the normalized game, e.g. `delta` and `gap`.
    pub derived: BTreeMap<String, T>,
    pub game: Game<T>,
    /// Known values, keyed by `sse`, `maximin`, `rse_value` and friends.
    pub expected: BTreeMap<String, T>,
}

impl<T: Scalar> CatalogEntry<T> {
    /// Normalized delta associated with the entry, if it has one.
    pub fn delta(&self) -> Option<&T> {
        self.derived.get("delta")
    }

    /// Closed-form `u_RSE(delta)` where the entry has one for this delta.
    pub fn expected_rse(&self, delta: &T) -> Option<T> {
        let p = |k: &str| self.params[k].clone();
        let zero = T::zero();
        let one = T::one();
        match self.name.as_str() {
            "table2" if *delta > zero && *delta <= T::from_ratio(1, 2) => Some(T::from_ratio(1, 2)),
            "table3" if *delta > p("c") && *delta < p("Delta") => Some(p("Delta") - p("c")),
            "table4" => Some(table4_value(&p("eps"), delta)),
            "table5" if *delta > zero => {
                let a = T::from_usize(2) - T::from_usize(2) * p("Delta") - T::from_usize(2) * delta.clone();
                Some(T::max_of(p("c"), T::min_of(one, a)))
            }
            "degenerate-1x2" if *delta > zero => Some(zero),
            _ if Some(delta) == self.delta() => self.expected.get("rse_value").cloned(),
            _ => None,
        }
    }
}

/// `u_RSE` of table 4: 1 up to `eps`, then linear down to 0 at 1.
pub fn table4_value<T: Scalar>(eps: &T, delta: &T) -> T {
    if *delta <= *eps {
        T::one()
    } else if *delta <= T::one() {
        (T::one() - delta.clone()) / (T::one() - eps.clone())
    } else {
        T::zero()
    }
}

/// Parses `k=v,k=v`; values accept `p/q` and decimals.
pub fn parse_params<T: Scalar>(text: &str) -> Result<BTreeMap<String, T>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
        let v = T::parse_text(v).ok_or_else(|| Error::Parse(format!("bad value for `{k}`")))?;
        out.insert(canonical_key(k.trim()).to_string(), v);
    }
    Ok(out)
}

fn canonical_key(k: &str) -> &str {
    match k {
        "gap" | "Δ" => "Delta",
        "δ" => "delta",
        "ε" | "epsilon" => "eps",
        other => other,
    }
}

fn defaults<T: Scalar>(name: &str) -> Option<Vec<(&'static str, T)>> {
    let r = |a, b| T::from_ratio(a, b);
    Some(match name {
        "table1" => vec![("delta", r(1, 2))],
        "table2" => vec![("delta", r(1, 4))],
        "table3" => vec![("Delta", r(2, 5)), ("c", r(1, 5)), ("delta", r(3, 10))],
        "table4" => vec![("eps", r(1, 2))],
        "table5" => vec![("Delta", r(2, 5)), ("c", r(4, 5))],
        "table6-g1" | "table6-g2" => vec![("Delta", r(1, 2)), ("delta", r(1, 10)), ("eps", r(1, 10))],
        "table7-g1" | "table7-g2" => vec![("delta", r(1, 5)), ("eps", r(1, 10))],
        "degenerate-1x2" => vec![],
        _ => return None,
    })
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what.to_string()))
    }
}

/// Builds a catalog game. Unknown parameter keys are rejected; missing ones take defaults.
pub fn catalog<T: Scalar>(name: &str, params: &BTreeMap<String, T>) -> Result<CatalogEntry<T>> {
    let defs = defaults::<T>(name).ok_or_else(|| Error::UnknownCatalog(name.to_string()))?;
    let mut full = BTreeMap::new();
    for (k, v) in defs {
        full.insert(k.to_string(), v);
    }
    for (k, v) in params {
        let k = canonical_key(k).to_string();
        if !full.contains_key(&k) {
            return Err(Error::InvalidParameter(format!("`{name}` has no parameter `{k}`")));
        }
        full.insert(k, v.clone());
    }
    let p = |k: &str| full[k].clone();
    let r = |a, b| T::from_ratio(a, b);
    let z = || T::zero();
    let o = || T::one();
    let half = || r(1, 2);
    let mut expected = BTreeMap::new();

    let (ul, uf) = match name {
        "table1" => {
            let d = p("delta");
            check(d > z() && d <= o(), "table1 needs 0 < delta <= 1")?;
            expected.insert("sse".into(), o());
            expected.insert("maximin".into(), z());
            expected.insert("rse_value".into(), o());
            (vec![vec![z(), z()], vec![z(), o()], vec![z(), z()]], vec![vec![-o(), z()], vec![-d, z()], vec![o(), z()]])
        }
        "table2" => {
            let d = p("delta");
            check(d > z() && d <= half(), "table2 needs 0 < delta <= 1/2")?;
            let q = r(1, 4);
            expected.insert("sse".into(), o());
            expected.insert("maximin".into(), q.clone());
            expected.insert("gap".into(), z());
            expected.insert("rse_value".into(), half());
            expected.insert("sse_strategy_value".into(), q.clone());
            expected.insert("maximin_strategy_value".into(), q.clone());
            (
                vec![vec![o(), q.clone(), z()], vec![half(), half(), z()], vec![q.clone(), q.clone(), q]],
                vec![vec![half(), half(), z()], vec![half(), half(), z()], vec![half(), half(), half()]],
            )
        }
        "table3" => {
            let (g, c, d) = (p("Delta"), p("c"), p("delta"));
            check(z() < c && c < d && d < g && g <= o(), "table3 needs 0 < c < delta < Delta <= 1")?;
            expected.insert("sse".into(), g.clone());
            expected.insert("maximin".into(), g.clone() - c.clone());
            expected.insert("gap".into(), g.clone());
            expected.insert("rse_value".into(), g.clone() - c.clone());
            expected.insert("tie_break_gap".into(), c.clone());
            (
                vec![vec![z(), z()], vec![g.clone(), g.clone() - c], vec![z(), z()]],
                vec![vec![g.clone(), z()], vec![g.clone(), g.clone()], vec![z(), g]],
            )
        }
        "table4" => {
            let e = p("eps");
            check(e > z() && e < o(), "table4 needs 0 < eps < 1")?;
            expected.insert("sse".into(), o());
            expected.insert("maximin".into(), z());
            expected.insert("gap".into(), o());
            (
                vec![vec![o(), z()], vec![z(), z()], vec![z(), z()]],
                vec![vec![(o() + e.clone()) * half(), (o() - e) * half()], vec![z(), o()], vec![o(), z()]],
            )
        }
        "table5" => {
            let (g, c) = (p("Delta"), p("c"));
            check(g > z() && g < half(), "table5 needs 0 < Delta < 1/2")?;
            check(c > z() && c < o(), "table5 needs 0 < c < 1")?;
            expected.insert("sse".into(), o());
            expected.insert("maximin".into(), c.clone());
            expected.insert("gap".into(), g.clone());
            (
                vec![vec![z(), c.clone()], vec![half(), c.clone()], vec![o(), c]],
                vec![vec![o(), g.clone()], vec![z(), g.clone()], vec![half(), g]],
            )
        }
        "table6-g1" | "table6-g2" => {
            let (g, d, e) = (p("Delta"), p("delta"), p("eps"));
            check(z() < e && e < o(), "table6 needs 0 < eps < 1")?;
            check(z() < d && d < g && g <= o(), "table6 needs 0 < delta < Delta <= 1")?;
            let g1 = name.ends_with("g1");
            let (hi, lo) = ((o() + e.clone()) * half(), (o() - e.clone()) * half());
            let row1 = if g1 { vec![hi + d.clone(), lo] } else { vec![lo + d.clone(), hi] };
            let value = if g1 { o() } else { (g.clone() - d.clone()) / (g.clone() - d.clone() + e.clone()) };
            expected.insert("rse_value".into(), value);
            expected.insert("sse".into(), o());
            (vec![vec![o(), z()], vec![z(), z()], vec![z(), z()]], vec![row1, vec![z(), g.clone()], vec![g, z()]])
        }
        "table7-g1" | "table7-g2" => {
            let (d, e) = (p("delta"), p("eps"));
            check(z() < e && e < o(), "table7 needs 0 < eps < 1")?;
            check(z() < d && d <= o(), "table7 needs 0 < delta <= 1")?;
            let g1 = name.ends_with("g1");
            let (hi, lo) = ((o() + e.clone()) * half(), (o() - e) * half());
            let row1 = if g1 { vec![hi + d, lo] } else { vec![lo + d, hi] };
            expected.insert("rse_value".into(), if g1 { o() } else { half() });
            expected.insert("gap".into(), z());
            (vec![vec![o(), z()], vec![half(), half()]], vec![row1, vec![o(), o()]])
        }
        "degenerate-1x2" => {
            expected.insert("sse".into(), o());
            expected.insert("maximin".into(), z());
            expected.insert("gap".into(), z());
            (vec![vec![z(), o()]], vec![vec![o(), o()]])
        }
        _ => unreachable!("defaults cover every name"),
    };

    let mut game = Game::normalize(ul, uf)?.with_name(name);
    for (k, v) in &full {
        game.meta.params.insert(k.clone(), v.to_text());
    }
    let mut derived = BTreeMap::new();
    if let Some(d) = full.get("delta") {
        derived.insert("delta".to_string(), game.scale_delta(d));
    }
    if let Some(g) = inducibility_gap(&game)?.finite() {
        derived.insert("gap".to_string(), g.clone());
    }
    Ok(CatalogEntry { name: name.to_string(), params: full, derived, game, expected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn every_name_builds_with_defaults() {
        for name in CATALOG_NAMES {
            let e = catalog::<Rational>(name, &BTreeMap::new()).unwrap();
            assert_eq!(e.game.meta.name.as_deref(), Some(name));
        }
        assert!(matches!(catalog::<Rational>("table9", &BTreeMap::new()), Err(Error::UnknownCatalog(_))));
    }

    #[test]
    fn parameters_are_validated() {
        let bad: BTreeMap<String, Rational> = parse_params("Delta=0.6").unwrap();
        assert!(catalog("table5", &bad).is_err());
        let unknown: BTreeMap<String, Rational> = parse_params("foo=1").unwrap();
        assert!(catalog("table2", &unknown).is_err());
        let ok: BTreeMap<String, Rational> = parse_params("gap=2/5, c=1/5, delta=3/10").unwrap();
        assert!(catalog("table3", &ok).is_ok());
    }

    #[test]
    fn table1_is_rescaled() {
        let e = catalog::<Rational>("table1", &BTreeMap::new()).unwrap();
        assert_eq!(e.delta(), Some(&Rational::from_ratio(1, 4)));
        assert_eq!(e.game.uf(0, 0), &Rational::from_ratio(0, 1));
    }

    #[test]
    fn table4_formula() {
        let e = Rational::from_ratio(1, 2);
        assert_eq!(table4_value(&e, &Rational::from_ratio(1, 4)), Rational::from_ratio(1, 1));
        assert_eq!(table4_value(&e, &Rational::from_ratio(3, 4)), Rational::from_ratio(1, 2));
        assert_eq!(table4_value(&e, &Rational::from_ratio(3, 2)), Rational::from_ratio(0, 1));
    }
}
