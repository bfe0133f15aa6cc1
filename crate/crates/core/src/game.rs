//! Bimatrix Stackelberg games, mixed strategies and delta-optimal responses.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{nearly_equal, significant_digits, strictly_greater, Scalar};

/// Maximum significant digits accepted when reading a JSON number in exact mode.
pub const EXACT_MAX_DIGITS: usize = 12;

/// `v' = scale * v + shift`, applied to a raw payoff to normalize it.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine<T> {
    pub scale: T,
    pub shift: T,
}

impl<T: Scalar> Affine<T> {
    pub fn identity() -> Self {
        Affine { scale: T::one(), shift: T::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.scale == T::one() && self.shift == T::zero()
    }

    pub fn apply(&self, v: &T) -> T {
        self.scale.clone() * v.clone() + self.shift.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameMeta<T> {
    pub name: Option<String>,
    pub leader_map: Affine<T>,
    pub follower_map: Affine<T>,
    pub params: BTreeMap<String, String>,
}

impl<T: Scalar> Default for GameMeta<T> {
    fn default() -> Self {
        GameMeta {
            name: None,
            leader_map: Affine::identity(),
            follower_map: Affine::identity(),
            params: BTreeMap::new(),
        }
    }
}

/// A two-player game with payoffs in `[0, 1]`; rows are leader actions.
#[derive(Clone, Debug, PartialEq)]
pub struct Game<T> {
    m: usize,
    n: usize,
    leader: Vec<Vec<T>>,
    follower: Vec<Vec<T>>,
    pub meta: GameMeta<T>,
}

impl<T: Scalar> Game<T> {
    pub fn new(leader: Vec<Vec<T>>, follower: Vec<Vec<T>>) -> Result<Self> {
        let (m, n) = check_shape(&leader, &follower)?;
        for (name, mat) in [("leader", &leader), ("follower", &follower)] {
            for row in mat {
                for v in row {
                    if !v.to_f64().is_finite() {
                        return Err(Error::InvalidGame(format!("{name} payoff is not finite")));
                    }
                    if *v < T::zero() || *v > T::one() {
                        return Err(Error::InvalidGame(format!(
                            "{name} payoff {v} outside [0, 1]; normalize raw games first"
                        )));
                    }
                }
            }
        }
        Ok(Game { m, n, leader, follower, meta: GameMeta::default() })
    }

    /// Builds a game from arbitrary finite payoffs, rescaling each matrix into `[0, 1]`.
    pub fn normalize(leader: Vec<Vec<T>>, follower: Vec<Vec<T>>) -> Result<Self> {
        check_shape(&leader, &follower)?;
        let (leader, lmap) = normalize_matrix(leader)?;
        let (follower, fmap) = normalize_matrix(follower)?;
        let mut game = Game::new(leader, follower)?;
        game.meta.leader_map = lmap;
        game.meta.follower_map = fmap;
        Ok(game)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.meta.name = Some(name.into());
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leader(&self) -> &[Vec<T>] {
        &self.leader
    }

    pub fn follower(&self) -> &[Vec<T>] {
        &self.follower
    }

    pub fn ul(&self, i: usize, j: usize) -> &T {
        &self.leader[i][j]
    }

    pub fn uf(&self, i: usize, j: usize) -> &T {
        &self.follower[i][j]
    }

    /// Follower payoff column `j`.
    pub fn follower_col(&self, j: usize) -> Vec<T> {
        self.follower.iter().map(|row| row[j].clone()).collect()
    }

    pub fn leader_col(&self, j: usize) -> Vec<T> {
        self.leader.iter().map(|row| row[j].clone()).collect()
    }

    /// Column `a - b` of the follower matrix.
    pub fn follower_diff(&self, a: usize, b: usize) -> Vec<T> {
        self.follower.iter().map(|row| row[a].clone() - row[b].clone()).collect()
    }

    /// Converts a delta given in raw follower units to normalized units.
    pub fn scale_delta(&self, raw: &T) -> T {
        self.meta.follower_map.scale.clone() * raw.clone()
    }

    pub fn leader_payoffs(&self, x: &MixedStrategy<T>) -> Vec<T> {
        payoffs(&self.leader, x.probs())
    }

    pub fn follower_payoffs(&self, x: &MixedStrategy<T>) -> Vec<T> {
        payoffs(&self.follower, x.probs())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Game<U> {
        let conv = |mat: &Vec<Vec<T>>| -> Vec<Vec<U>> { mat.iter().map(|row| row.iter().map(&f).collect()).collect() };
        Game {
            m: self.m,
            n: self.n,
            leader: conv(&self.leader),
            follower: conv(&self.follower),
            meta: GameMeta {
                name: self.meta.name.clone(),
                leader_map: Affine { scale: f(&self.meta.leader_map.scale), shift: f(&self.meta.leader_map.shift) },
                follower_map: Affine {
                    scale: f(&self.meta.follower_map.scale),
                    shift: f(&self.meta.follower_map.shift),
                },
                params: self.meta.params.clone(),
            },
        }
    }

    pub fn to_f64(&self) -> Game<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn to_json(&self) -> Value {
        let mat = |m: &Vec<Vec<T>>| -> Value {
            Value::Array(m.iter().map(|row| Value::Array(row.iter().map(scalar_to_json).collect())).collect())
        };
        let mut meta = Map::new();
        if let Some(name) = &self.meta.name {
            meta.insert("name".into(), json!(name));
        }
        for (key, map) in [("leader_map", &self.meta.leader_map), ("follower_map", &self.meta.follower_map)] {
            if !map.is_identity() {
                meta.insert(
                    key.into(),
                    json!({"scale": scalar_to_json(&map.scale), "shift": scalar_to_json(&map.shift)}),
                );
            }
        }
        if !self.meta.params.is_empty() {
            meta.insert("params".into(), json!(self.meta.params));
        }
        json!({
            "m": self.m,
            "n": self.n,
            "u_l": mat(&self.leader),
            "u_f": mat(&self.follower),
            "meta": Value::Object(meta),
        })
    }

    /// Reads the JSON game schema. Payoffs outside `[0, 1]` are normalized.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("game must be a JSON object".into()))?;
        let read = |key: &str| -> Result<Vec<Vec<T>>> {
            let rows = obj
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing matrix `{key}`")))?;
            rows.iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Parse(format!("`{key}` rows must be arrays")))?
                        .iter()
                        .map(scalar_from_json)
                        .collect()
                })
                .collect()
        };
        let leader = read("u_l")?;
        let follower = read("u_f")?;
        for (key, expect) in [("m", leader.len()), ("n", leader.first().map_or(0, Vec::len))] {
            if let Some(d) = obj.get(key) {
                if d.as_u64() != Some(expect as u64) {
                    return Err(Error::InvalidGame(format!("`{key}` does not match matrix shape")));
                }
            }
        }
        let in_unit = leader.iter().chain(&follower).flatten().all(|v| *v >= T::zero() && *v <= T::one());
        let mut game = if in_unit { Game::new(leader, follower)? } else { Game::normalize(leader, follower)? };
        if let Some(meta) = obj.get("meta").and_then(Value::as_object) {
            if let Some(name) = meta.get("name").and_then(Value::as_str) {
                game.meta.name = Some(name.to_string());
            }
            if in_unit {
                for (key, slot) in
                    [("leader_map", &mut game.meta.leader_map), ("follower_map", &mut game.meta.follower_map)]
                {
                    if let Some(map) = meta.get(key) {
                        let field = |f: &str| {
                            map.get(f)
                                .ok_or_else(|| Error::Parse(format!("`{key}` lacks `{f}`")))
                                .and_then(scalar_from_json::<T>)
                        };
                        *slot = Affine { scale: field("scale")?, shift: field("shift")? };
                    }
                }
            }
            if let Some(params) = meta.get("params").and_then(Value::as_object) {
                for (k, v) in params {
                    let text = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    game.meta.params.insert(k.clone(), text);
                }
            }
        }
        Ok(game)
    }
}

impl<T: Scalar> fmt::Display for Game<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            let cells: Vec<String> = (0..self.n)
                .map(|j| format!("({}, {})", self.leader[i][j].to_text(), self.follower[i][j].to_text()))
                .collect();
            writeln!(f, "{}", cells.join("  "))?;
        }
        Ok(())
    }
}

fn check_shape<T>(leader: &[Vec<T>], follower: &[Vec<T>]) -> Result<(usize, usize)> {
    let m = leader.len();
    if m == 0 {
        return Err(Error::InvalidGame("leader needs at least one action".into()));
    }
    let n = leader[0].len();
    if n == 0 {
        return Err(Error::InvalidGame("follower needs at least one action".into()));
    }
    if follower.len() != m || leader.iter().chain(follower).any(|row| row.len() != n) {
        return Err(Error::InvalidGame("payoff matrices must both be m x n".into()));
    }
    Ok((m, n))
}

fn normalize_matrix<T: Scalar>(mat: Vec<Vec<T>>) -> Result<(Vec<Vec<T>>, Affine<T>)> {
    if mat.iter().flatten().any(|v| !v.to_f64().is_finite()) {
        return Err(Error::InvalidGame("payoffs must be finite".into()));
    }
    if mat.iter().flatten().all(|v| *v >= T::zero() && *v <= T::one()) {
        return Ok((mat, Affine::identity()));
    }
    let mut lo = mat[0][0].clone();
    let mut hi = mat[0][0].clone();
    for v in mat.iter().flatten() {
        lo = T::min_of(lo, v.clone());
        hi = T::max_of(hi, v.clone());
    }
    let map = if hi == lo {
        Affine { scale: T::one(), shift: -lo }
    } else {
        let scale = T::one() / (hi - lo.clone());
        Affine { shift: -(scale.clone() * lo), scale }
    };
    let out = mat
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let w = map.apply(v);
                    // clamp rounding spill in floating point
                    T::min_of(T::max_of(w, T::zero()), T::one())
                })
                .collect()
        })
        .collect();
    Ok((out, map))
}

fn payoffs<T: Scalar>(mat: &[Vec<T>], x: &[T]) -> Vec<T> {
    let n = mat[0].len();
    let mut out = vec![T::zero(); n];
    for (row, p) in mat.iter().zip(x) {
        if p.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(row) {
            *o = o.clone() + p.clone() * v.clone();
        }
    }
    out
}

/// Emits a number when it round-trips exactly, otherwise a `"p/q"` string.
pub fn scalar_to_json<T: Scalar>(v: &T) -> Value {
    let f = v.to_f64();
    if T::from_f64(f).as_ref() == Some(v) {
        if f == f.trunc() && f.abs() < 1e15 {
            return json!(f as i64);
        }
        json!(f)
    } else {
        json!(v.to_text())
    }
}

pub fn scalar_from_json<T: Scalar>(v: &Value) -> Result<T> {
    match v {
        Value::String(s) => T::parse_text(s).ok_or_else(|| Error::Parse(format!("bad number `{s}`"))),
        Value::Number(num) => {
            let f = num.as_f64().ok_or_else(|| Error::Parse(format!("bad number `{num}`")))?;
            if T::EXACT && significant_digits(f) > EXACT_MAX_DIGITS {
                return Err(Error::Parse(format!(
                    "{num} has more than {EXACT_MAX_DIGITS} significant digits; write it as \"p/q\" for exact mode"
                )));
            }
            T::from_f64(f).ok_or_else(|| Error::Parse(format!("non-finite number `{num}`")))
        }
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

/// A probability distribution over leader actions.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedStrategy<T> {
    probs: Vec<T>,
}

impl<T: Scalar> MixedStrategy<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidStrategy("empty strategy".into()));
        }
        let tol = T::feasibility_tol();
        let mut sum = T::zero();
        for p in &probs {
            if !p.to_f64().is_finite() || *p < -tol.clone() {
                return Err(Error::InvalidStrategy(format!("negative or non-finite probability {p}")));
            }
            sum = sum + p.clone();
        }
        if !nearly_equal(&sum, &T::one(), &tol) {
            return Err(Error::InvalidStrategy(format!("probabilities sum to {sum}")));
        }
        Ok(MixedStrategy { probs })
    }

    /// Cleans an LP solution: tiny negatives are zeroed and the vector renormalized.
    pub fn from_lp(mut probs: Vec<T>) -> Result<Self> {
        if !T::EXACT {
            let mut sum = T::zero();
            for p in probs.iter_mut() {
                if *p < T::zero() {
                    *p = T::zero();
                }
                sum = sum + p.clone();
            }
            if sum > T::zero() {
                for p in probs.iter_mut() {
                    *p = p.clone() / sum.clone();
                }
            }
        }
        Self::new(probs)
    }

    pub fn pure(m: usize, i: usize) -> Self {
        let mut probs = vec![T::zero(); m];
        probs[i] = T::one();
        MixedStrategy { probs }
    }

    pub fn uniform(m: usize) -> Self {
        MixedStrategy { probs: vec![T::one() / T::from_usize(m); m] }
    }

    /// `(1 - w) * self + w * other`.
    pub fn mix(&self, other: &Self, w: &T) -> Self {
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (T::one() - w.clone()) * a.clone() + w.clone() * b.clone())
            .collect();
        MixedStrategy { probs }
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn to_f64(&self) -> MixedStrategy<f64> {
        MixedStrategy { probs: self.probs.iter().map(Scalar::to_f64).collect() }
    }
}

/// Sorted, duplicate-free set of follower actions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResponseSet(Vec<usize>);

impl ResponseSet {
    pub fn new(mut actions: Vec<usize>) -> Self {
        actions.sort_unstable();
        actions.dedup();
        ResponseSet(actions)
    }

    pub fn all(n: usize) -> Self {
        ResponseSet((0..n).collect())
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &ResponseSet) -> bool {
        self.0.iter().all(|&j| other.contains(j))
    }

    pub fn insert(&mut self, j: usize) {
        if let Err(pos) = self.0.binary_search(&j) {
            self.0.insert(pos, j);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreaking {
    Optimistic,
    Pessimistic,
}

impl TieBreaking {
    pub fn as_str(self) -> &'static str {
        match self {
            TieBreaking::Optimistic => "optimistic",
            TieBreaking::Pessimistic => "pessimistic",
        }
    }
}

/// A committed leader strategy together with the response it induces.
#[derive(Clone, Debug, PartialEq)]
pub struct GameValueReport<T> {
    pub strategy: MixedStrategy<T>,
    pub response: usize,
    pub response_set: ResponseSet,
    pub leader_value: T,
    pub follower_value: T,
    pub tie_breaking: TieBreaking,
}

fn check_inputs<T: Scalar>(game: &Game<T>, x: &MixedStrategy<T>, delta: &T) -> Result<()> {
    if x.len() != game.m() {
        return Err(Error::InvalidStrategy(format!(
            "strategy has {} entries, game has {} leader actions",
            x.len(),
            game.m()
        )));
    }
    if *delta < T::zero() || !delta.to_f64().is_finite() {
        return Err(Error::InvalidDelta(delta.to_f64()));
    }
    Ok(())
}

/// Follower actions whose payoff is strictly above `max - delta`; the argmax set when `delta = 0`.
pub fn br_delta<T: Scalar>(game: &Game<T>, x: &MixedStrategy<T>, delta: &T) -> Result<ResponseSet> {
    check_inputs(game, x, delta)?;
    Ok(br_from_payoffs(&game.follower_payoffs(x), delta))
}

pub(crate) fn br_from_payoffs<T: Scalar>(uf: &[T], delta: &T) -> ResponseSet {
    let mut best = uf[0].clone();
    for v in &uf[1..] {
        best = T::max_of(best, v.clone());
    }
    let threshold = best.clone() - delta.clone();
    let tie = T::strictness_tol();
    let set = uf
        .iter()
        .enumerate()
        .filter(|(_, v)| strictly_greater(*v, &threshold) || nearly_equal(*v, &best, &tie))
        .map(|(j, _)| j)
        .collect();
    ResponseSet(set)
}

/// Leader value of `x` when the follower picks the worst action for the leader in `BR_delta(x)`.
pub fn evaluate<T: Scalar>(game: &Game<T>, x: &MixedStrategy<T>, delta: &T) -> Result<GameValueReport<T>> {
    let set = br_delta(game, x, delta)?;
    let ul = game.leader_payoffs(x);
    let uf = game.follower_payoffs(x);
    let response = pick(&set, &ul, TieBreaking::Pessimistic);
    Ok(GameValueReport {
        strategy: x.clone(),
        response,
        leader_value: ul[response].clone(),
        follower_value: uf[response].clone(),
        response_set: set,
        tie_breaking: TieBreaking::Pessimistic,
    })
}

/// Worst (pessimistic) or best (optimistic) action for the leader in `set`, smallest index on ties.
pub fn pick<T: Scalar>(set: &ResponseSet, ul: &[T], mode: TieBreaking) -> usize {
    let mut best = set.actions()[0];
    for &j in &set.actions()[1..] {
        let better = match mode {
            TieBreaking::Pessimistic => ul[j] < ul[best],
            TieBreaking::Optimistic => ul[j] > ul[best],
        };
        if better {
            best = j;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn table2() -> Game<Rational> {
        let ul =
            vec![vec![r(1, 1), r(1, 4), r(0, 1)], vec![r(1, 2), r(1, 2), r(0, 1)], vec![r(1, 4), r(1, 4), r(1, 4)]];
        let uf =
            vec![vec![r(1, 2), r(1, 2), r(0, 1)], vec![r(1, 2), r(1, 2), r(0, 1)], vec![r(1, 2), r(1, 2), r(1, 2)]];
        Game::new(ul, uf).unwrap()
    }

    #[test]
    fn br_is_argmax_at_zero() {
        let g = table2();
        let x = MixedStrategy::pure(3, 0);
        assert_eq!(br_delta(&g, &x, &r(0, 1)).unwrap().actions(), &[0, 1]);
        let x = MixedStrategy::pure(3, 2);
        assert_eq!(br_delta(&g, &x, &r(0, 1)).unwrap().actions(), &[0, 1, 2]);
    }

    #[test]
    fn br_boundary_is_excluded() {
        let g = table2();
        let x = MixedStrategy::pure(3, 0);
        // j3 sits exactly delta below the max
        assert_eq!(br_delta(&g, &x, &r(1, 2)).unwrap().actions(), &[0, 1]);
        assert_eq!(br_delta(&g, &x, &r(51, 100)).unwrap().actions(), &[0, 1, 2]);
    }

    #[test]
    fn evaluate_is_pessimistic() {
        let g = table2();
        let rep = evaluate(&g, &MixedStrategy::pure(3, 0), &r(1, 4)).unwrap();
        assert_eq!(rep.response, 1);
        assert_eq!(rep.leader_value, r(1, 4));
        let rep = evaluate(&g, &MixedStrategy::pure(3, 1), &r(1, 4)).unwrap();
        assert_eq!(rep.leader_value, r(1, 2));
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = table2();
        assert!(matches!(br_delta(&g, &MixedStrategy::pure(3, 0), &r(-1, 10)), Err(Error::InvalidDelta(_))));
        assert!(br_delta(&g, &MixedStrategy::pure(2, 0), &r(0, 1)).is_err());
        assert!(MixedStrategy::new(vec![r(1, 2), r(1, 4)]).is_err());
        assert!(MixedStrategy::new(vec![r(3, 2), r(-1, 2)]).is_err());
        assert!(Game::new(vec![vec![r(2, 1)]], vec![vec![r(0, 1)]]).is_err());
        assert!(Game::new(vec![vec![r(0, 1)]], vec![vec![r(0, 1), r(0, 1)]]).is_err());
    }

    #[test]
    fn normalize_maps_into_unit_interval() {
        let g = Game::normalize(vec![vec![r(0, 1), r(1, 1)]], vec![vec![r(-1, 1), r(3, 1)]]).unwrap();
        assert_eq!(g.uf(0, 0), &r(0, 1));
        assert_eq!(g.uf(0, 1), &r(1, 1));
        assert!(g.meta.leader_map.is_identity());
        assert_eq!(g.scale_delta(&r(1, 1)), r(1, 4));
    }

    #[test]
    fn json_round_trip() {
        let g = table2().with_name("t2");
        let v = g.to_json();
        let back: Game<Rational> = Game::from_json(&v).unwrap();
        assert_eq!(back, g);
        let third = Game::new(vec![vec![r(1, 3)]], vec![vec![r(2, 3)]]).unwrap();
        let v = third.to_json();
        assert_eq!(v["u_l"][0][0], json!("1/3"));
        assert_eq!(Game::<Rational>::from_json(&v).unwrap(), third);
    }

    #[test]
    fn float_json_round_trip_is_bitwise() {
        let g = Game::new(vec![vec![0.1 + 0.2, 1.0 / 3.0]], vec![vec![0.7, 1e-300]]).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back: Game<f64> = Game::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        for j in 0..2 {
            assert_eq!(back.ul(0, j).to_bits(), g.ul(0, j).to_bits());
            assert_eq!(back.uf(0, j).to_bits(), g.uf(0, j).to_bits());
        }
    }

    #[test]
    fn exact_mode_rejects_long_decimals() {
        let v = json!({"u_l": [[0.3333333333333333]], "u_f": [[0.5]]});
        assert!(Game::<Rational>::from_json(&v).is_err());
        assert!(Game::<f64>::from_json(&v).is_ok());
    }
}
