//! Exact delta-RSE via enumeration of response-set tuples.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::baseline::{inducibility_gap, solve_maximin, solve_sse, Gap};
use crate::error::{Error, Result};
use crate::game::{evaluate, Game, GameValueReport, MixedStrategy, ResponseSet};
use crate::lp::{LinearProgram, LpStatus, Relation, Sense};
use crate::scalar::Scalar;

pub const DEFAULT_EXACT_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    GapApprox,
    Qptas,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::GapApprox => "gap-approx",
            Method::Qptas => "qptas",
        }
    }
}

/// The relaxed response-set guess `(S, j_tilde, j)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tuple {
    pub set: ResponseSet,
    pub j_tilde: usize,
    pub j: usize,
}

impl Tuple {
    fn key(&self) -> (usize, &[usize], usize, usize) {
        (self.set.len(), self.set.actions(), self.j_tilde, self.j)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactTrace<T> {
    pub chosen: Tuple,
    /// Optimum of the relaxed LP for the chosen tuple.
    pub lp_value: T,
    pub repaired_set: ResponseSet,
    pub repaired_response: usize,
}

/// Guarantee attached to an approximate solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T> {
    /// Proven lower bound on the true value of the returned strategy.
    pub lower_bound: T,
    pub details: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RseSolution<T> {
    pub outcome: GameValueReport<T>,
    pub delta: T,
    pub method: Method,
    pub trace: Option<ExactTrace<T>>,
    pub certificate: Option<Certificate<T>>,
    pub lp_count: usize,
    /// Not part of any serialized output.
    pub wall_time: Duration,
}

impl<T: Scalar> RseSolution<T> {
    pub fn value(&self) -> &T {
        &self.outcome.leader_value
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    /// Solve one LP per tuple without feasibility pruning.
    pub exhaustive: bool,
    /// Largest follower action count accepted.
    pub cap: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { exhaustive: false, cap: DEFAULT_EXACT_CAP }
    }
}

#[derive(Clone, Debug)]
struct Candidate<T> {
    value: T,
    x: Vec<T>,
    tuple: Tuple,
}

pub fn solve_exact<T: Scalar>(game: &Game<T>, delta: &T) -> Result<RseSolution<T>> {
    solve_exact_with(game, delta, ExactOptions::default())
}

pub fn solve_exact_with<T: Scalar>(game: &Game<T>, delta: &T, opts: ExactOptions) -> Result<RseSolution<T>> {
    let start = Instant::now();
    if *delta < T::zero() || !delta.to_f64().is_finite() {
        return Err(Error::InvalidDelta(delta.to_f64()));
    }
    let n = game.n();
    if n > opts.cap {
        return Err(Error::EnumerationCapExceeded {
            what: "follower actions".into(),
            size: n as f64,
            cap: opts.cap as f64,
        });
    }
    let (best, lp_count) = if opts.exhaustive {
        let results: Vec<(Vec<Candidate<T>>, usize)> = (1u64..(1u64 << n))
            .into_par_iter()
            .map(|mask| exhaustive_mask(game, delta, mask))
            .collect::<Result<_>>()?;
        let lp_count = results.iter().map(|r| r.1).sum();
        let candidates = results.into_iter().flat_map(|r| r.0).collect();
        (select(candidates), lp_count)
    } else {
        pruned(game, delta)?
    };
    let best = best.ok_or_else(|| Error::Infeasible("no feasible response-set tuple".into()))?;

    let x = MixedStrategy::from_lp(best.x)?;
    let outcome = evaluate(game, &x, delta)?;
    let trace = ExactTrace {
        repaired_set: outcome.response_set.clone(),
        repaired_response: outcome.response,
        chosen: best.tuple,
        lp_value: best.value,
    };
    Ok(RseSolution {
        outcome,
        delta: delta.clone(),
        method: Method::Exact,
        trace: Some(trace),
        certificate: None,
        lp_count,
        wall_time: start.elapsed(),
    })
}

/// Highest value; ties (within tolerance) go to the smallest `(|S|, S, j_tilde, j)`.
fn select<T: Scalar>(candidates: Vec<Candidate<T>>) -> Option<Candidate<T>> {
    let top = candidates.iter().map(|c| c.value.clone()).reduce(T::max_of)?;
    let floor = top - T::value_tie_tol();
    candidates.into_iter().filter(|c| c.value >= floor).min_by(|a, b| a.tuple.key().cmp(&b.tuple.key()))
}

/// Branch and bound over response sets, one search per `j_tilde`.
fn pruned<T: Scalar>(game: &Game<T>, delta: &T) -> Result<(Option<Candidate<T>>, usize)> {
    let n = game.n();
    let sse = solve_sse(game)?;
    let seed = T::max_of(solve_maximin(game)?.leader_value, evaluate(game, &sse.strategy, delta)?.leader_value);
    let results: Vec<(Vec<Candidate<T>>, usize)> = (0..n)
        .into_par_iter()
        .map(|jt| {
            let mut search = Search { game, delta, jt, incumbent: seed.clone(), leaves: Vec::new(), lp_count: 0 };
            let base = search.base_lp();
            if let Some((x, bound)) = search.solve(&base)? {
                search.dfs(0, base, Vec::new(), x, bound)?;
            }
            Ok((search.leaves, search.lp_count))
        })
        .collect::<Result<_>>()?;
    let mut lp_count = results.iter().map(|r| r.1).sum();
    let leaves: Vec<Candidate<T>> = results.into_iter().flat_map(|r| r.0).collect();
    let Some(top) = leaves.iter().map(|c| c.value.clone()).reduce(T::max_of) else {
        return Ok((None, lp_count));
    };
    let floor = top - T::value_tie_tol();
    let Some(leaf) = leaves.into_iter().filter(|c| c.value >= floor).min_by(|a, b| a.tuple.key().cmp(&b.tuple.key()))
    else {
        return Ok((None, lp_count));
    };
    // smallest pessimal action reaching the leaf's value
    for &j in leaf.tuple.set.actions() {
        let lp = tuple_lp(game, delta, &leaf.tuple.set, leaf.tuple.j_tilde, j);
        lp_count += 1;
        let res = lp.solve()?;
        if let (LpStatus::Optimal, Some(x), Some(value)) = (res.status, res.solution, res.objective_value) {
            if value >= floor {
                let tuple = Tuple { j, ..leaf.tuple };
                return Ok((Some(Candidate { value, x, tuple }), lp_count));
            }
        }
    }
    Ok((Some(leaf), lp_count))
}

struct Search<'a, T> {
    game: &'a Game<T>,
    delta: &'a T,
    jt: usize,
    incumbent: T,
    leaves: Vec<Candidate<T>>,
    lp_count: usize,
}

impl<T: Scalar> Search<'_, T> {
    /// `max t` with `t <= u_l(x, j_tilde)`, `j_tilde` a best response, `x` on the simplex.
    fn base_lp(&self) -> LinearProgram<T> {
        let g = self.game;
        let m = g.m();
        let mut objective = vec![T::zero(); m + 1];
        objective[m] = T::one();
        let mut lp = LinearProgram::new(m + 1, Sense::Maximize).with_objective(objective).with_simplex(m).free(m);
        for k in (0..g.n()).filter(|&k| k != self.jt) {
            lp.add(pad(g.follower_diff(self.jt, k)), Relation::Ge, T::zero());
        }
        self.cap_by(&mut lp, self.jt);
        lp
    }

    /// `t <= u_l(x, j)`.
    fn cap_by(&self, lp: &mut LinearProgram<T>, j: usize) {
        let mut row = self.game.leader_col(j);
        row.push(-T::one());
        lp.add(row, Relation::Ge, T::zero());
    }

    fn solve(&mut self, lp: &LinearProgram<T>) -> Result<Option<(Vec<T>, T)>> {
        self.lp_count += 1;
        let out = lp.solve()?;
        Ok(match (out.status, out.solution, out.objective_value) {
            (LpStatus::Optimal, Some(x), Some(v)) => Some((x, v)),
            _ => None,
        })
    }

    fn hopeless(&self, bound: &T) -> bool {
        *bound < self.incumbent.clone() - T::value_tie_tol()
    }

    /// Decides membership of follower actions `k..n` one at a time. `(x, bound)` is the
    /// optimum of `lp`, which caps every leaf below.
    fn dfs(&mut self, k: usize, lp: LinearProgram<T>, members: Vec<usize>, x: Vec<T>, bound: T) -> Result<()> {
        if self.hopeless(&bound) {
            return Ok(());
        }
        let n = self.game.n();
        if k == n {
            return self.leaf(members, x, bound);
        }
        if k == self.jt {
            let mut members = members;
            members.push(k);
            return self.dfs(k + 1, lp, members, x, bound);
        }
        let diff = pad(self.game.follower_diff(k, self.jt));
        let neg_delta = -self.delta.clone();
        for include in [true, false] {
            let mut child = lp.clone();
            child.add(diff.clone(), if include { Relation::Ge } else { Relation::Le }, neg_delta.clone());
            if include {
                self.cap_by(&mut child, k);
            }
            let next = if child.is_feasible_point(&x) { Some((x.clone(), bound.clone())) } else { self.solve(&child)? };
            let Some((cx, cb)) = next else { continue };
            let mut set = members.clone();
            if include {
                set.push(k);
            }
            self.dfs(k + 1, child, set, cx, cb)?;
        }
        Ok(())
    }

    fn leaf(&mut self, members: Vec<usize>, x: Vec<T>, value: T) -> Result<()> {
        let set = ResponseSet::new(members);
        let m = self.game.m();
        let ul = self.game.leader_payoffs(&MixedStrategy::from_lp(x[..m].to_vec())?);
        let j = set
            .actions()
            .iter()
            .copied()
            .min_by(|&a, &b| ul[a].partial_cmp(&ul[b]).expect("comparable").then(a.cmp(&b)))
            .expect("leaf sets contain j_tilde");
        if value > self.incumbent {
            self.incumbent = value.clone();
        }
        self.leaves.push(Candidate { value, x: x[..m].to_vec(), tuple: Tuple { set, j_tilde: self.jt, j } });
        Ok(())
    }
}

fn pad<T: Scalar>(mut row: Vec<T>) -> Vec<T> {
    row.push(T::zero());
    row
}

/// Relaxed LP for the tuple `(set, jt, j)`: maximize `u_l(x, j)` with `jt` a best
/// response, exactly the actions of `set` within delta of it, and `j` pessimal in `set`.
fn tuple_lp<T: Scalar>(game: &Game<T>, delta: &T, set: &ResponseSet, jt: usize, j: usize) -> LinearProgram<T> {
    let mut lp =
        LinearProgram::new(game.m(), Sense::Maximize).with_objective(game.leader_col(j)).with_simplex(game.m());
    for k in 0..game.n() {
        if k != jt {
            lp.add(game.follower_diff(jt, k), Relation::Ge, T::zero());
            let rel = if set.contains(k) { Relation::Ge } else { Relation::Le };
            lp.add(game.follower_diff(k, jt), rel, -delta.clone());
        }
    }
    add_pessimal(&mut lp, game, set, j);
    lp
}

/// `j` is the leader's worst action within `set`.
fn add_pessimal<T: Scalar>(lp: &mut LinearProgram<T>, game: &Game<T>, set: &ResponseSet, j: usize) {
    for &k in set.actions().iter().filter(|&&k| k != j) {
        let row = game.leader().iter().map(|r| r[k].clone() - r[j].clone()).collect();
        lp.add(row, Relation::Ge, T::zero());
    }
}

fn exhaustive_mask<T: Scalar>(game: &Game<T>, delta: &T, mask: u64) -> Result<(Vec<Candidate<T>>, usize)> {
    let n = game.n();
    let set = ResponseSet::new((0..n).filter(|k| mask >> k & 1 == 1).collect());
    let mut out = Vec::new();
    let mut count = 0;
    for &jt in set.actions() {
        for &j in set.actions() {
            count += 1;
            let res = tuple_lp(game, delta, &set, jt, j).solve()?;
            if let (LpStatus::Optimal, Some(x), Some(value)) = (res.status, res.solution, res.objective_value) {
                out.push(Candidate { value, x, tuple: Tuple { set: set.clone(), j_tilde: jt, j } });
            }
        }
    }
    Ok((out, count))
}

/// `u_RSE` over a grid of deltas, with the baselines for reference.
#[derive(Clone, Debug)]
pub struct RseCurve<T> {
    pub deltas: Vec<T>,
    pub solutions: Vec<RseSolution<T>>,
    pub sse: T,
    pub maximin: T,
    pub gap: Gap<T>,
}

impl<T: Scalar> RseCurve<T> {
    pub fn values(&self) -> Vec<T> {
        self.solutions.iter().map(|s| s.value().clone()).collect()
    }
}

pub fn rse_curve<T: Scalar>(game: &Game<T>, deltas: &[T]) -> Result<RseCurve<T>> {
    rse_curve_with(game, deltas, ExactOptions::default())
}

pub fn rse_curve_with<T: Scalar>(game: &Game<T>, deltas: &[T], opts: ExactOptions) -> Result<RseCurve<T>> {
    if deltas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("delta grid must be strictly increasing".into()));
    }
    let solutions = deltas.iter().map(|d| solve_exact_with(game, d, opts)).collect::<Result<Vec<_>>>()?;
    Ok(RseCurve {
        deltas: deltas.to_vec(),
        solutions,
        sse: solve_sse(game)?.leader_value,
        maximin: solve_maximin(game)?.leader_value,
        gap: inducibility_gap(game)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn table2() -> Game<Rational> {
        let h = r(1, 2);
        let q = r(1, 4);
        let z = r(0, 1);
        Game::new(
            vec![
                vec![r(1, 1), q.clone(), z.clone()],
                vec![h.clone(), h.clone(), z.clone()],
                vec![q.clone(), q.clone(), q],
            ],
            vec![vec![h.clone(), h.clone(), z.clone()], vec![h.clone(), h.clone(), z], vec![h.clone(), h.clone(), h]],
        )
        .unwrap()
    }

    #[test]
    fn table2_value() {
        let sol = solve_exact(&table2(), &r(1, 4)).unwrap();
        assert_eq!(sol.value(), &r(1, 2));
        let trace = sol.trace.unwrap();
        assert_eq!(trace.lp_value, r(1, 2));
        assert!(trace.repaired_set.is_subset(&trace.chosen.set));
    }

    #[test]
    fn pruned_matches_exhaustive() {
        let g = table2();
        for d in [r(1, 10), r(1, 4), r(1, 2), r(3, 4)] {
            let a = solve_exact(&g, &d).unwrap();
            let b = solve_exact_with(&g, &d, ExactOptions { exhaustive: true, ..Default::default() }).unwrap();
            assert_eq!(a.value(), b.value());
            assert_eq!(a.trace.as_ref().unwrap().chosen, b.trace.as_ref().unwrap().chosen);
            assert!(a.lp_count <= b.lp_count);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = table2();
        let err = solve_exact_with(&g, &r(1, 4), ExactOptions { exhaustive: false, cap: 2 }).unwrap_err();
        assert!(matches!(err, Error::EnumerationCapExceeded { .. }));
        assert!(solve_exact(&g, &r(-1, 4)).is_err());
    }

    #[test]
    fn curve_rejects_unsorted_grid() {
        assert!(rse_curve(&table2(), &[r(1, 2), r(1, 4)]).is_err());
        let c = rse_curve(&table2(), &[r(1, 4), r(1, 2)]).unwrap();
        assert_eq!(c.values(), vec![r(1, 2), r(1, 2)]);
        assert_eq!(c.sse, r(1, 1));
        assert_eq!(c.maximin, r(1, 4));
    }
}
