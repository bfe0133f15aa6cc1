//! Strong Stackelberg equilibrium, maximin and the inducibility gap.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::{br_delta, pick, Game, GameValueReport, MixedStrategy, ResponseSet, TieBreaking};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::scalar::Scalar;

/// Inducibility gap; infinite when the follower has a single action.
#[derive(Clone, Debug, PartialEq)]
pub enum Gap<T> {
    Infinite,
    Finite(T),
}

impl<T: Scalar> Gap<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Gap::Finite(v) => Some(v),
            Gap::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Gap::Finite(v) => v.to_f64(),
            Gap::Infinite => f64::INFINITY,
        }
    }

    /// True when the gap is strictly larger than `v`.
    pub fn exceeds(&self, v: &T) -> bool {
        match self {
            Gap::Infinite => true,
            Gap::Finite(g) => g > v,
        }
    }
}

impl<T: Scalar> fmt::Display for Gap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gap::Infinite => write!(f, "inf"),
            Gap::Finite(v) => write!(f, "{}", v.to_text()),
        }
    }
}

/// Strategy making `j` a best response with every other action at least
/// `margin` worse, maximizing `u_l(x, j)`. `None` if no such strategy exists.
pub fn induce_strategy<T: Scalar>(game: &Game<T>, j: usize, margin: &T) -> Result<Option<MixedStrategy<T>>> {
    if j >= game.n() {
        return Err(Error::InvalidParameter(format!("action {j} out of range")));
    }
    let mut lp =
        LinearProgram::new(game.m(), Sense::Maximize).with_objective(game.leader_col(j)).with_simplex(game.m());
    for k in (0..game.n()).filter(|&k| k != j) {
        lp.add(game.follower_diff(j, k), Relation::Ge, margin.clone());
    }
    let out = lp.solve()?;
    match out.solution {
        Some(x) if out.is_optimal() => Ok(Some(MixedStrategy::from_lp(x[..game.m()].to_vec())?)),
        _ => Ok(None),
    }
}

/// SSE with optimistic tie-breaking; one LP per follower action.
pub fn solve_sse<T: Scalar>(game: &Game<T>) -> Result<GameValueReport<T>> {
    let tol = T::value_tie_tol();
    let mut best: Option<(T, MixedStrategy<T>, usize)> = None;
    for j in 0..game.n() {
        let Some(x) = induce_strategy(game, j, &T::zero())? else { continue };
        let value = game.leader_payoffs(&x)[j].clone();
        let better = match &best {
            None => true,
            Some((v, _, _)) => value > v.clone() + tol.clone(),
        };
        if better {
            best = Some((value, x, j));
        }
    }
    let (_, x, j) = best.ok_or_else(|| Error::Infeasible("no inducible follower action".into()))?;
    let mut set = br_delta(game, &x, &T::zero())?;
    set.insert(j);
    Ok(report(game, x, j, set, TieBreaking::Optimistic))
}

/// Leader security strategy against an adversarial follower.
pub fn solve_maximin<T: Scalar>(game: &Game<T>) -> Result<GameValueReport<T>> {
    let m = game.m();
    let mut objective = vec![T::zero(); m + 1];
    objective[m] = T::one();
    let mut lp = LinearProgram::new(m + 1, Sense::Maximize).with_objective(objective).with_simplex(m).free(m);
    for j in 0..game.n() {
        let mut row = game.leader_col(j);
        row.push(-T::one());
        lp.add(row, Relation::Ge, T::zero());
    }
    let out = lp.solve()?;
    let x = out
        .solution
        .filter(|_| out.status == crate::lp::LpStatus::Optimal)
        .ok_or_else(|| Error::Infeasible("maximin LP".into()))?;
    let x = MixedStrategy::from_lp(x[..m].to_vec())?;
    let set = ResponseSet::all(game.n());
    let j = pick(&set, &game.leader_payoffs(&x), TieBreaking::Pessimistic);
    Ok(report(game, x, j, set, TieBreaking::Pessimistic))
}

/// Largest margin by which each action can be made the unique best response; minimum over actions.
pub fn inducibility_gap<T: Scalar>(game: &Game<T>) -> Result<Gap<T>> {
    let n = game.n();
    if n == 1 {
        return Ok(Gap::Infinite);
    }
    let m = game.m();
    let mut gap: Option<T> = None;
    for j in 0..n {
        let mut objective = vec![T::zero(); m + 1];
        objective[m] = T::one();
        let mut lp = LinearProgram::new(m + 1, Sense::Maximize).with_objective(objective).with_simplex(m).free(m);
        for k in (0..n).filter(|&k| k != j) {
            let mut row = game.follower_diff(j, k);
            row.push(-T::one());
            lp.add(row, Relation::Ge, T::zero());
        }
        let out = lp.solve()?;
        let t = out.objective_value.ok_or_else(|| Error::Infeasible("inducibility LP".into()))?;
        gap = Some(match gap {
            None => t,
            Some(g) => T::min_of(g, t),
        });
    }
    Ok(Gap::Finite(gap.expect("n >= 2")))
}

fn report<T: Scalar>(
    game: &Game<T>,
    x: MixedStrategy<T>,
    j: usize,
    set: ResponseSet,
    tie_breaking: TieBreaking,
) -> GameValueReport<T> {
    let ul = game.leader_payoffs(&x);
    let uf = game.follower_payoffs(&x);
    GameValueReport {
        leader_value: ul[j].clone(),
        follower_value: uf[j].clone(),
        strategy: x,
        response: j,
        response_set: set,
        tie_breaking,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn game(ul: &[&[(i64, i64)]], uf: &[&[(i64, i64)]]) -> Game<Rational> {
        let conv = |m: &[&[(i64, i64)]]| m.iter().map(|row| row.iter().map(|&(a, b)| r(a, b)).collect()).collect();
        Game::new(conv(ul), conv(uf)).unwrap()
    }

    #[test]
    fn matching_pennies_style() {
        // leader wants to match, follower wants to mismatch
        let g = game(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]], &[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert_eq!(solve_maximin(&g).unwrap().leader_value, r(1, 2));
        assert_eq!(solve_sse(&g).unwrap().leader_value, r(1, 2));
        assert_eq!(inducibility_gap(&g).unwrap(), Gap::Finite(r(1, 1)));
    }

    #[test]
    fn single_follower_action_has_infinite_gap() {
        let g = game(&[&[(1, 4)], &[(3, 4)]], &[&[(0, 1)], &[(1, 1)]]);
        assert_eq!(inducibility_gap(&g).unwrap(), Gap::Infinite);
        let sse = solve_sse(&g).unwrap();
        assert_eq!(sse.leader_value, r(3, 4));
        assert_eq!(sse.strategy, MixedStrategy::pure(2, 1));
    }

    #[test]
    fn sse_prefers_smallest_action_on_ties() {
        let g = game(&[&[(1, 1), (1, 1)]], &[&[(1, 1), (1, 1)]]);
        let sse = solve_sse(&g).unwrap();
        assert_eq!(sse.response, 0);
        assert_eq!(sse.tie_breaking, TieBreaking::Optimistic);
        assert_eq!(inducibility_gap(&g).unwrap(), Gap::Finite(r(0, 1)));
    }

    #[test]
    fn induce_with_margin() {
        let g = game(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]], &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let x = induce_strategy(&g, 0, &r(1, 2)).unwrap().unwrap();
        assert_eq!(x, MixedStrategy::pure(2, 0));
        assert!(induce_strategy(&g, 0, &r(3, 2)).unwrap().is_none());
    }
}
