//! Approximate delta-RSE: SSE mixing under a positive gap, and a QPTAS over
//! k-uniform anchor strategies.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::baseline::{induce_strategy, inducibility_gap, solve_sse, Gap};
use crate::error::{Error, Result};
use crate::exact::{Certificate, Method, RseSolution};
use crate::game::{evaluate, Game, MixedStrategy};
use crate::lp::{LinearProgram, LpStatus, Relation};
use crate::scalar::Scalar;

pub const DEFAULT_ANCHOR_BUDGET: u64 = 1_000_000;

/// Mixes the SSE strategy towards the strategy inducing its response with margin `gap`.
/// Guarantees at least `(1 - delta / gap) * u_SSE`.
pub fn gap_approx<T: Scalar>(game: &Game<T>, delta: &T) -> Result<RseSolution<T>> {
    let start = Instant::now();
    if *delta < T::zero() {
        return Err(Error::InvalidDelta(delta.to_f64()));
    }
    let gap = inducibility_gap(game)?;
    if !gap.exceeds(delta) {
        return Err(Error::GapTooSmall { gap: gap.to_f64(), delta: delta.to_f64() });
    }
    let sse = solve_sse(game)?;
    let mut lp_count = game.n() + game.n();
    let mut details = BTreeMap::new();
    details.insert("gap".to_string(), gap.to_string());
    details.insert("u_sse".to_string(), sse.leader_value.to_text());
    let (x, bound) = match &gap {
        Gap::Infinite => (sse.strategy.clone(), sse.leader_value.clone()),
        Gap::Finite(g) => {
            lp_count += 1;
            let w = delta.clone() / g.clone();
            let xj = induce_strategy(game, sse.response, g)?
                .ok_or_else(|| Error::Infeasible("gap-inducing strategy".into()))?;
            details.insert("weight".to_string(), w.to_text());
            let bound = (T::one() - w.clone()) * sse.leader_value.clone();
            (sse.strategy.mix(&xj, &w), bound)
        }
    };
    let x = MixedStrategy::from_lp(x.probs().to_vec())?;
    Ok(RseSolution {
        outcome: evaluate(game, &x, delta)?,
        delta: delta.clone(),
        method: Method::GapApprox,
        trace: None,
        certificate: Some(Certificate { lower_bound: bound, details }),
        lp_count,
        wall_time: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QptasOptions {
    pub log_base: LogBase,
    /// Largest number of anchors enumerated.
    pub budget: u64,
}

impl Default for QptasOptions {
    fn default() -> Self {
        QptasOptions { log_base: LogBase::Natural, budget: DEFAULT_ANCHOR_BUDGET }
    }
}

/// Support size `k = ceil(log(2n) / (2 eps^2))`.
pub fn anchor_size(n: usize, eps: f64, base: LogBase) -> usize {
    let l = match base {
        LogBase::Natural => ((2 * n) as f64).ln(),
        LogBase::Two => ((2 * n) as f64).log2(),
    };
    ((l / (2.0 * eps * eps)).ceil() as usize).max(1)
}

/// `C(k + m - 1, m - 1)`, saturating.
pub fn anchor_count(m: usize, k: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 1..m {
        c = c * (k + i) as u128 / i as u128;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

/// Mixed strategy whose probabilities are multiples of `1/k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct KUniformStrategy {
    pub counts: Vec<usize>,
    pub k: usize,
}

impl KUniformStrategy {
    pub fn strategy<T: Scalar>(&self) -> MixedStrategy<T> {
        let probs = self.counts.iter().map(|&c| T::from_ratio(c as i64, self.k as i64)).collect();
        MixedStrategy::new(probs).expect("counts sum to k")
    }
}

/// All k-uniform strategies over `m` actions in lexicographic order of counts.
pub fn k_uniform_strategies(m: usize, k: usize) -> Vec<KUniformStrategy> {
    fn rec(m: usize, left: usize, prefix: &mut Vec<usize>, k: usize, out: &mut Vec<KUniformStrategy>) {
        if prefix.len() + 1 == m {
            prefix.push(left);
            out.push(KUniformStrategy { counts: prefix.clone(), k });
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(m, left - c, prefix, k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, &mut Vec::with_capacity(m), k, &mut out);
    out
}

/// Strategies whose leader payoffs stay within `eps` of the anchor's, for every follower action.
#[derive(Clone, Debug)]
pub struct SurrogateRegion<T> {
    pub anchor: KUniformStrategy,
    pub anchor_values: Vec<T>,
    pub epsilon: T,
}

impl<T: Scalar> SurrogateRegion<T> {
    pub fn new(game: &Game<T>, anchor: KUniformStrategy, epsilon: T) -> Self {
        let anchor_values = game.leader_payoffs(&anchor.strategy());
        SurrogateRegion { anchor, anchor_values, epsilon }
    }

    pub fn contains(&self, game: &Game<T>, x: &MixedStrategy<T>) -> bool {
        let tol = T::feasibility_tol();
        game.leader_payoffs(x)
            .iter()
            .zip(&self.anchor_values)
            .all(|(v, a)| (v.clone() - a.clone()).abs_val() <= self.epsilon.clone() + tol.clone())
    }

    fn constrain(&self, game: &Game<T>, lp: &mut LinearProgram<T>) {
        for (j, a) in self.anchor_values.iter().enumerate() {
            let col = game.leader_col(j);
            lp.add(col.clone(), Relation::Le, a.clone() + self.epsilon.clone());
            lp.add(col, Relation::Ge, a.clone() - self.epsilon.clone());
        }
    }
}

/// Looks for `x` in the region where some action outside `Q = {j : anchor value < mu}`
/// is a best response beating every action of `Q` by at least `delta`.
pub fn utility_verification<T: Scalar>(
    game: &Game<T>,
    region: &SurrogateRegion<T>,
    delta: &T,
    mu: &T,
) -> Result<(bool, Option<MixedStrategy<T>>)> {
    let (found, _) = verify_counted(game, region, delta, mu)?;
    Ok((found.is_some(), found))
}

fn verify_counted<T: Scalar>(
    game: &Game<T>,
    region: &SurrogateRegion<T>,
    delta: &T,
    mu: &T,
) -> Result<(Option<MixedStrategy<T>>, usize)> {
    let low: Vec<usize> = (0..game.n()).filter(|&j| region.anchor_values[j] < *mu).collect();
    let mut count = 0;
    for j in (0..game.n()).filter(|j| !low.contains(j)) {
        let mut lp = LinearProgram::feasibility(game.m()).with_simplex(game.m());
        region.constrain(game, &mut lp);
        for k in (0..game.n()).filter(|&k| k != j) {
            let margin = if low.contains(&k) { delta.clone() } else { T::zero() };
            lp.add(game.follower_diff(j, k), Relation::Ge, margin);
        }
        count += 1;
        let out = lp.solve()?;
        if let (LpStatus::Optimal, Some(x)) = (out.status, out.solution) {
            return Ok((Some(MixedStrategy::from_lp(x)?), count));
        }
    }
    Ok((None, count))
}

struct AnchorResult<T> {
    index: usize,
    surrogate: T,
    value: T,
    x: MixedStrategy<T>,
}

pub fn qptas<T: Scalar>(game: &Game<T>, delta: &T, eps: &T) -> Result<RseSolution<T>> {
    qptas_with(game, delta, eps, QptasOptions::default())
}

/// Best verified surrogate over all anchors; the returned strategy is
/// evaluated under the true delta-response model.
pub fn qptas_with<T: Scalar>(game: &Game<T>, delta: &T, eps: &T, opts: QptasOptions) -> Result<RseSolution<T>> {
    let start = Instant::now();
    if *delta < T::zero() {
        return Err(Error::InvalidDelta(delta.to_f64()));
    }
    if *eps <= T::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let k = anchor_size(game.n(), eps.to_f64(), opts.log_base);
    let count = anchor_count(game.m(), k);
    if count > opts.budget {
        return Err(Error::EnumerationCapExceeded {
            what: format!("anchors C({}, {})", k + game.m() - 1, game.m() - 1),
            size: count as f64,
            cap: opts.budget as f64,
        });
    }
    let anchors = k_uniform_strategies(game.m(), k);
    let per_anchor: Vec<(Option<AnchorResult<T>>, usize)> = anchors
        .par_iter()
        .enumerate()
        .map(|(index, anchor)| solve_anchor(game, delta, eps, index, anchor.clone()))
        .collect::<Result<_>>()?;
    let lp_count = per_anchor.iter().map(|r| r.1).sum();
    let results: Vec<AnchorResult<T>> = per_anchor.into_iter().filter_map(|r| r.0).collect();
    let top = results
        .iter()
        .map(|r| r.value.clone())
        .reduce(T::max_of)
        .ok_or_else(|| Error::Infeasible("no anchor verified".into()))?;
    let floor = top - T::value_tie_tol();
    let best = results.into_iter().filter(|r| r.value >= floor).min_by_key(|r| r.index).expect("non-empty");

    let mut details = BTreeMap::new();
    details.insert("k".to_string(), k.to_string());
    details.insert("anchors".to_string(), count.to_string());
    details.insert("anchor".to_string(), format!("{:?}", anchors[best.index].counts));
    details.insert("epsilon".to_string(), eps.to_text());
    details.insert("surrogate_value".to_string(), best.surrogate.to_text());
    Ok(RseSolution {
        outcome: evaluate(game, &best.x, delta)?,
        delta: delta.clone(),
        method: Method::Qptas,
        trace: None,
        certificate: Some(Certificate { lower_bound: best.surrogate - eps.clone(), details }),
        lp_count,
        wall_time: start.elapsed(),
    })
}

fn solve_anchor<T: Scalar>(
    game: &Game<T>,
    delta: &T,
    eps: &T,
    index: usize,
    anchor: KUniformStrategy,
) -> Result<(Option<AnchorResult<T>>, usize)> {
    let region = SurrogateRegion::new(game, anchor, eps.clone());
    let mut mus = region.anchor_values.clone();
    mus.sort_by(|a, b| a.partial_cmp(b).expect("finite payoffs"));
    mus.dedup();
    let mut lps = 0;
    let (first, c) = verify_counted(game, &region, delta, &mus[0])?;
    lps += c;
    let Some(mut witness) = first else { return Ok((None, lps)) };
    let (mut lo, mut hi) = (0, mus.len() - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        let (found, c) = verify_counted(game, &region, delta, &mus[mid])?;
        lps += c;
        match found {
            Some(x) => {
                witness = x;
                lo = mid;
            }
            None => hi = mid - 1,
        }
    }
    let mut value = evaluate(game, &witness, delta)?.leader_value;
    let anchor_x = region.anchor.strategy();
    let anchor_value = evaluate(game, &anchor_x, delta)?.leader_value;
    if anchor_value > value {
        value = anchor_value;
        witness = anchor_x;
    }
    Ok((Some(AnchorResult { index, surrogate: mus[lo].clone(), value, x: witness }), lps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn anchor_enumeration() {
        let all = k_uniform_strategies(3, 2);
        assert_eq!(all.len() as u64, anchor_count(3, 2));
        assert_eq!(all[0].counts, vec![0, 0, 2]);
        assert_eq!(all[5].counts, vec![2, 0, 0]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(anchor_count(1, 50), 1);
        assert_eq!(anchor_count(3, 26), 378);
    }

    #[test]
    fn anchor_size_formula() {
        assert_eq!(anchor_size(4, 0.2, LogBase::Natural), 26);
        assert_eq!(anchor_size(4, 0.2, LogBase::Two), 38);
        assert_eq!(anchor_size(1, 10.0, LogBase::Natural), 1);
    }

    #[test]
    fn budget_guard() {
        let g = Game::new(vec![vec![r(1, 2); 2]; 4], vec![vec![r(1, 2); 2]; 4]).unwrap();
        let opts = QptasOptions { budget: 10, ..Default::default() };
        assert!(matches!(qptas_with(&g, &r(1, 10), &r(1, 5), opts), Err(Error::EnumerationCapExceeded { .. })));
    }

    #[test]
    fn gap_approx_requires_gap() {
        let g = Game::new(vec![vec![r(1, 1), r(0, 1)]], vec![vec![r(1, 1), r(1, 1)]]).unwrap();
        assert!(matches!(gap_approx(&g, &r(1, 10)), Err(Error::GapTooSmall { .. })));
    }
}
