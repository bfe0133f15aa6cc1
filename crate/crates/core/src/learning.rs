//! Learning a robust commitment from bandit feedback.
//!
//! Every action pair is sampled `T` times, utilities are estimated by their
//! empirical means, and the leader commits to a `(delta + 2 eps)`-RSE of the
//! estimate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::approx::{gap_approx, qptas};
use crate::baseline::inducibility_gap;
use crate::error::{Error, Result};
use crate::exact::{solve_exact, RseSolution};
use crate::game::{br_delta, evaluate, Game, MixedStrategy};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseModel {
    /// Rewards equal the true entries.
    None,
    /// Rewards are 0/1 draws with the entry as success probability.
    Bernoulli,
    /// Entry plus centered normal noise, resampled outside `+-3 sigma`.
    Gaussian { sigma: f64 },
}

impl NoiseModel {
    /// Parses `none`, `bernoulli` or `gaussian:SIGMA`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NoiseModel::None),
            "bernoulli" => Ok(NoiseModel::Bernoulli),
            _ => {
                let sigma = s
                    .strip_prefix("gaussian:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|v| *v > 0.0 && v.is_finite())
                    .ok_or_else(|| Error::Parse(format!("unknown noise model `{s}`")))?;
                Ok(NoiseModel::Gaussian { sigma })
            }
        }
    }
}

/// Access to a game through noisy samples only.
pub trait BanditOracle {
    /// `(m, n)`.
    fn dims(&self) -> (usize, usize);
    /// One noisy `(leader, follower)` reward for the pair `(i, j)`.
    fn query(&mut self, i: usize, j: usize) -> (f64, f64);
    fn query_count(&self, i: usize, j: usize) -> u64;
}

pub struct NoisyGameOracle {
    truth: Game<f64>,
    noise: NoiseModel,
    rng: ChaCha8Rng,
    counts: Vec<Vec<u64>>,
}

impl NoisyGameOracle {
    pub fn new<T: Scalar>(truth: &Game<T>, noise: NoiseModel, seed: u64) -> Self {
        let truth = truth.to_f64();
        let counts = vec![vec![0; truth.n()]; truth.m()];
        NoisyGameOracle { truth, noise, rng: ChaCha8Rng::seed_from_u64(seed), counts }
    }

    /// The hidden game. Only evaluation harnesses should look at it.
    pub fn truth(&self) -> &Game<f64> {
        &self.truth
    }

    fn draw(&mut self, mean: f64) -> f64 {
        match self.noise {
            NoiseModel::None => mean,
            NoiseModel::Bernoulli => {
                if self.rng.random_bool(mean.clamp(0.0, 1.0)) {
                    1.0
                } else {
                    0.0
                }
            }
            NoiseModel::Gaussian { sigma } => {
                let normal = Normal::new(0.0, sigma).expect("positive sigma");
                loop {
                    let z: f64 = normal.sample(&mut self.rng);
                    if z.abs() <= 3.0 * sigma {
                        return mean + z;
                    }
                }
            }
        }
    }
}

impl BanditOracle for NoisyGameOracle {
    fn dims(&self) -> (usize, usize) {
        (self.truth.m(), self.truth.n())
    }

    fn query(&mut self, i: usize, j: usize) -> (f64, f64) {
        self.counts[i][j] += 1;
        let (l, f) = (*self.truth.ul(i, j), *self.truth.uf(i, j));
        (self.draw(l), self.draw(f))
    }

    fn query_count(&self, i: usize, j: usize) -> u64 {
        self.counts[i][j]
    }
}

/// `T = ceil(ln(2mn / iota) / (2 eps^2))`.
pub fn samples_per_pair(m: usize, n: usize, eps: f64, iota: f64) -> Result<u64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    if !(iota > 0.0 && iota < 1.0) {
        return Err(Error::InvalidParameter("iota must lie in (0, 1)".into()));
    }
    let t = ((2.0 * (m * n) as f64 / iota).ln() / (2.0 * eps * eps)).ceil();
    Ok((t as u64).max(1))
}

/// Empirical means of `T` samples per pair, clamped to `[0, 1]`.
pub fn sample_estimate<O: BanditOracle>(oracle: &mut O, eps: f64, iota: f64) -> Result<(Game<f64>, u64)> {
    let (m, n) = oracle.dims();
    let t = samples_per_pair(m, n, eps, iota)?;
    let mut ul = vec![vec![0.0; n]; m];
    let mut uf = vec![vec![0.0; n]; m];
    for i in 0..m {
        for j in 0..n {
            let (mut sl, mut sf) = (0.0, 0.0);
            for _ in 0..t {
                let (l, f) = oracle.query(i, j);
                sl += l;
                sf += f;
            }
            ul[i][j] = (sl / t as f64).clamp(0.0, 1.0);
            uf[i][j] = (sf / t as f64).clamp(0.0, 1.0);
        }
    }
    Ok((Game::new(ul, uf)?, t))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LearnSolver {
    Exact,
    Qptas { eps: f64 },
    GapApprox,
}

/// Commits to a `(delta + 2 eps)`-RSE of an estimated game.
pub fn learn_from_estimate<T: Scalar>(
    estimate: &Game<T>,
    delta: &T,
    eps: &T,
    solver: LearnSolver,
) -> Result<RseSolution<T>> {
    let widened = delta.clone() + eps.clone() + eps.clone();
    match solver {
        LearnSolver::Exact => solve_exact(estimate, &widened),
        LearnSolver::Qptas { eps: q } => {
            let q = T::from_f64(q).ok_or_else(|| Error::InvalidParameter("QPTAS epsilon".into()))?;
            qptas(estimate, &widened, &q)
        }
        LearnSolver::GapApprox => gap_approx(estimate, &widened),
    }
}

/// Value of `x` in the true game against the floor `u_RSE(delta + 4 eps) - 2 eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct Assessment<T> {
    pub true_value: T,
    pub floor: T,
}

impl<T: Scalar> Assessment<T> {
    pub fn passes(&self) -> bool {
        self.true_value >= self.floor.clone() - T::feasibility_tol()
    }
}

pub fn guarantee_floor<T: Scalar>(truth: &Game<T>, delta: &T, eps: &T) -> Result<T> {
    let four = T::from_usize(4);
    let two = T::from_usize(2);
    let v = solve_exact(truth, &(delta.clone() + four * eps.clone()))?;
    Ok(v.value().clone() - two * eps.clone())
}

pub fn assess<T: Scalar>(truth: &Game<T>, x: &MixedStrategy<T>, delta: &T, eps: &T) -> Result<Assessment<T>> {
    Ok(Assessment { true_value: evaluate(truth, x, delta)?.leader_value, floor: guarantee_floor(truth, delta, eps)? })
}

/// Largest absolute entry difference of the leader and follower matrices.
pub fn sup_errors<T: Scalar>(truth: &Game<T>, estimate: &Game<T>) -> (T, T) {
    let sup = |a: &[Vec<T>], b: &[Vec<T>]| {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .map(|(x, y)| (x.clone() - y.clone()).abs_val())
            .fold(T::zero(), T::max_of)
    };
    (sup(truth.leader(), estimate.leader()), sup(truth.follower(), estimate.follower()))
}

/// `BR_delta(truth, x)` is contained in `BR_{delta + 2 eps}(estimate, x)` whenever
/// the follower estimate is within `eps` of the truth.
pub fn check_br_inclusion<T: Scalar>(
    truth: &Game<T>,
    estimate: &Game<T>,
    x: &MixedStrategy<T>,
    delta: &T,
    eps: &T,
) -> Result<bool> {
    if truth.m() != estimate.m() || truth.n() != estimate.n() {
        return Err(Error::InvalidGame("truth and estimate differ in shape".into()));
    }
    let (_, err_f) = sup_errors(truth, estimate);
    if err_f > *eps {
        return Err(Error::PreconditionViolated(format!(
            "follower estimate error {} exceeds eps {}",
            err_f.to_text(),
            eps.to_text()
        )));
    }
    let small = br_delta(truth, x, delta)?;
    let big = br_delta(estimate, x, &(delta.clone() + eps.clone() + eps.clone()))?;
    Ok(small.is_subset(&big))
}

#[derive(Clone, Debug)]
pub struct LearnedOutcome {
    pub estimate: Game<f64>,
    pub samples_per_pair: u64,
    pub solution: RseSolution<f64>,
    pub true_value: f64,
    pub guarantee_floor: f64,
    pub sup_error_leader: f64,
    pub sup_error_follower: f64,
}

impl LearnedOutcome {
    pub fn strategy(&self) -> &MixedStrategy<f64> {
        &self.solution.outcome.strategy
    }

    pub fn passes(&self) -> bool {
        self.true_value >= self.guarantee_floor - crate::scalar::FEASIBILITY_TOL
    }
}

/// Samples, solves on the estimate and scores the commitment on the hidden truth.
/// With the QPTAS the floor is lowered by its own epsilon.
pub fn learn_rse(
    oracle: &mut NoisyGameOracle,
    delta: f64,
    eps: f64,
    iota: f64,
    solver: LearnSolver,
) -> Result<LearnedOutcome> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidDelta(delta));
    }
    let (estimate, t) = sample_estimate(oracle, eps, iota)?;
    let solution = learn_from_estimate(&estimate, &delta, &eps, solver)?;
    let truth = oracle.truth();
    let mut assessed = assess(truth, &solution.outcome.strategy, &delta, &eps)?;
    if let LearnSolver::Qptas { eps: q } = solver {
        assessed.floor -= q;
    }
    let (el, ef) = sup_errors(truth, &estimate);
    Ok(LearnedOutcome {
        estimate,
        samples_per_pair: t,
        solution,
        true_value: assessed.true_value,
        guarantee_floor: assessed.floor,
        sup_error_leader: el,
        sup_error_follower: ef,
    })
}

/// Learns an approximate SSE by running [`learn_rse`] with `delta = eps`.
/// The hidden game must have inducibility gap above `eps`.
pub fn learn_sse(oracle: &mut NoisyGameOracle, eps: f64, iota: f64) -> Result<LearnedOutcome> {
    let gap = inducibility_gap(oracle.truth())?;
    if !gap.exceeds(&eps) {
        return Err(Error::GapTooSmall { gap: gap.to_f64(), delta: eps });
    }
    learn_rse(oracle, eps, eps, iota, LearnSolver::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::catalog;
    use std::collections::BTreeMap;

    #[test]
    fn sample_count_formula() {
        assert_eq!(samples_per_pair(3, 2, 0.1, 0.1).unwrap(), 240);
        assert!(samples_per_pair(3, 2, 0.0, 0.1).is_err());
        assert!(samples_per_pair(3, 2, 0.1, 1.0).is_err());
    }

    #[test]
    fn zero_noise_estimate_is_exact() {
        let g = catalog::<f64>("table2", &BTreeMap::new()).unwrap().game;
        let mut o = NoisyGameOracle::new(&g, NoiseModel::None, 1);
        let (est, t) = sample_estimate(&mut o, 0.3, 0.5).unwrap();
        assert_eq!(est, Game::new(g.leader().to_vec(), g.follower().to_vec()).unwrap());
        assert_eq!(o.query_count(0, 0), t);
    }

    #[test]
    fn noise_parsing() {
        assert_eq!(NoiseModel::parse("gaussian:0.1").unwrap(), NoiseModel::Gaussian { sigma: 0.1 });
        assert!(NoiseModel::parse("gaussian:-1").is_err());
        assert!(NoiseModel::parse("poisson").is_err());
    }

    #[test]
    fn learn_sse_needs_gap() {
        let g = catalog::<f64>("table2", &BTreeMap::new()).unwrap().game;
        let mut o = NoisyGameOracle::new(&g, NoiseModel::None, 1);
        assert!(matches!(learn_sse(&mut o, 0.05, 0.1), Err(Error::GapTooSmall { .. })));
    }

    #[test]
    fn precondition_is_distinct() {
        let g = catalog::<f64>("table2", &BTreeMap::new()).unwrap().game;
        let far = Game::new(g.leader().to_vec(), vec![vec![0.0; 3]; 3]).unwrap();
        let x = MixedStrategy::pure(3, 0);
        assert!(matches!(check_br_inclusion(&g, &far, &x, &0.25, &0.05), Err(Error::PreconditionViolated(_))));
        assert!(check_br_inclusion(&g, &g, &x, &0.25, &0.05).unwrap());
    }
}
