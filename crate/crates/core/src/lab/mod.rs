//! Benchmark instances: the catalog, random games, the X3C reduction and a
//! brute-force grid oracle.

pub mod catalog;
pub mod x3c;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baseline::inducibility_gap;
use crate::error::{Error, Result};
use crate::game::{evaluate, Game, GameValueReport, MixedStrategy};
use crate::scalar::Scalar;

pub use catalog::{catalog, parse_params, CatalogEntry, CATALOG_NAMES};
pub use x3c::{random_x3c, reduction, x3c_brute_check, X3cInstance};

pub const ORACLE_MAX_ACTIONS: usize = 4;
pub const ORACLE_MAX_RESOLUTION: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct RandomOptions<T> {
    /// Entries are multiples of `1/grid` when set.
    pub grid: Option<u32>,
    /// Resample until the inducibility gap strictly exceeds this.
    pub min_gap: Option<T>,
    pub max_attempts: u32,
}

impl<T> Default for RandomOptions<T> {
    fn default() -> Self {
        RandomOptions { grid: None, min_gap: None, max_attempts: 1000 }
    }
}

/// Seeded random game with entries uniform on `[0, 1]` or on a rational grid.
pub fn gen_random<T: Scalar>(m: usize, n: usize, seed: u64, opts: &RandomOptions<T>) -> Result<Game<T>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("random game needs m, n >= 1".into()));
    }
    if opts.grid == Some(0) {
        return Err(Error::InvalidParameter("grid resolution must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..opts.max_attempts {
        let mut draw = || -> Vec<Vec<T>> {
            (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| match opts.grid {
                            Some(q) => T::from_ratio(rng.random_range(0..=q) as i64, q as i64),
                            None => T::from_f64(rng.random::<f64>()).expect("finite"),
                        })
                        .collect()
                })
                .collect()
        };
        let ul = draw();
        let uf = draw();
        let game = Game::new(ul, uf)?;
        match &opts.min_gap {
            Some(t) if !inducibility_gap(&game)?.exceeds(t) => continue,
            _ => {
                let mut game = game.with_name(format!("random-{m}x{n}-{seed}"));
                game.meta.params.insert("seed".into(), seed.to_string());
                return Ok(game);
            }
        }
    }
    Err(Error::RejectionCapExceeded(opts.max_attempts))
}

/// All strategies whose probabilities are multiples of `1 / resolution`, lexicographic in counts.
fn lattice(m: usize, resolution: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(m: usize, left: usize, prefix: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if prefix.len() + 1 == m {
            prefix.push(left);
            visit(prefix);
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(m, left - c, prefix, visit);
            prefix.pop();
        }
    }
    rec(m, resolution, &mut Vec::with_capacity(m), &mut visit);
}

/// Best pessimistic value over a uniform lattice on the simplex. Never exceeds the true `u_RSE`.
pub fn grid_oracle<T: Scalar>(game: &Game<T>, delta: &T, resolution: usize) -> Result<GameValueReport<T>> {
    if game.m() > ORACLE_MAX_ACTIONS || resolution > ORACLE_MAX_RESOLUTION || resolution == 0 {
        return Err(Error::BudgetExceeded(format!(
            "grid oracle supports m <= {ORACLE_MAX_ACTIONS} and 1 <= resolution <= {ORACLE_MAX_RESOLUTION}"
        )));
    }
    let mut best: Option<GameValueReport<T>> = None;
    let mut err = None;
    lattice(game.m(), resolution, |counts| {
        if err.is_some() {
            return;
        }
        let x = MixedStrategy::new(counts.iter().map(|&c| T::from_ratio(c as i64, resolution as i64)).collect());
        match x.and_then(|x| evaluate(game, &x, delta)) {
            Ok(rep) => {
                if best.as_ref().is_none_or(|b| rep.leader_value > b.leader_value) {
                    best = Some(rep);
                }
            }
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(best.expect("lattice is non-empty")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn random_is_reproducible() {
        let opts = RandomOptions { grid: Some(10), ..Default::default() };
        let a: Game<Rational> = gen_random(3, 3, 42, &opts).unwrap();
        let b: Game<Rational> = gen_random(3, 3, 42, &opts).unwrap();
        let c: Game<Rational> = gen_random(3, 3, 43, &opts).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let f: Game<f64> = gen_random(2, 4, 1, &RandomOptions::default()).unwrap();
        assert_eq!((f.m(), f.n()), (2, 4));
    }

    #[test]
    fn min_gap_is_respected() {
        let opts = RandomOptions { grid: Some(10), min_gap: Some(Rational::from_ratio(1, 5)), max_attempts: 1000 };
        let g: Game<Rational> = gen_random(3, 2, 5, &opts).unwrap();
        assert!(inducibility_gap(&g).unwrap().exceeds(&Rational::from_ratio(1, 5)));
        let impossible = RandomOptions { grid: Some(10), min_gap: Some(Rational::from_ratio(2, 1)), max_attempts: 5 };
        assert!(matches!(gen_random(2, 2, 0, &impossible), Err(Error::RejectionCapExceeded(5))));
    }

    #[test]
    fn oracle_guards() {
        let g: Game<f64> = gen_random(5, 2, 1, &RandomOptions::default()).unwrap();
        assert!(matches!(grid_oracle(&g, &0.1, 10), Err(Error::BudgetExceeded(_))));
        let g: Game<f64> = gen_random(2, 2, 1, &RandomOptions::default()).unwrap();
        assert!(grid_oracle(&g, &0.1, 201).is_err());
        assert!(grid_oracle(&g, &0.1, 20).is_ok());
    }
}
