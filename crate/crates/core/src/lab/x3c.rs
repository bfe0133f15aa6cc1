//! Exact cover by 3-sets and its reduction to delta-RSE.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::scalar::Scalar;

pub const BRUTE_FORCE_MAX_SUBSETS: usize = 20;

/// Universe `{0, .., 3k-1}` and a family of 3-element subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X3cInstance {
    pub k: usize,
    pub subsets: Vec<[usize; 3]>,
}

impl X3cInstance {
    pub fn new(k: usize, subsets: Vec<[usize; 3]>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("X3C needs k >= 1".into()));
        }
        if subsets.is_empty() {
            return Err(Error::InvalidParameter("X3C needs at least one subset".into()));
        }
        for s in &subsets {
            if s.iter().any(|&e| e >= 3 * k) || s[0] == s[1] || s[0] == s[2] || s[1] == s[2] {
                return Err(Error::InvalidParameter(format!("bad subset {s:?} for universe of {}", 3 * k)));
            }
        }
        Ok(X3cInstance { k, subsets })
    }

    /// First line `k`, then one subset of three integers per line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let k = lines
            .next()
            .ok_or_else(|| Error::Parse("empty X3C file".into()))?
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
        let mut subsets = Vec::new();
        for line in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("bad element `{t}`: {e}"))))
                .collect::<Result<_>>()?;
            let arr: [usize; 3] =
                nums.try_into().map_err(|_| Error::Parse(format!("subset line `{line}` must have three elements")))?;
            subsets.push(arr);
        }
        Self::new(k, subsets)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.k);
        for t in &self.subsets {
            s.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
        }
        s
    }

    pub fn m(&self) -> usize {
        self.subsets.len()
    }

    fn contains(&self, subset: usize, element: usize) -> bool {
        self.subsets[subset].contains(&element)
    }
}

/// Game whose `delta`-RSE value is `1/k` exactly when the instance has an exact cover.
///
/// Follower actions are ordered `a, b_1..b_m, c_1..c_3k`.
pub fn reduction<T: Scalar>(inst: &X3cInstance, delta: &T, eps: &T) -> Result<Game<T>> {
    let (zero, one) = (T::zero(), T::one());
    if !(*delta > zero && *delta < one) {
        return Err(Error::InvalidParameter("reduction needs 0 < delta < 1".into()));
    }
    if !(*eps > zero && *eps < one) {
        return Err(Error::InvalidParameter("reduction needs 0 < eps < 1".into()));
    }
    let m = inst.m();
    let k = inst.k;
    let kk = T::from_usize(k);
    let lambda = eps.clone() / T::from_usize(6 * m * k * k);

    let b_other = T::max_of(one.clone() - delta.clone() / (one.clone() - lambda.clone()), zero.clone());
    let b_own = T::min_of(one.clone(), (one.clone() - delta.clone()) / lambda.clone());
    let c_out = T::min_of(
        (one.clone() - delta.clone()) * kk.clone() / (kk.clone() - one.clone() + lambda.clone() * kk.clone()),
        one.clone(),
    );
    let c_in =
        T::max_of(zero.clone(), one.clone() - delta.clone() * kk.clone() / (one.clone() - lambda.clone() * kk.clone()));

    let n = 1 + m + 3 * k;
    let mut ul = vec![vec![zero.clone(); n]; m];
    let mut uf = vec![vec![zero.clone(); n]; m];
    for l in 0..m {
        ul[l][0] = one.clone() / kk.clone();
        uf[l][0] = one.clone();
        for j in 0..m {
            ul[l][1 + j] = if j == l { one.clone() } else { zero.clone() };
            uf[l][1 + j] = if j == l { b_own.clone() } else { b_other.clone() };
        }
        for i in 0..3 * k {
            uf[l][1 + m + i] = if inst.contains(l, i) { c_in.clone() } else { c_out.clone() };
        }
    }
    let mut game = Game::new(ul, uf)?.with_name("x3c-reduction");
    game.meta.params.insert("k".into(), k.to_string());
    game.meta.params.insert("m".into(), m.to_string());
    game.meta.params.insert("delta".into(), delta.to_text());
    game.meta.params.insert("eps".into(), eps.to_text());
    Ok(game)
}

/// Value of the reduced game on a yes-instance.
pub fn yes_value<T: Scalar>(k: usize) -> T {
    T::one() / T::from_usize(k)
}

/// Upper bound on the value of the reduced game on a no-instance.
pub fn no_value_bound<T: Scalar>(k: usize, eps: &T) -> T {
    (T::one() + eps.clone()) / T::from_usize(2 * k)
}

/// Whether some `k` subsets partition the universe.
pub fn x3c_brute_check(inst: &X3cInstance) -> Result<bool> {
    if inst.m() > BRUTE_FORCE_MAX_SUBSETS {
        return Err(Error::BudgetExceeded(format!(
            "{} subsets exceeds brute-force limit {BRUTE_FORCE_MAX_SUBSETS}",
            inst.m()
        )));
    }
    fn rec(inst: &X3cInstance, start: usize, covered: u64, picked: usize) -> bool {
        if picked == inst.k {
            return covered.count_ones() as usize == 3 * inst.k;
        }
        (start..inst.m()).any(|s| {
            let mask = inst.subsets[s].iter().fold(0u64, |a, &e| a | 1 << e);
            mask & covered == 0 && rec(inst, s + 1, covered | mask, picked + 1)
        })
    }
    if 3 * inst.k > 64 {
        return Err(Error::BudgetExceeded("universe larger than 64 elements".into()));
    }
    Ok(rec(inst, 0, 0, 0))
}

/// Random instance with `m >= k` subsets; `yes` plants an exact cover, otherwise
/// instances are resampled until none exists.
pub fn random_x3c<R: Rng>(rng: &mut R, k: usize, m: usize, yes: bool) -> Result<X3cInstance> {
    if k == 0 || m < k || (yes && m < k) {
        return Err(Error::InvalidParameter("random X3C needs 1 <= k <= m".into()));
    }
    let random_subset = |rng: &mut R| -> [usize; 3] {
        let mut elems: Vec<usize> = (0..3 * k).collect();
        elems.shuffle(rng);
        let mut t = [elems[0], elems[1], elems[2]];
        t.sort_unstable();
        t
    };
    for _ in 0..1000 {
        let mut subsets = Vec::with_capacity(m);
        if yes {
            let mut elems: Vec<usize> = (0..3 * k).collect();
            elems.shuffle(rng);
            for c in elems.chunks(3) {
                let mut t = [c[0], c[1], c[2]];
                t.sort_unstable();
                subsets.push(t);
            }
        }
        while subsets.len() < m {
            subsets.push(random_subset(rng));
        }
        subsets.shuffle(rng);
        let inst = X3cInstance::new(k, subsets)?;
        if yes || !x3c_brute_check(&inst)? {
            return Ok(inst);
        }
    }
    Err(Error::RejectionCapExceeded(1000))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_and_print() {
        let inst = X3cInstance::parse("2\n0 1 2\n3 4 5 # second\n1 2 3\n").unwrap();
        assert_eq!(inst.m(), 3);
        assert_eq!(X3cInstance::parse(&inst.to_text()).unwrap(), inst);
        assert!(X3cInstance::parse("1\n0 1\n").is_err());
        assert!(X3cInstance::parse("1\n0 1 3\n").is_err());
        assert!(X3cInstance::parse("1\n0 0 1\n").is_err());
    }

    #[test]
    fn brute_force() {
        let yes = X3cInstance::parse("2\n0 1 2\n1 2 3\n3 4 5\n").unwrap();
        assert!(x3c_brute_check(&yes).unwrap());
        let no = X3cInstance::parse("2\n0 1 2\n1 2 3\n2 4 5\n").unwrap();
        assert!(!x3c_brute_check(&no).unwrap());
    }

    #[test]
    fn random_instances_have_requested_answer() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            assert!(x3c_brute_check(&random_x3c(&mut rng, 2, 4, true).unwrap()).unwrap());
            assert!(!x3c_brute_check(&random_x3c(&mut rng, 2, 4, false).unwrap()).unwrap());
        }
    }

    #[test]
    fn reduced_game_shape() {
        let inst = X3cInstance::parse("1\n0 1 2\n").unwrap();
        let g = reduction::<Rational>(&inst, &Rational::from_ratio(1, 2), &Rational::from_ratio(1, 10)).unwrap();
        assert_eq!((g.m(), g.n()), (1, 5));
        assert_eq!(g.ul(0, 0), &Rational::from_ratio(1, 1));
    }
}
