//! Dense two-phase simplex with Bland's rule, generic over [`Scalar`].

use std::cmp::Ordering;
use std::fmt::{self, Write as _};
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::OnceLock;

use thiserror::Error;

use crate::scalar::Scalar;

const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("constraint {0} is strict; call relax_strict first")]
    StrictConstraint(usize),
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    Dimension { index: usize, got: usize, expected: usize },
    #[error("simplex block of {0} variables exceeds the variable count")]
    SimplexBlock(usize),
    #[error("pivot limit reached")]
    PivotLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
    Lt,
    Gt,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Gt => ">",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
    Feasibility,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `optimize c.x` subject to linear constraints. When `simplex` is `Some(k)` the
/// first `k` variables are additionally constrained to the probability simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T> {
    pub num_vars: usize,
    pub sense: Sense,
    pub objective: Vec<T>,
    pub bounds: Vec<VarBound>,
    pub constraints: Vec<Constraint<T>>,
    pub simplex: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    pub solution: Option<Vec<T>>,
    pub objective_value: Option<T>,
    /// Indices of constraints holding with equality at the solution.
    pub tight_constraints: Vec<usize>,
}

impl<T: Scalar> LpOutcome<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            sense,
            objective: vec![T::zero(); num_vars],
            bounds: vec![VarBound::NonNegative; num_vars],
            constraints: Vec::new(),
            simplex: None,
        }
    }

    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(num_vars, Sense::Feasibility)
    }

    pub fn with_objective(mut self, objective: Vec<T>) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_simplex(mut self, k: usize) -> Self {
        self.simplex = Some(k);
        self
    }

    pub fn free(mut self, var: usize) -> Self {
        self.bounds[var] = VarBound::Free;
        self
    }

    pub fn add(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> usize {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self.constraints.len() - 1
    }

    /// Replaces strict relations by their closures; returns the touched indices.
    pub fn relax_strict(&self) -> (LinearProgram<T>, Vec<usize>) {
        let mut out = self.clone();
        let mut relaxed = Vec::new();
        for (idx, c) in out.constraints.iter_mut().enumerate() {
            match c.relation {
                Relation::Lt => c.relation = Relation::Le,
                Relation::Gt => c.relation = Relation::Ge,
                _ => continue,
            }
            relaxed.push(idx);
        }
        (out, relaxed)
    }

    fn validate(&self) -> Result<(), LpError> {
        for (index, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::Dimension { index, got: c.coeffs.len(), expected: self.num_vars });
            }
            if matches!(c.relation, Relation::Lt | Relation::Gt) {
                return Err(LpError::StrictConstraint(index));
            }
        }
        if self.objective.len() != self.num_vars {
            return Err(LpError::Dimension { index: usize::MAX, got: self.objective.len(), expected: self.num_vars });
        }
        if let Some(k) = self.simplex {
            if k > self.num_vars || self.bounds[..k].contains(&VarBound::Free) {
                return Err(LpError::SimplexBlock(k));
            }
        }
        Ok(())
    }

    /// Left-hand side of every constraint at `x`.
    pub fn lhs(&self, x: &[T]) -> Vec<T> {
        self.constraints.iter().map(|c| dot(&c.coeffs, x)).collect()
    }

    /// True when `x` satisfies every constraint within the feasibility tolerance.
    pub fn is_feasible_point(&self, x: &[T]) -> bool {
        let tol = T::feasibility_tol();
        if self.bounds.iter().zip(x).any(|(b, v)| *b == VarBound::NonNegative && *v < -tol.clone()) {
            return false;
        }
        if let Some(k) = self.simplex {
            let s = x[..k].iter().fold(T::zero(), |a, b| a + b.clone());
            if (s - T::one()).abs_val() > tol {
                return false;
            }
        }
        self.constraints.iter().all(|c| satisfies(&dot(&c.coeffs, x), c.relation, &c.rhs, &tol))
    }

    pub fn solve(&self) -> Result<LpOutcome<T>, LpError> {
        self.validate()?;
        if dump_enabled() {
            eprintln!("{self}");
        }
        let outcome = Simplex::build(self).run()?;
        if dump_enabled() {
            eprintln!("-- status: {:?}", outcome.status);
        }
        Ok(outcome)
    }
}

impl<T: Scalar> fmt::Display for LinearProgram<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |coeffs: &[T]| -> String {
            let mut s = String::new();
            for (i, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let t = c.to_text();
                    let sign = if t.starts_with('-') { "" } else { "+" };
                    let _ = write!(s, " {sign}{t} x{i}");
                }
            }
            if s.is_empty() {
                s.push_str(" 0");
            }
            s
        };
        let sense = match self.sense {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
            Sense::Feasibility => "find",
        };
        writeln!(f, "{sense}{}", term(&self.objective))?;
        writeln!(f, "subject to")?;
        for (i, c) in self.constraints.iter().enumerate() {
            writeln!(f, "  c{i}:{} {} {}", term(&c.coeffs), c.relation.symbol(), c.rhs.to_text())?;
        }
        if let Some(k) = self.simplex {
            writeln!(f, "  simplex: x0..x{} >= 0, sum = 1", k.saturating_sub(1))?;
        }
        let free: Vec<String> = self
            .bounds
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == VarBound::Free)
            .map(|(i, _)| format!("x{i}"))
            .collect();
        if !free.is_empty() {
            writeln!(f, "  free: {}", free.join(" "))?;
        }
        Ok(())
    }
}

static DUMP_FLAG: AtomicBool = AtomicBool::new(false);
static DUMP_ENV: OnceLock<bool> = OnceLock::new();

/// Enables printing every LP to stderr before it is solved.
pub fn set_lp_dump(on: bool) {
    DUMP_FLAG.store(on, AtomicOrdering::Relaxed);
}

fn dump_enabled() -> bool {
    DUMP_FLAG.load(AtomicOrdering::Relaxed)
        || *DUMP_ENV.get_or_init(|| std::env::var("RSEKIT_LP_DUMP").is_ok_and(|v| v == "1"))
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s = s + x.clone() * y.clone();
        }
    }
    s
}

fn satisfies<T: Scalar>(lhs: &T, rel: Relation, rhs: &T, tol: &T) -> bool {
    let d = lhs.clone() - rhs.clone();
    match rel {
        Relation::Le => d <= *tol,
        Relation::Ge => d >= -tol.clone(),
        Relation::Eq => d.abs_val() <= *tol,
        Relation::Lt => d < T::zero(),
        Relation::Gt => d > T::zero(),
    }
}

struct Simplex<'a, T> {
    lp: &'a LinearProgram<T>,
    /// Column layout: for each original variable its positive part, and a
    /// negative part when free; then slacks, then artificials.
    var_cols: Vec<(usize, Option<usize>)>,
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    ncols: usize,
    first_artificial: usize,
}

impl<'a, T: Scalar> Simplex<'a, T> {
    fn build(lp: &'a LinearProgram<T>) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut col = 0;
        for b in &lp.bounds {
            match b {
                VarBound::NonNegative => {
                    var_cols.push((col, None));
                    col += 1;
                }
                VarBound::Free => {
                    var_cols.push((col, Some(col + 1)));
                    col += 2;
                }
            }
        }
        let structural = col;

        // Row list in standard form with rhs >= 0.
        let mut raw: Vec<(Vec<T>, Relation, T)> = Vec::new();
        for c in &lp.constraints {
            raw.push((c.coeffs.clone(), c.relation, c.rhs.clone()));
        }
        if let Some(k) = lp.simplex {
            let mut coeffs = vec![T::zero(); lp.num_vars];
            for c in coeffs.iter_mut().take(k) {
                *c = T::one();
            }
            raw.push((coeffs, Relation::Eq, T::one()));
        }
        for row in raw.iter_mut() {
            if row.2 < T::zero() {
                for c in row.0.iter_mut() {
                    *c = -c.clone();
                }
                row.2 = -row.2.clone();
                row.1 = match row.1 {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    other => other,
                };
            }
        }
        let slacks = raw.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificials = raw.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = structural + slacks;
        let ncols = first_artificial + artificials;

        let mut rows = Vec::with_capacity(raw.len());
        let mut basis = Vec::with_capacity(raw.len());
        let mut slack = structural;
        let mut art = first_artificial;
        for (coeffs, rel, rhs) in raw {
            let mut row = vec![T::zero(); ncols + 1];
            for (v, c) in coeffs.into_iter().enumerate() {
                let (pos, neg) = var_cols[v];
                if let Some(neg) = neg {
                    row[neg] = -c.clone();
                }
                row[pos] = c;
            }
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -T::one();
                    slack += 1;
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
                _ => {
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
            }
            row[ncols] = rhs;
            rows.push(row);
        }
        Simplex { lp, var_cols, rows, basis, ncols, first_artificial }
    }

    /// Reduced-cost row for minimizing `cost . columns`.
    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let mut red: Vec<T> = cost.to_vec();
        red.push(T::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (r, a) in red.iter_mut().zip(row) {
                r.sub_mul_assign(&cb, a);
            }
        }
        red
    }

    fn pivot(&mut self, red: &mut [T], r: usize, e: usize) {
        let p = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            v.div_assign_ref(&p);
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[e].clone();
            if f.is_zero() {
                continue;
            }
            for (v, a) in row.iter_mut().zip(&pivot_row) {
                v.sub_mul_assign(&f, a);
            }
            // keep the pivot column an exact unit vector
            row[e] = T::zero();
        }
        let f = red[e].clone();
        if !f.is_zero() {
            for (v, a) in red.iter_mut().zip(&pivot_row) {
                v.sub_mul_assign(&f, a);
            }
            red[e] = T::zero();
        }
        self.rows[r] = pivot_row;
        self.basis[r] = e;
    }

    /// Minimizes with Bland's rule over columns `< limit`. Returns false when unbounded.
    fn optimize(&mut self, red: &mut [T], limit: usize, pivots: &mut usize) -> Result<bool, LpError> {
        loop {
            let entering = (0..limit).find(|&j| red[j].pivot_sign() == Ordering::Less);
            let Some(e) = entering else { return Ok(true) };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[e].pivot_sign() != Ordering::Greater {
                    continue;
                }
                let ratio = row[self.ncols].clone() / row[e].clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let cmp = (ratio.clone() - br.clone()).pivot_sign();
                        if cmp == Ordering::Less || (cmp == Ordering::Equal && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else { return Ok(false) };
            self.pivot(red, r, e);
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(LpError::PivotLimit);
            }
        }
    }

    fn run(mut self) -> Result<LpOutcome<T>, LpError> {
        let mut pivots = 0;
        let infeasible = LpOutcome {
            status: LpStatus::Infeasible,
            solution: None,
            objective_value: None,
            tight_constraints: Vec::new(),
        };

        if self.first_artificial < self.ncols {
            let mut cost = vec![T::zero(); self.ncols];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = T::one();
            }
            let mut red = self.reduced_costs(&cost);
            self.optimize(&mut red, self.ncols, &mut pivots)?;
            let phase1 = -red[self.ncols].clone();
            if phase1 > T::feasibility_tol() {
                return Ok(infeasible);
            }
            // Drive remaining artificials out of the basis, dropping redundant rows.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    let col = (0..self.first_artificial).find(|&j| self.rows[r][j].pivot_sign() != Ordering::Equal);
                    match col {
                        Some(e) => self.pivot(&mut red, r, e),
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        let mut cost = vec![T::zero(); self.ncols];
        let flip = self.lp.sense == Sense::Maximize;
        if self.lp.sense != Sense::Feasibility {
            for (v, c) in self.lp.objective.iter().enumerate() {
                let c = if flip { -c.clone() } else { c.clone() };
                let (pos, neg) = self.var_cols[v];
                if let Some(neg) = neg {
                    cost[neg] = -c.clone();
                }
                cost[pos] = c;
            }
            let mut red = self.reduced_costs(&cost);
            if !self.optimize(&mut red, self.first_artificial, &mut pivots)? {
                return Ok(LpOutcome {
                    status: LpStatus::Unbounded,
                    solution: None,
                    objective_value: None,
                    tight_constraints: Vec::new(),
                });
            }
        }

        let mut col_val = vec![T::zero(); self.ncols];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            col_val[b] = row[self.ncols].clone();
        }
        let x: Vec<T> = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => col_val[pos].clone() - col_val[neg].clone(),
                None => col_val[pos].clone(),
            })
            .collect();
        let tol = T::feasibility_tol();
        let tight = self
            .lp
            .lhs(&x)
            .into_iter()
            .zip(&self.lp.constraints)
            .enumerate()
            .filter(|(_, (lhs, c))| (lhs.clone() - c.rhs.clone()).abs_val() <= tol)
            .map(|(i, _)| i)
            .collect();
        let objective_value = match self.lp.sense {
            Sense::Feasibility => None,
            _ => Some(dot(&self.lp.objective, &x)),
        };
        Ok(LpOutcome { status: LpStatus::Optimal, solution: Some(x), objective_value, tight_constraints: tight })
    }
}
