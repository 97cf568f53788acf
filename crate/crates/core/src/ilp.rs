//! Exhaustive enumeration of every optimal integral solution of a small ILP.
//!
//! Depth-first search over the variables in index order. Each node fixes a
//! prefix, asks the LP for the exact range of the next variable and, when the
//! objective is non-zero, for the LP bound of the subtree. Subtrees that are
//! LP-infeasible or strictly worse than the incumbent are cut; ties are kept.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational, Vector};
use crate::lp::{probe, CoordRange, StandardLp};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct IlpOptions {
    pub node_budget: u64,
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralSolutionSet {
    /// Sorted lexicographically.
    pub solutions: Vec<Vector>,
    /// `None` when no integral feasible point exists in the search box.
    pub objective: Option<Rational>,
    /// True when the search box was derived from (or contains) bounds implied
    /// by the constraints, so the set is the complete `intSol`.
    pub exhaustive: bool,
    pub nodes: u64,
}

impl IntegralSolutionSet {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }
}

/// Upper bounds `⌊min_i b_i / a_ij⌋` when `A ≥ 0`, `b ≥ 0` and every column has
/// a positive entry; `None` otherwise.
pub fn implied_upper_bounds(lp: &StandardLp) -> Option<Vec<BigInt>> {
    if !lp.a.is_nonnegative() || !lp.b.is_nonnegative() {
        return None;
    }
    (0..lp.cols())
        .map(|j| {
            (0..lp.rows())
                .filter(|&i| lp.a[(i, j)].is_positive())
                .map(|i| (&lp.b[i] / &lp.a[(i, j)]).floor())
                .min()
        })
        .collect()
}

/// Appends `x + s = ub` rows so the box becomes part of the LP.
fn boxed_lp(lp: &StandardLp, ub: &[u64]) -> Result<StandardLp> {
    let (d, n) = (lp.rows(), lp.cols());
    let mut a = Matrix::zeros(d + n, 2 * n);
    for i in 0..d {
        for j in 0..n {
            a[(i, j)] = lp.a[(i, j)].clone();
        }
    }
    for j in 0..n {
        a[(d + j, j)] = Rational::one();
        a[(d + j, n + j)] = Rational::one();
    }
    let b =
        lp.b.iter()
            .cloned()
            .chain(ub.iter().map(|&u| Rational::from(u)))
            .collect();
    let c =
        lp.c.iter()
            .cloned()
            .chain(std::iter::repeat_n(Rational::zero(), n))
            .collect();
    StandardLp::new(a, b, c)
}

pub fn enumerate_integral_optima(
    lp: &StandardLp,
    search_box: Option<&[u64]>,
    opts: &IlpOptions,
) -> Result<IntegralSolutionSet> {
    lp.validate()?;
    let n = lp.cols();
    let implied = implied_upper_bounds(lp);
    let (search_lp, exhaustive) = match search_box {
        None => match &implied {
            Some(_) => (lp.clone(), true),
            None => {
                return Err(Error::UnboundedSearch(
                    "no box given and bounds are not implied by A >= 0, b >= 0".into(),
                ))
            }
        },
        Some(ub) => {
            if ub.len() != n {
                return Err(Error::Dimension(format!(
                    "box has {} bounds for {n} variables",
                    ub.len()
                )));
            }
            let covers = implied
                .as_ref()
                .is_some_and(|imp| imp.iter().zip(ub).all(|(i, &u)| i <= &BigInt::from(u)));
            (boxed_lp(lp, ub)?, covers)
        }
    };

    if let Some(found) = zero_cost_presolve(lp, search_box, opts, exhaustive)? {
        return Ok(found);
    }

    let mut search = Search {
        lp: &search_lp,
        n,
        with_objective: lp.c.iter().any(|c| !c.is_zero()),
        budget: opts.node_budget,
        nodes: 0,
        incumbent: None,
        solutions: BTreeSet::new(),
    };
    search.dfs(&mut Vec::with_capacity(n))?;
    Ok(IntegralSolutionSet {
        solutions: search.solutions.into_iter().collect(),
        objective: search.incumbent,
        exhaustive,
        nodes: search.nodes,
    })
}

/// With `c ≥ 0`, any integral point using only zero-cost columns is optimal,
/// and then every optimum avoids the positive-cost columns. Enumerate the
/// zero-cost restriction first; fall back to the full search when it is empty.
fn zero_cost_presolve(
    lp: &StandardLp,
    search_box: Option<&[u64]>,
    opts: &IlpOptions,
    exhaustive: bool,
) -> Result<Option<IntegralSolutionSet>> {
    if lp.c.iter().any(Rational::is_negative) || lp.c.iter().all(Rational::is_zero) {
        return Ok(None);
    }
    let zero_cols: Vec<usize> = (0..lp.cols()).filter(|&j| lp.c[j].is_zero()).collect();
    if zero_cols.is_empty() {
        return Ok(None);
    }
    let sub = StandardLp::new(
        lp.a.select_columns(&zero_cols),
        lp.b.clone(),
        Vector::zeros(zero_cols.len()),
    )?;
    let sub_box: Option<Vec<u64>> = search_box.map(|ub| zero_cols.iter().map(|&j| ub[j]).collect());
    let found = enumerate_integral_optima(&sub, sub_box.as_deref(), opts)?;
    if found.is_empty() {
        return Ok(None);
    }
    let solutions = found
        .solutions
        .into_iter()
        .map(|s| {
            let mut full = Vector::zeros(lp.cols());
            for (k, &j) in zero_cols.iter().enumerate() {
                full[j] = s[k].clone();
            }
            full
        })
        .collect();
    Ok(Some(IntegralSolutionSet {
        solutions,
        objective: Some(Rational::zero()),
        exhaustive,
        nodes: found.nodes,
    }))
}

struct Search<'a> {
    lp: &'a StandardLp,
    n: usize,
    with_objective: bool,
    budget: u64,
    nodes: u64,
    incumbent: Option<Rational>,
    solutions: BTreeSet<Vector>,
}

impl Search<'_> {
    fn dfs(&mut self, prefix: &mut Vec<Rational>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "integral enumeration nodes",
                needed: format!("more than {}", self.budget),
                limit: self.budget.to_string(),
            });
        }
        let p = probe(self.lp, prefix, self.with_objective)?;
        let (min, max) = match p.range {
            CoordRange::Empty => return Ok(()),
            CoordRange::Range {
                min,
                max: Some(max),
            } => (min, max),
            CoordRange::Range { max: None, .. } => {
                return Err(Error::UnboundedSearch(format!(
                    "variable {} unbounded above",
                    prefix.len()
                )))
            }
        };
        if let (Some(inc), Some(bound)) = (&self.incumbent, &p.objective_bound) {
            if bound > inc {
                return Ok(());
            }
        }
        let mut v = min.ceil();
        let hi = max.floor();
        while v <= hi {
            prefix.push(Rational::from(&v));
            if prefix.len() == self.n {
                self.leaf(prefix);
            } else {
                self.dfs(prefix)?;
            }
            prefix.pop();
            v += 1;
        }
        Ok(())
    }

    fn leaf(&mut self, x: &[Rational]) {
        let value: Rational = x.iter().zip(self.lp.c.iter()).map(|(a, b)| a * b).sum();
        let point = Vector(x.to_vec());
        match &self.incumbent {
            Some(inc) if &value > inc => {}
            Some(inc) if &value == inc => {
                self.solutions.insert(point);
            }
            _ => {
                self.incumbent = Some(value);
                self.solutions.clear();
                self.solutions.insert(point);
            }
        }
    }
}

/// The lexicographically smallest optimum, or `None` when infeasible.
pub fn ilp_solve(
    lp: &StandardLp,
    search_box: Option<&[u64]>,
    opts: &IlpOptions,
) -> Result<Option<Vector>> {
    Ok(enumerate_integral_optima(lp, search_box, opts)?
        .solutions
        .into_iter()
        .next())
}
