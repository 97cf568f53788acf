//! Integer points of the convex hull of a column set.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational, Vector};
use crate::lp::{lp_solve, objective_range, CoordRange, LpStatus, StandardLp};

pub const DEFAULT_LP_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct HullOptions {
    /// Maximum number of coordinate-range LPs.
    pub lp_budget: u64,
}

impl Default for HullOptions {
    fn default() -> Self {
        HullOptions {
            lp_budget: DEFAULT_LP_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Polytopish,
    NotPolytopish,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopishReport {
    pub verdict: Verdict,
    /// Sorted lexicographically.
    pub hull_integer_points: Vec<Vector>,
    pub extra_points: Vec<Vector>,
    pub budget_exhausted: bool,
    pub lp_calls: u64,
}

fn check_columns(columns: &[Vector]) -> Result<usize> {
    let first = columns.first().ok_or(Error::Empty("column set"))?;
    let m = first.len();
    if let Some(c) = columns.iter().find(|c| c.len() != m) {
        return Err(Error::Dimension(format!(
            "columns of length {m} and {}",
            c.len()
        )));
    }
    Ok(m)
}

/// Rows of the columns' matrix followed by a row of ones.
fn lambda_system(columns: &[Vector]) -> Result<Matrix> {
    let a = Matrix::from_columns(columns)?;
    let mut rows = a.to_rows();
    rows.push(vec![Rational::one(); columns.len()]);
    Matrix::from_rows(rows)
}

/// Weights `λ ≥ 0`, `Σλ = 1`, `Σ λ_j·A_j = p` when `p` lies in the hull.
pub fn hull_membership(columns: &[Vector], p: &Vector) -> Result<Option<Vector>> {
    let m = check_columns(columns)?;
    if p.len() != m {
        return Err(Error::Dimension(format!(
            "point of length {} for columns of length {m}",
            p.len()
        )));
    }
    let a = lambda_system(columns)?;
    let mut b = p.clone();
    b.push(Rational::one());
    let res = lp_solve(&StandardLp::new(a, b, Vector::zeros(columns.len()))?)?;
    Ok(match res.status {
        LpStatus::Optimal => res.solution,
        _ => None,
    })
}

/// All integer points of `conv(columns)` by coordinate DFS with exact range
/// pruning, compared against the column set.
pub fn integer_points_in_hull(columns: &[Vector], opts: &HullOptions) -> Result<PolytopishReport> {
    let m = check_columns(columns)?;
    if columns.iter().any(|c| !c.is_integral()) {
        return Err(Error::InvalidParameter("columns must be integral".into()));
    }
    let full = lambda_system(columns)?;
    let mut search = HullSearch {
        full: &full,
        m,
        lp_budget: opts.lp_budget,
        lp_calls: 0,
        exhausted: false,
        found: Vec::new(),
    };
    let mut prefix = Vec::with_capacity(m);
    search.descend(&mut prefix)?;

    let mut points = search.found;
    points.sort();
    points.dedup();
    let mut column_set: Vec<&Vector> = columns.iter().collect();
    column_set.sort();
    let extra: Vec<Vector> = points
        .iter()
        .filter(|p| column_set.binary_search(p).is_err())
        .cloned()
        .collect();
    let verdict = if !extra.is_empty() {
        Verdict::NotPolytopish
    } else if search.exhausted {
        Verdict::Inconclusive
    } else {
        Verdict::Polytopish
    };
    Ok(PolytopishReport {
        verdict,
        hull_integer_points: points,
        extra_points: extra,
        budget_exhausted: search.exhausted,
        lp_calls: search.lp_calls,
    })
}

struct HullSearch<'a> {
    full: &'a Matrix,
    m: usize,
    lp_budget: u64,
    lp_calls: u64,
    exhausted: bool,
    found: Vec<Vector>,
}

impl HullSearch<'_> {
    fn descend(&mut self, prefix: &mut Vec<BigInt>) -> Result<()> {
        let i = prefix.len();
        if i == self.m {
            self.found.push(prefix.iter().map(Rational::from).collect());
            return Ok(());
        }
        if self.lp_calls >= self.lp_budget {
            self.exhausted = true;
            return Ok(());
        }
        self.lp_calls += 1;
        // Fixed rows 0..i plus the convexity row; objective is row i.
        let mut rows: Vec<usize> = (0..i).collect();
        rows.push(self.m);
        let all: Vec<usize> = (0..self.full.cols()).collect();
        let a = self.full.submatrix(&rows, &all);
        let mut b: Vector = prefix.iter().map(Rational::from).collect();
        b.push(Rational::one());
        let f = Vector(self.full.row(i).to_vec());
        let (lo, hi) = match objective_range(&a, &b, &f)? {
            CoordRange::Empty => return Ok(()),
            CoordRange::Range { min, max } => (
                min.ceil(),
                max.expect("hull coordinates are bounded").floor(),
            ),
        };
        let mut v = lo;
        while v <= hi {
            prefix.push(v.clone());
            self.descend(prefix)?;
            prefix.pop();
            if self.exhausted {
                return Ok(());
            }
            v += 1;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(v: &[&[i64]]) -> Vec<Vector> {
        v.iter().map(|c| Vector::from_ints(c)).collect()
    }

    #[test]
    fn membership() {
        let c = cols(&[&[1, 2], &[0, 1]]);
        let lambda = hull_membership(&c, &Vector::from_ints(&[1, 2]))
            .unwrap()
            .unwrap();
        assert_eq!(lambda, Vector::from_ints(&[1, 0]));
        let mid = Vector(vec![Rational::new(1, 2), Rational::new(3, 2)]);
        assert!(hull_membership(&c, &mid).unwrap().is_some());
        assert!(hull_membership(&c, &Vector::from_ints(&[1, 1]))
            .unwrap()
            .is_none());
        assert!(hull_membership(&c, &Vector::from_ints(&[1])).is_err());
        assert!(hull_membership(&[], &Vector::from_ints(&[1])).is_err());
    }

    #[test]
    fn staircase_two() {
        let c = cols(&[&[1, 2], &[0, 1]]);
        let r = integer_points_in_hull(&c, &HullOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Polytopish);
        assert_eq!(r.hull_integer_points, cols(&[&[0, 1], &[1, 2]]));
    }

    #[test]
    fn detects_extra_points() {
        let c = cols(&[&[0, 0], &[2, 0]]);
        let r = integer_points_in_hull(&c, &HullOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotPolytopish);
        assert_eq!(r.extra_points, cols(&[&[1, 0]]));
    }

    #[test]
    fn budget_gives_inconclusive() {
        let c = cols(&[&[0, 0], &[1, 1]]);
        let r = integer_points_in_hull(&c, &HullOptions { lp_budget: 1 }).unwrap();
        assert!(r.budget_exhausted);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn rejects_fractional_columns() {
        let c = vec![Vector(vec![Rational::new(1, 2)])];
        assert!(integer_points_in_hull(&c, &HullOptions::default()).is_err());
    }
}
