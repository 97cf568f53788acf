//! Exact rational linear programming over `min{c·x : Ax = b, x ≥ 0}`.
//!
//! Two-phase primal simplex with Bland's smallest-index rule for both the
//! entering and the leaving variable. Phase one uses an auxiliary objective
//! over implicit artificial variables; no big-M constant is involved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardLp {
    pub a: Matrix,
    pub b: Vector,
    pub c: Vector,
}

impl StandardLp {
    pub fn new(a: Matrix, b: Vector, c: Vector) -> Result<Self> {
        let lp = StandardLp { a, b, c };
        lp.validate()?;
        Ok(lp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.cols() == 0 {
            return Err(Error::Dimension("LP needs at least one variable".into()));
        }
        if self.b.len() != self.a.rows() {
            return Err(Error::Dimension(format!(
                "right-hand side has {} entries for {} rows",
                self.b.len(),
                self.a.rows()
            )));
        }
        if self.c.len() != self.a.cols() {
            return Err(Error::Dimension(format!(
                "objective has {} entries for {} columns",
                self.c.len(),
                self.a.cols()
            )));
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn with_rhs(&self, b: Vector) -> Result<StandardLp> {
        StandardLp::new(self.a.clone(), b, self.c.clone())
    }

    pub fn with_objective(&self, c: Vector) -> Result<StandardLp> {
        StandardLp::new(self.a.clone(), self.b.clone(), c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub solution: Option<Vector>,
    pub objective: Option<Rational>,
    pub basis: Option<Vec<usize>>,
}

impl LpResult {
    fn without(status: LpStatus) -> Self {
        LpResult {
            status,
            solution: None,
            objective: None,
            basis: None,
        }
    }
}

/// Exact range of one coordinate over a feasible region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordRange {
    /// The region (with the given prefix fixed) is empty.
    Empty,
    /// `max = None` means the coordinate is unbounded above.
    Range {
        min: Rational,
        max: Option<Rational>,
    },
}

impl CoordRange {
    pub fn is_empty(&self) -> bool {
        matches!(self, CoordRange::Empty)
    }
}

enum Outcome {
    Optimal,
    Unbounded,
}

/// Dense simplex tableau over the structural columns only.
///
/// Artificial variables never re-enter once they leave, so their columns are
/// not stored; `basis[i] == None` marks a row whose artificial is still basic.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<Option<usize>>,
    n: usize,
    obj: Vec<Rational>,
    obj_rhs: Rational,
}

impl Tableau {
    /// Phase one. Returns `None` when `{Ax = b, x ≥ 0}` is empty.
    fn feasible(a: &Matrix, b: &[Rational]) -> Option<Tableau> {
        let n = a.cols();
        let mut rows = Vec::with_capacity(a.rows());
        let mut rhs = Vec::with_capacity(a.rows());
        for (i, bi) in b.iter().enumerate().take(a.rows()) {
            let row = a.row(i);
            if row.iter().all(Rational::is_zero) {
                if bi.is_zero() {
                    continue;
                }
                return None;
            }
            if bi.is_negative() {
                rows.push(row.iter().map(|v| -v).collect());
                rhs.push(-bi);
            } else {
                rows.push(row.to_vec());
                rhs.push(bi.clone());
            }
        }
        let m = rows.len();
        let mut obj = vec![Rational::zero(); n];
        for row in &rows {
            for (o, v) in obj.iter_mut().zip(row.iter()) {
                if !v.is_zero() {
                    *o -= v;
                }
            }
        }
        let obj_rhs = -rhs.iter().sum::<Rational>();
        let mut t = Tableau {
            rows,
            rhs,
            basis: vec![None; m],
            n,
            obj,
            obj_rhs,
        };
        if let Outcome::Unbounded = t.run() {
            unreachable!("phase one objective is bounded below by zero");
        }
        if !t.obj_rhs.is_zero() {
            return None;
        }
        t.drive_out_artificials();
        Some(t)
    }

    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r].is_some() {
                r += 1;
                continue;
            }
            match (0..self.n).find(|&j| !self.rows[r][j].is_zero()) {
                Some(q) => {
                    self.pivot(r, q);
                    r += 1;
                }
                None => {
                    // Redundant equality.
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let piv = self.rows[p][q].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for v in self.rows[p].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[p] *= &inv;
        }
        let nz: Vec<usize> = (0..self.n)
            .filter(|&k| !self.rows[p][k].is_zero())
            .collect();
        let (pivot_row, pivot_rhs) = (self.rows[p].clone(), self.rhs[p].clone());
        for i in 0..self.rows.len() {
            if i == p || self.rows[i][q].is_zero() {
                continue;
            }
            let f = self.rows[i][q].clone();
            for &k in &nz {
                let delta = &f * &pivot_row[k];
                self.rows[i][k] -= &delta;
            }
            if !pivot_rhs.is_zero() {
                let delta = &f * &pivot_rhs;
                self.rhs[i] -= &delta;
            }
        }
        if !self.obj[q].is_zero() {
            let f = self.obj[q].clone();
            for &k in &nz {
                let delta = &f * &pivot_row[k];
                self.obj[k] -= &delta;
            }
            let delta = &f * &pivot_rhs;
            self.obj_rhs -= &delta;
        }
        self.basis[p] = Some(q);
    }

    /// Bland's rule iterations until optimal or unbounded.
    fn run(&mut self) -> Outcome {
        loop {
            let Some(q) = (0..self.n).find(|&j| self.obj[j].is_negative()) else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let coef = &self.rows[i][q];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / coef;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis_key(i) < self.basis_key(*r))
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Outcome::Unbounded,
                Some((p, _)) => self.pivot(p, q),
            }
        }
    }

    // Artificials are indexed after every structural column.
    fn basis_key(&self, row: usize) -> usize {
        self.basis[row].unwrap_or(self.n + row)
    }

    /// Phase two for objective `c`, starting from the current feasible basis.
    fn optimize(&mut self, c: &[Rational]) -> Outcome {
        self.obj = c.to_vec();
        self.obj_rhs = Rational::zero();
        for i in 0..self.rows.len() {
            let j = self.basis[i].expect("phase one left an artificial basic");
            if c[j].is_zero() {
                continue;
            }
            let cb = c[j].clone();
            for (o, v) in self.obj.iter_mut().zip(self.rows[i].iter()) {
                if !v.is_zero() {
                    *o -= &cb * v;
                }
            }
            self.obj_rhs -= &cb * &self.rhs[i];
        }
        self.run()
    }

    fn objective_value(&self) -> Rational {
        -&self.obj_rhs
    }

    fn solution(&self) -> Vector {
        let mut x = Vector::zeros(self.n);
        for (i, b) in self.basis.iter().enumerate() {
            if let Some(j) = b {
                x[*j] = self.rhs[i].clone();
            }
        }
        x
    }

    fn basis_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.basis.iter().flatten().copied().collect();
        cols.sort_unstable();
        cols
    }
}

pub fn lp_solve(lp: &StandardLp) -> Result<LpResult> {
    lp.validate()?;
    let Some(mut t) = Tableau::feasible(&lp.a, &lp.b) else {
        return Ok(LpResult::without(LpStatus::Infeasible));
    };
    match t.optimize(&lp.c) {
        Outcome::Unbounded => Ok(LpResult::without(LpStatus::Unbounded)),
        Outcome::Optimal => Ok(LpResult {
            status: LpStatus::Optimal,
            solution: Some(t.solution()),
            objective: Some(t.objective_value()),
            basis: Some(t.basis_columns()),
        }),
    }
}

pub fn is_feasible_point(lp: &StandardLp, x: &Vector) -> Result<bool> {
    lp.validate()?;
    if x.len() != lp.cols() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, LP has {} variables",
            x.len(),
            lp.cols()
        )));
    }
    Ok(x.is_nonnegative() && lp.a.mul_vec(x)? == lp.b)
}

/// Minimum and maximum of `f·x` over `{Ax = b, x ≥ 0}`.
pub fn objective_range(a: &Matrix, b: &Vector, f: &Vector) -> Result<CoordRange> {
    if b.len() != a.rows() || f.len() != a.cols() {
        return Err(Error::Dimension("objective range inputs".into()));
    }
    let Some(mut t) = Tableau::feasible(a, b) else {
        return Ok(CoordRange::Empty);
    };
    range_on(&mut t, f)
}

fn range_on(t: &mut Tableau, f: &[Rational]) -> Result<CoordRange> {
    let min = match t.optimize(f) {
        Outcome::Optimal => t.objective_value(),
        Outcome::Unbounded => {
            return Err(Error::UnboundedSearch(
                "coordinate unbounded below on a non-negative region".into(),
            ))
        }
    };
    let neg: Vec<Rational> = f.iter().map(|v| -v).collect();
    let max = match t.optimize(&neg) {
        Outcome::Optimal => Some(-t.objective_value()),
        Outcome::Unbounded => None,
    };
    Ok(CoordRange::Range { min, max })
}

/// Range of the first free coordinate once a prefix of coordinates is fixed.
pub fn coord_range(lp: &StandardLp, fixed: &[Rational]) -> Result<CoordRange> {
    Ok(probe(lp, fixed, false)?.range)
}

/// Result of one phase-one solve on a prefix-fixed LP.
pub(crate) struct Probe {
    pub range: CoordRange,
    /// Minimum of `c·x` over the restricted region, including the fixed part.
    pub objective_bound: Option<Rational>,
}

/// Fixes `x[..fixed.len()]`, then reports the next coordinate's range and,
/// when requested, the LP bound on the objective, all from a single phase one.
pub(crate) fn probe(lp: &StandardLp, fixed: &[Rational], with_objective: bool) -> Result<Probe> {
    lp.validate()?;
    let k = fixed.len();
    let n = lp.cols();
    if k >= n {
        return Err(Error::Dimension(format!(
            "prefix of length {k} leaves no free coordinate among {n}"
        )));
    }
    let empty = Probe {
        range: CoordRange::Empty,
        objective_bound: None,
    };
    if fixed.iter().any(Rational::is_negative) {
        return Ok(empty);
    }
    let free: Vec<usize> = (k..n).collect();
    let sub = lp.a.select_columns(&free);
    let mut residual = lp.b.clone();
    for (j, v) in fixed.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        for i in 0..lp.rows() {
            let a = &lp.a[(i, j)];
            if !a.is_zero() {
                residual[i] -= a * v;
            }
        }
    }
    let Some(mut t) = Tableau::feasible(&sub, &residual) else {
        return Ok(empty);
    };
    let mut unit = vec![Rational::zero(); n - k];
    unit[0] = Rational::one();
    let range = range_on(&mut t, &unit)?;
    let objective_bound = if with_objective {
        let fixed_cost: Rational = fixed
            .iter()
            .zip(lp.c.iter())
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, c)| x * c)
            .sum();
        match t.optimize(&lp.c[k..]) {
            Outcome::Optimal => Some(fixed_cost + t.objective_value()),
            Outcome::Unbounded => None,
        }
    } else {
        None
    };
    Ok(Probe {
        range,
        objective_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ilp1(delta: i64, d: usize) -> Matrix {
        let mut m = Matrix::identity(d);
        for i in 1..d {
            m[(i, i - 1)] = Rational::from(delta);
        }
        m
    }

    fn powers(delta: i64, d: usize) -> Vector {
        (0..d)
            .map(|j| Rational::from(delta.pow(j as u32)))
            .collect()
    }

    #[test]
    fn staircase_solution() {
        let lp = StandardLp::new(ilp1(2, 2), Vector::from_ints(&[1, 2]), Vector::zeros(2)).unwrap();
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.solution.unwrap(), Vector::from_ints(&[1, 0]));
        assert_eq!(r.objective.unwrap(), Rational::zero());
    }

    #[test]
    fn infeasible_negative_rhs() {
        let lp = StandardLp::new(
            Matrix::identity(1),
            Vector::from_ints(&[-1]),
            Vector::zeros(1),
        )
        .unwrap();
        assert_eq!(lp_solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // x1 - x2 = 0, minimize -x1
        let a = Matrix::from_int_rows(&[vec![1, -1]]).unwrap();
        let lp = StandardLp::new(a, Vector::from_ints(&[0]), Vector::from_ints(&[-1, 0])).unwrap();
        assert_eq!(lp_solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows_and_degeneracy() {
        let a = Matrix::from_int_rows(&[vec![1, 1, 0], vec![2, 2, 0], vec![0, 1, 1]]).unwrap();
        let lp = StandardLp::new(
            a,
            Vector::from_ints(&[1, 2, 1]),
            Vector::from_ints(&[1, 2, 3]),
        )
        .unwrap();
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        let x = r.solution.unwrap();
        assert!(is_feasible_point(&lp, &x).unwrap());
        // x = (1,0,1) costs 4, (0,1,0) costs 2
        assert_eq!(r.objective.unwrap(), Rational::from(2));
        assert_eq!(r.basis.unwrap().len(), 2);
    }

    #[test]
    fn feasibility_examples() {
        let lp = StandardLp::new(ilp1(2, 4), powers(2, 4), Vector::zeros(4)).unwrap();
        assert!(is_feasible_point(&lp, &Vector::from_ints(&[1, 0, 4, 0])).unwrap());
        assert!(!is_feasible_point(&lp, &Vector::zeros(4)).unwrap());
        let shifted = lp.with_rhs(Vector::from_ints(&[0, 2, 4, 8])).unwrap();
        assert!(is_feasible_point(&shifted, &Vector::from_ints(&[0, 2, 0, 8])).unwrap());
        assert!(is_feasible_point(&lp, &Vector::zeros(3)).is_err());
    }

    #[test]
    fn coord_range_examples() {
        let a = Matrix::from_int_rows(&[vec![1, 1]]).unwrap();
        let lp = StandardLp::new(a, Vector::from_ints(&[1]), Vector::zeros(2)).unwrap();
        assert_eq!(
            coord_range(&lp, &[]).unwrap(),
            CoordRange::Range {
                min: Rational::zero(),
                max: Some(Rational::one())
            }
        );
        assert_eq!(
            coord_range(&lp, &[Rational::one()]).unwrap(),
            CoordRange::Range {
                min: Rational::zero(),
                max: Some(Rational::zero())
            }
        );
        assert!(coord_range(&lp, &[Rational::from(2)]).unwrap().is_empty());
        assert!(coord_range(&lp, &[Rational::zero(), Rational::zero()]).is_err());

        let stair =
            StandardLp::new(ilp1(2, 2), Vector::from_ints(&[1, 2]), Vector::zeros(2)).unwrap();
        assert_eq!(
            coord_range(&stair, &[]).unwrap(),
            CoordRange::Range {
                min: Rational::one(),
                max: Some(Rational::one())
            }
        );
    }

    #[test]
    fn coord_range_unbounded_above() {
        let a = Matrix::from_int_rows(&[vec![1, -1]]).unwrap();
        let lp = StandardLp::new(a, Vector::from_ints(&[1]), Vector::zeros(2)).unwrap();
        assert_eq!(
            coord_range(&lp, &[]).unwrap(),
            CoordRange::Range {
                min: Rational::one(),
                max: None
            }
        );
    }

    #[test]
    fn forward_substitution_agreement() {
        for delta in 1..=4i64 {
            for d in [2usize, 4, 6] {
                let b = powers(delta, d);
                let lp = StandardLp::new(ilp1(delta, d), b.clone(), Vector::zeros(d)).unwrap();
                let mut expect = Vector::zeros(d);
                for i in 0..d {
                    let prev = if i == 0 {
                        Rational::zero()
                    } else {
                        &expect[i - 1] * Rational::from(delta)
                    };
                    expect[i] = &b[i] - prev;
                }
                assert_eq!(lp_solve(&lp).unwrap().solution.unwrap(), expect);
            }
        }
    }
}
