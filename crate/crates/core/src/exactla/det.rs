use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::common_denominator;
use super::{Matrix, Rational};
use crate::error::{Error, Result};

/// Default refusal threshold for subdeterminant enumeration.
pub const DEFAULT_SUBDET_BUDGET: u64 = 10_000_000;

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Rows are first scaled to integers by the lcm of their denominators, so the
/// elimination itself only ever performs exact integer divisions.
pub fn det(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = common_denominator(row);
            let ints = row
                .iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect::<Vec<_>>();
            scale *= l;
            ints
        })
        .collect();
    Ok(Rational::new(bareiss(rows), scale))
}

/// Determinant of a square integer matrix; consumes the working copy.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[derive(Clone, Debug)]
pub struct SubdetOptions {
    /// Refuse when the number of square submatrices exceeds this.
    pub budget: u64,
    /// Enumerate anyway (with a logged warning) when over budget.
    pub force: bool,
}

impl Default for SubdetOptions {
    fn default() -> Self {
        SubdetOptions {
            budget: DEFAULT_SUBDET_BUDGET,
            force: false,
        }
    }
}

/// Maximum absolute determinant over square submatrices of every size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdetResult {
    pub value: Rational,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub evaluated: u64,
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Σ_k C(rows,k)·C(cols,k): how many square submatrices exist.
pub fn square_submatrix_count(rows: usize, cols: usize) -> BigUint {
    (1..=rows.min(cols))
        .map(|k| binomial(rows, k) * binomial(cols, k))
        .sum()
}

pub fn max_subdet_all(m: &Matrix, opts: &SubdetOptions) -> Result<SubdetResult> {
    max_subdet_sizes(m, 1..=m.rows().min(m.cols()), opts)
}

/// Maximum absolute determinant over the `k×k` submatrices only.
pub fn max_subdet_of_size(m: &Matrix, k: usize, opts: &SubdetOptions) -> Result<SubdetResult> {
    if k == 0 || k > m.rows().min(m.cols()) {
        return Err(Error::Dimension(format!(
            "no {k}x{k} submatrix in a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    max_subdet_sizes(m, k..=k, opts)
}

fn max_subdet_sizes(
    m: &Matrix,
    sizes: std::ops::RangeInclusive<usize>,
    opts: &SubdetOptions,
) -> Result<SubdetResult> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::Empty("matrix for subdeterminant enumeration"));
    }
    let count: BigUint = sizes
        .clone()
        .map(|k| binomial(m.rows(), k) * binomial(m.cols(), k))
        .sum();
    if count > BigUint::from(opts.budget) {
        if !opts.force {
            return Err(Error::Budget {
                what: "subdeterminant enumeration",
                needed: count.to_string(),
                limit: opts.budget.to_string(),
            });
        }
        log::warn!(
            "enumerating {count} square submatrices (budget {})",
            opts.budget
        );
    }

    // One shared integer scaling: det(S) = det(S scaled) / Π chosen row scales.
    let row_scale: Vec<BigInt> = (0..m.rows())
        .map(|i| common_denominator(m.row(i)))
        .collect();
    let ints: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|v| v.numer() * (&row_scale[i] / v.denom()))
                .collect()
        })
        .collect();

    let mut best = SubdetResult {
        value: Rational::zero(),
        rows: vec![],
        cols: vec![],
        evaluated: 0,
    };
    for k in sizes {
        for rows in (0..m.rows()).combinations(k) {
            let scale: BigInt = rows.iter().map(|&i| row_scale[i].clone()).product();
            for cols in (0..m.cols()).combinations(k) {
                best.evaluated += 1;
                let sub = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| ints[i][j].clone()).collect())
                    .collect();
                let d = Rational::new(bareiss(sub), scale.clone()).abs();
                if d > best.value {
                    best.value = d;
                    best.rows = rows.clone();
                    best.cols = cols;
                }
            }
        }
    }
    Ok(best)
}

/// Hadamard-type upper bounds on determinants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardBound {
    /// Rational upper bound on Π‖column‖₂; only for square input.
    pub column_norm_product: Option<Rational>,
    /// Δ^d · d^{d/2} with Δ the largest absolute entry; the root is rounded up.
    pub closed_form: Rational,
}

/// Smallest rational of the form `s/q` (with `q` the denominator of `x`)
/// that is at least √x, for non-negative `x`.
fn sqrt_upper(x: &Rational) -> Rational {
    let q = x.denom().clone();
    let s = Rational::ceil_sqrt_int(&(x.numer() * &q));
    Rational::new(s, q)
}

pub fn hadamard_bound(m: &Matrix, d: usize) -> Result<HadamardBound> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "hadamard bound needs d >= 1".into(),
        ));
    }
    let column_norm_product = m.is_square().then(|| {
        let squared: Rational = (0..m.cols())
            .map(|j| (0..m.rows()).map(|i| m[(i, j)].pow(2)).sum::<Rational>())
            .product();
        sqrt_upper(&squared)
    });
    let delta = m.max_abs();
    let dd = BigInt::from(d).pow(d as u32);
    let closed_form = delta.pow(d as u32) * Rational::from(Rational::ceil_sqrt_int(&dd));
    Ok(HadamardBound {
        column_norm_product,
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    fn ilp1(delta: i64, d: usize) -> Matrix {
        let mut m = Matrix::identity(d);
        for i in 1..d {
            m[(i, i - 1)] = Rational::from(delta);
        }
        m
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Matrix::identity(3)).unwrap(), Rational::one());
        assert_eq!(det(&ilp1(3, 4)).unwrap(), Rational::one());
        let m = Matrix::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(
            det(&m).unwrap(),
            Rational::from(cofactor_det(&[vec![2, 1], vec![1, 2]]))
        );
        assert_eq!(det(&m).unwrap(), Rational::from(3));
        assert!(det(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn det_rational_and_pivoting() {
        let m = Matrix::from_rows(vec![
            vec![Rational::zero(), Rational::new(1, 2)],
            vec![Rational::new(2, 3), Rational::from(5)],
        ])
        .unwrap();
        assert_eq!(det(&m).unwrap(), Rational::new(-1, 3));
        let singular = Matrix::from_int_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(det(&singular).unwrap().is_zero());
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let rows = vec![
            vec![3, -1, 4, 1],
            vec![5, 9, -2, 6],
            vec![5, 3, 5, -8],
            vec![9, 7, 9, 3],
        ];
        let m = Matrix::from_int_rows(&rows).unwrap();
        assert_eq!(det(&m).unwrap(), Rational::from(cofactor_det(&rows)));
    }

    #[test]
    fn subdet_examples() {
        let opts = SubdetOptions::default();
        assert_eq!(
            max_subdet_all(&Matrix::identity(4), &opts).unwrap().value,
            Rational::one()
        );
        let r = max_subdet_all(&ilp1(2, 4), &opts).unwrap();
        assert_eq!(r.value, Rational::from(8));
        assert_eq!(r.rows, vec![1, 2, 3]);
        assert_eq!(r.cols, vec![0, 1, 2]);
        let m = Matrix::from_int_rows(&[vec![1, 0], vec![5, 1]]).unwrap();
        let r = max_subdet_all(&m, &opts).unwrap();
        assert_eq!(r.value, Rational::from(5));
        assert_eq!(r.evaluated, 5);
    }

    #[test]
    fn subdet_budget_refusal() {
        let opts = SubdetOptions {
            budget: 4,
            force: false,
        };
        let m = Matrix::identity(2);
        assert!(max_subdet_all(&m, &opts).unwrap_err().is_budget());
        let forced = SubdetOptions {
            budget: 4,
            force: true,
        };
        assert_eq!(max_subdet_all(&m, &forced).unwrap().value, Rational::one());
        assert!(max_subdet_all(&Matrix::zeros(0, 0), &opts).is_err());
    }

    #[test]
    fn fixed_size_maximum() {
        let opts = SubdetOptions::default();
        let full = max_subdet_of_size(&ilp1(2, 4), 4, &opts).unwrap();
        assert_eq!(full.value, Rational::one());
        assert_eq!(full.evaluated, 1);
        assert_eq!(
            max_subdet_of_size(&ilp1(2, 4), 3, &opts).unwrap().value,
            Rational::from(8)
        );
        assert!(max_subdet_of_size(&ilp1(2, 4), 5, &opts).is_err());
    }

    #[test]
    fn submatrix_counts() {
        assert_eq!(square_submatrix_count(2, 2), BigUint::from(5u32));
        // Σ C(6,k)^2 = C(12,6) - 1
        assert_eq!(square_submatrix_count(6, 6), BigUint::from(923u32));
    }

    #[test]
    fn hadamard_examples() {
        let h = hadamard_bound(&Matrix::identity(2), 2).unwrap();
        assert_eq!(h.column_norm_product, Some(Rational::one()));
        let two = Matrix::from_int_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            hadamard_bound(&two, 2).unwrap().closed_form,
            Rational::from(8)
        );
        let three = Matrix::from_int_rows(&[vec![3, 0], vec![1, 1]]).unwrap();
        assert_eq!(
            hadamard_bound(&three, 2).unwrap().closed_form,
            Rational::from(18)
        );
        // d = 3: 3^{3/2} = √27 rounds up to 6
        assert_eq!(
            hadamard_bound(&Matrix::identity(3), 3).unwrap().closed_form,
            Rational::from(6)
        );
        let rect = Matrix::zeros(2, 3);
        assert_eq!(hadamard_bound(&rect, 2).unwrap().column_norm_product, None);
        assert!(hadamard_bound(&rect, 0).is_err());
    }
}
