use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cook::check_cook_instance;
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational, Vector};
use crate::ilp::IlpOptions;
use crate::lp::StandardLp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzLimits {
    pub max_rows: usize,
    pub max_cols: usize,
    pub max_entry: i64,
    /// Largest coordinate of the hidden solutions defining `b` and `b′`.
    pub max_solution: i64,
    /// Objective coefficients are drawn from `-max_cost..=max_cost`.
    pub max_cost: i64,
}

impl Default for FuzzLimits {
    fn default() -> Self {
        FuzzLimits {
            max_rows: 3,
            max_cols: 5,
            max_entry: 3,
            max_solution: 3,
            max_cost: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzViolation {
    pub trial: usize,
    pub a: Matrix,
    pub b: Vector,
    pub b_prime: Vector,
    pub c: Vector,
    pub proximity: Rational,
    pub prox_upper: Rational,
    pub sensitivity: Rational,
    pub sens_upper: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub trials: usize,
    pub checked: usize,
    pub violations: Vec<FuzzViolation>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, max_entry: i64) -> Matrix {
    let mut columns = Vec::with_capacity(cols);
    while columns.len() < cols {
        let col: Vec<i64> = (0..rows).map(|_| rng.gen_range(0..=max_entry)).collect();
        if col.iter().any(|&v| v > 0) {
            columns.push(Vector::from_ints(&col));
        }
    }
    Matrix::from_columns(&columns).expect("equal column lengths")
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vector {
    (0..n)
        .map(|_| Rational::from(rng.gen_range(lo..=hi)))
        .collect()
}

/// Random non-negative systems with `b = A·x*` for a hidden `x* ≥ 0`, checked
/// against the ℓ∞ proximity and sensitivity bounds.
pub fn fuzz_cook(seed: u64, trials: usize, limits: &FuzzLimits) -> Result<FuzzSummary> {
    if limits.max_rows == 0
        || limits.max_cols == 0
        || limits.max_entry < 1
        || limits.max_solution < 0
        || limits.max_cost < 0
    {
        return Err(Error::InvalidParameter(format!("fuzz limits {limits:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = IlpOptions::default();
    let mut summary = FuzzSummary {
        seed,
        trials,
        checked: 0,
        violations: vec![],
    };
    for trial in 0..trials {
        let rows = rng.gen_range(1..=limits.max_rows);
        let cols = rng.gen_range(1..=limits.max_cols);
        let a = random_matrix(&mut rng, rows, cols, limits.max_entry);
        let x = random_vector(&mut rng, cols, 0, limits.max_solution);
        let x2 = random_vector(&mut rng, cols, 0, limits.max_solution);
        let c = random_vector(&mut rng, cols, -limits.max_cost, limits.max_cost);
        let b = a.mul_vec(&x)?;
        let b_prime = a.mul_vec(&x2)?;
        let lp = StandardLp::new(a, b, c)?;
        let Some(check) = check_cook_instance(&lp, &b_prime, &opts)? else {
            continue;
        };
        summary.checked += 1;
        if !check.holds() {
            log::warn!("fuzz trial {trial} violates a bound");
            summary.violations.push(FuzzViolation {
                trial,
                a: lp.a,
                b: lp.b,
                b_prime,
                c: lp.c,
                proximity: check.proximity,
                prox_upper: check.prox_upper,
                sensitivity: check.sensitivity,
                sens_upper: check.sens_upper,
            });
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_clean() {
        let a = fuzz_cook(7, 20, &FuzzLimits::default()).unwrap();
        let b = fuzz_cook(7, 20, &FuzzLimits::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert_eq!(a.checked, 20);
    }

    #[test]
    fn bad_limits() {
        let limits = FuzzLimits {
            max_rows: 0,
            ..FuzzLimits::default()
        };
        assert!(fuzz_cook(1, 1, &limits).is_err());
    }
}
