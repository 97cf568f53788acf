use super::{Family, IlpInstance};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational, Vector};
use crate::lp::StandardLp;

fn check_params(delta: u64, d: usize) -> Result<()> {
    if delta < 1 {
        return Err(Error::InvalidParameter("delta must be at least 1".into()));
    }
    if d < 2 || d % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "sensitivity family needs an even d >= 2, got {d}"
        )));
    }
    Ok(())
}

/// Unit lower bidiagonal `d×d` matrix with `delta` on the subdiagonal.
pub fn staircase_matrix(delta: u64, d: usize) -> Matrix {
    let mut a = Matrix::identity(d);
    for i in 1..d {
        a[(i, i - 1)] = Rational::from(delta);
    }
    a
}

/// Solves the staircase system row by row: `x_0 = b_0`, `x_i = b_i − Δ·x_{i−1}`.
pub fn forward_substitute(delta: u64, b: &Vector) -> Vector {
    let delta = Rational::from(delta);
    let mut x = Vector::zeros(b.len());
    for i in 0..b.len() {
        x[i] = if i == 0 {
            b[0].clone()
        } else {
            &b[i] - &delta * &x[i - 1]
        };
    }
    x
}

/// `A` staircase, `b = (1, Δ, …, Δ^{d−1})`, `b′ = b` with its first entry
/// zeroed, `c = 0`.
pub fn gen_sensitivity(delta: u64, d: usize) -> Result<IlpInstance> {
    check_params(delta, d)?;
    let b: Vector = (0..d)
        .map(|i| Rational::from(delta).pow(i as u32))
        .collect();
    let mut b_prime = b.clone();
    b_prime[0] = Rational::zero();
    Ok(IlpInstance {
        lp: StandardLp::new(staircase_matrix(delta, d), b, Vector::zeros(d))?,
        alt_rhs: Some(b_prime),
        family: Family::Sensitivity,
        delta,
        d,
        notes: vec![],
        binpack: None,
    })
}

/// The unique solutions for `b` and `b′`, by exact forward substitution.
pub fn expected_sensitivity_pair(delta: u64, d: usize) -> Result<(Vector, Vector)> {
    let inst = gen_sensitivity(delta, d)?;
    let x = forward_substitute(delta, &inst.lp.b);
    let x_prime = forward_substitute(delta, inst.alt_rhs.as_ref().expect("generated"));
    Ok((x, x_prime))
}
