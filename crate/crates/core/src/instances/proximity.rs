use num_bigint::BigInt;

use super::{Family, IlpInstance};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational, Vector};
use crate::lp::StandardLp;
use crate::petersen::build_matching_system;

/// Rows per block: one per Petersen edge.
pub const BLOCK: usize = 15;
/// Number of matching columns.
pub const MATCHINGS: usize = 6;

fn check_params(delta: u64, d: usize) -> Result<()> {
    if delta < 2 {
        return Err(Error::InvalidParameter(
            "proximity family needs delta >= 2".into(),
        ));
    }
    if d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "proximity family needs an odd d >= 1, got {d}"
        )));
    }
    Ok(())
}

/// Block staircase `15d × (6+15d)`: `[M | I | 0 …]`, then `[0 | … Δ·I | I …]`,
/// with right-hand-side block `j` equal to `Δ^{j−1}`.
pub fn gen_proximity(delta: u64, d: usize) -> Result<IlpInstance> {
    check_params(delta, d)?;
    let system = build_matching_system()?;
    let rows = BLOCK * d;
    let cols = MATCHINGS + BLOCK * d;
    let mut a = Matrix::zeros(rows, cols);
    for e in 0..BLOCK {
        for m in 0..MATCHINGS {
            a[(e, m)] = system.incidence[(e, m)].clone();
        }
    }
    for j in 0..d {
        for e in 0..BLOCK {
            let row = BLOCK * j + e;
            a[(row, MATCHINGS + BLOCK * j + e)] = Rational::one();
            if j > 0 {
                a[(row, MATCHINGS + BLOCK * (j - 1) + e)] = Rational::from(delta);
            }
        }
    }
    let b: Vector = (0..rows)
        .map(|r| Rational::from(delta).pow((r / BLOCK) as u32))
        .collect();
    Ok(IlpInstance {
        lp: StandardLp::new(a, b, Vector::zeros(cols))?,
        alt_rhs: None,
        family: Family::Proximity,
        delta,
        d,
        notes: vec![],
        binpack: None,
    })
}

/// Completes a choice of matching-column values `y` to the unique solution of
/// the block system: `w_1 = 1 − M·y`, `w_j = Δ^{j−1} − Δ·w_{j−1}`.
pub fn complete_from_matchings(delta: u64, d: usize, y: &[Rational]) -> Result<Vector> {
    check_params(delta, d)?;
    if y.len() != MATCHINGS {
        return Err(Error::Dimension(format!(
            "{} matching values, expected 6",
            y.len()
        )));
    }
    let system = build_matching_system()?;
    let covered = system.incidence.mul_vec(&Vector(y.to_vec()))?;
    let dl = Rational::from(delta);
    let mut x: Vec<Rational> = y.to_vec();
    let mut prev: Vec<Rational> = covered.iter().map(|a| Rational::one() - a).collect();
    x.extend(prev.iter().cloned());
    for j in 1..d {
        let level = dl.pow(j as u32);
        prev = prev.iter().map(|w| &level - &dl * w).collect();
        x.extend(prev.iter().cloned());
    }
    Ok(Vector(x))
}

/// Half of every matching column, tail by forward substitution.
pub fn fractional_certificate(delta: u64, d: usize) -> Result<Vector> {
    complete_from_matchings(delta, d, &vec![Rational::new(1, 2); MATCHINGS])
}

/// `p = Σ_{i=1}^{(d−1)/2} Δ^{2i−1}` and `q = Σ_{i=1}^{(d+1)/2} Δ^{2i−2}`,
/// each summed literally.
pub fn p_q_constants(delta: u64, d: usize) -> Result<(BigInt, BigInt)> {
    if d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "p and q need an odd d, got {d}"
        )));
    }
    let dl = BigInt::from(delta);
    let p = (1..=(d - 1) / 2).map(|i| dl.pow(2 * i as u32 - 1)).sum();
    let q = (1..=d.div_ceil(2)).map(|i| dl.pow(2 * i as u32 - 2)).sum();
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::is_feasible_point;

    #[test]
    fn dimensions() {
        let inst = gen_proximity(2, 3).unwrap();
        assert_eq!((inst.lp.rows(), inst.lp.cols()), (45, 51));
        let b: Vec<i64> = [1i64, 2, 4]
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, 15))
            .collect();
        assert_eq!(inst.lp.b, Vector::from_ints(&b));
        let one = gen_proximity(2, 1).unwrap();
        assert_eq!((one.lp.rows(), one.lp.cols()), (15, 21));
        assert_eq!(one.lp.b, Vector(vec![Rational::one(); 15]));
        for (delta, d) in [(2, 1), (2, 5), (3, 3), (5, 7)] {
            let inst = gen_proximity(delta, d).unwrap();
            assert_eq!(inst.lp.cols() - inst.lp.rows(), 6);
        }
    }

    #[test]
    fn entries_and_norm() {
        for (delta, d) in [(2, 3), (3, 5)] {
            let inst = gen_proximity(delta, d).unwrap();
            let allowed = [Rational::zero(), Rational::one(), Rational::from(delta)];
            assert!(inst.lp.a.entries().all(|v| allowed.contains(v)));
            assert_eq!(inst.lp.a.max_abs(), Rational::from(delta));
        }
    }

    #[test]
    fn certificate_values() {
        let z = fractional_certificate(2, 3).unwrap();
        let mut want = vec![Rational::new(1, 2); 6];
        want.extend(std::iter::repeat_n(Rational::zero(), 15));
        want.extend(std::iter::repeat_n(Rational::from(2), 15));
        want.extend(std::iter::repeat_n(Rational::zero(), 15));
        assert_eq!(z, Vector(want));
        let z1 = fractional_certificate(2, 1).unwrap();
        assert_eq!(&z1[6..], &vec![Rational::zero(); 15][..]);
        for (delta, d) in [(2, 1), (2, 3), (3, 3), (2, 5), (4, 7)] {
            let inst = gen_proximity(delta, d).unwrap();
            let z = fractional_certificate(delta, d).unwrap();
            assert!(is_feasible_point(&inst.lp, &z).unwrap());
        }
    }

    #[test]
    fn p_q_values() {
        let (p, q) = p_q_constants(2, 3).unwrap();
        assert_eq!((p, q), (BigInt::from(2), BigInt::from(5)));
        assert_eq!(p_q_constants(2, 5).unwrap().0, BigInt::from(10));
        assert_eq!(p_q_constants(7, 1).unwrap().0, BigInt::from(0));
        for delta in 2..6u64 {
            for d in [1usize, 3, 5, 7] {
                let (p, q) = p_q_constants(delta, d).unwrap();
                let top = BigInt::from(delta).pow(d as u32 - 1);
                assert_eq!(p, BigInt::from(delta) * (q - top));
            }
        }
        assert!(p_q_constants(2, 4).is_err());
    }

    #[test]
    fn bad_parameters() {
        assert!(gen_proximity(1, 3).is_err());
        assert!(gen_proximity(2, 2).is_err());
    }
}
