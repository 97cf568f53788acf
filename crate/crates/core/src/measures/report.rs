use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::cook::{cook_bounds, CookBounds};
use super::{dist_point_set, dist_set_set, Norm};
use crate::error::{Error, Result};
use crate::exactla::{Rational, SubdetOptions, Vector};
use crate::ilp::{enumerate_integral_optima, IlpOptions, IntegralSolutionSet};
use crate::instances::{
    fractional_certificate, p_q_constants, Family, IlpInstance, BLOCK, MATCHINGS,
};
use crate::lp::{is_feasible_point, lp_solve, LpStatus, StandardLp};

pub const CSV_HEADER: [&str; 10] = [
    "family",
    "delta",
    "d",
    "norm",
    "measured",
    "reference_lower",
    "cook_upper",
    "hadamard_upper",
    "runtime_ms",
    "status",
];

#[derive(Clone, Debug)]
pub struct MeasureOptions {
    pub ilp: IlpOptions,
    pub subdet: SubdetOptions,
    /// Use the Hadamard bound when subdeterminant enumeration is over budget.
    pub hadamard_fallback: bool,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            ilp: IlpOptions::default(),
            subdet: SubdetOptions::default(),
            hadamard_fallback: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Sensitivity,
    Proximity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub kind: MeasureKind,
    pub family: Family,
    pub delta: u64,
    pub d: usize,
    pub norm: Norm,
    /// Value in `norm`.
    pub measured: Rational,
    pub measured_l1: Rational,
    pub measured_linf: Rational,
    /// Pair realizing `measured`: a source point and its nearest target.
    pub witness: (Vector, Vector),
    pub reference_lower: Option<Rational>,
    /// Cook bound in `norm`; ℓ₁ values carry an extra factor `n`.
    pub cook_upper: Rational,
    /// The same bound with the Hadamard closed form in place of subDet.
    pub hadamard_upper: Rational,
    pub cook: CookBounds,
    pub solution_counts: Vec<usize>,
    pub runtime_ms: u64,
    pub notes: Vec<String>,
}

impl MeasureReport {
    pub fn within_bounds(&self) -> bool {
        let above = self
            .reference_lower
            .as_ref()
            .is_none_or(|r| &self.measured >= r);
        let below = self.measured <= self.cook_upper;
        above && below
    }

    pub fn csv_row(&self, status: &str) -> Vec<String> {
        vec![
            self.family.to_string(),
            self.delta.to_string(),
            self.d.to_string(),
            self.norm.to_string(),
            self.measured.to_string(),
            self.reference_lower
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_default(),
            self.cook_upper.to_string(),
            self.hadamard_upper.to_string(),
            self.runtime_ms.to_string(),
            status.to_string(),
        ]
    }
}

/// The explicit lower-bound value for a family and norm.
pub fn reference_lower(
    family: Family,
    kind: MeasureKind,
    delta: u64,
    d: usize,
    norm: Norm,
) -> Result<Option<Rational>> {
    let top = || Rational::from(delta).pow(d.saturating_sub(1) as u32);
    Ok(match (family, kind) {
        (Family::Sensitivity | Family::BinpackSens, MeasureKind::Sensitivity) => Some(top()),
        (Family::Proximity | Family::BinpackProx, MeasureKind::Proximity) => match norm {
            Norm::L1 => {
                let (p, _) = p_q_constants(delta, d)?;
                Some(Rational::from(13 * delta) * Rational::from(p))
            }
            Norm::Linf => Some(top()),
        },
        _ => None,
    })
}

fn optima(lp: &StandardLp, opts: &IlpOptions) -> Result<IntegralSolutionSet> {
    let set = enumerate_integral_optima(lp, None, opts)?;
    if set.is_empty() {
        return Err(Error::Empty("integral optimum set"));
    }
    Ok(set)
}

fn norm_scale(norm: Norm, n: usize) -> Rational {
    match norm {
        Norm::L1 => Rational::from(n),
        Norm::Linf => Rational::one(),
    }
}

pub fn measure_sensitivity(
    inst: &IlpInstance,
    norm: Norm,
    opts: &MeasureOptions,
) -> Result<MeasureReport> {
    let start = Instant::now();
    let b2 = inst.alt_rhs.clone().ok_or_else(|| {
        Error::InvalidParameter("sensitivity needs a second right-hand side".into())
    })?;
    let here = optima(&inst.lp, &opts.ilp)?;
    let there = optima(&inst.lp.with_rhs(b2)?, &opts.ilp)?;
    let l1 = dist_set_set(&here.solutions, &there.solutions, Norm::L1)?;
    let linf = dist_set_set(&here.solutions, &there.solutions, Norm::Linf)?;
    let chosen = if norm == Norm::L1 { &l1 } else { &linf };
    let cook = cook_bounds(inst, &opts.subdet, opts.hadamard_fallback)?;
    let scale = norm_scale(norm, inst.lp.cols());
    let sens = cook
        .sens_upper
        .clone()
        .expect("second right-hand side present");
    let hadamard_upper =
        &sens / &cook.prox_upper * Rational::from(inst.lp.cols()) * &cook.hadamard * &scale;
    let mut notes = inst.notes.clone();
    if cook.subdet_is_hadamard {
        notes.push(
            "subdeterminant enumeration over budget; cook_upper uses the Hadamard bound".into(),
        );
    }
    Ok(MeasureReport {
        kind: MeasureKind::Sensitivity,
        family: inst.family,
        delta: inst.delta,
        d: inst.d,
        norm,
        measured: chosen.value.clone(),
        measured_l1: l1.value.clone(),
        measured_linf: linf.value.clone(),
        witness: (chosen.from.clone(), chosen.to.clone()),
        reference_lower: reference_lower(
            inst.family,
            MeasureKind::Sensitivity,
            inst.delta,
            inst.d,
            norm,
        )?,
        cook_upper: sens * &scale,
        hadamard_upper,
        cook,
        solution_counts: vec![here.len(), there.len()],
        runtime_ms: start.elapsed().as_millis() as u64,
        notes,
    })
}

/// The half-matching certificate of the proximity family, placed on the
/// distinguished columns for the bin-packing embedding.
pub fn proximity_certificate(inst: &IlpInstance) -> Result<Vector> {
    match inst.family {
        Family::Proximity => fractional_certificate(inst.delta, inst.d),
        Family::BinpackProx => {
            let data = inst.binpack.as_ref().ok_or_else(|| {
                Error::Certificate("bin packing instance without metadata".into())
            })?;
            data.embed(&fractional_certificate(inst.delta, inst.d)?, inst.lp.cols())
        }
        f => Err(Error::Certificate(format!(
            "no built-in certificate for family {f}"
        ))),
    }
}

/// Distance from a certified optimal fractional point `z` to the integral
/// optima: a lower bound on proximity.
pub fn measure_proximity_lb(
    inst: &IlpInstance,
    z: &Vector,
    norm: Norm,
    opts: &MeasureOptions,
) -> Result<MeasureReport> {
    let start = Instant::now();
    if !is_feasible_point(&inst.lp, z)? {
        return Err(Error::Certificate("z violates A·z = b or z ≥ 0".into()));
    }
    let relaxed = lp_solve(&inst.lp)?;
    if relaxed.status != LpStatus::Optimal {
        return Err(Error::Certificate(format!(
            "LP relaxation is {:?}",
            relaxed.status
        )));
    }
    let best = relaxed
        .objective
        .expect("optimal result carries an objective");
    let cz = inst.lp.c.dot(z)?;
    if cz != best {
        return Err(Error::Certificate(format!(
            "c·z = {cz} but the LP optimum is {best}"
        )));
    }
    let set = optima(&inst.lp, &opts.ilp)?;
    let l1 = dist_point_set(z, &set.solutions, Norm::L1)?;
    let linf = dist_point_set(z, &set.solutions, Norm::Linf)?;
    let chosen = if norm == Norm::L1 { &l1 } else { &linf };
    let cook = cook_bounds(inst, &opts.subdet, opts.hadamard_fallback)?;
    let n = inst.lp.cols();
    let scale = norm_scale(norm, n);
    let mut notes = inst.notes.clone();
    if cook.subdet_is_hadamard {
        notes.push(
            "subdeterminant enumeration over budget; cook_upper uses the Hadamard bound".into(),
        );
    }
    if matches!(inst.family, Family::Proximity | Family::BinpackProx) {
        let (p, q) = p_q_constants(inst.delta, inst.d)?;
        let dp = &p * num_bigint::BigInt::from(inst.delta);
        if q != dp {
            notes.push(format!("p = {p}, q = {q}; q differs from delta·p = {dp}"));
        }
    }
    Ok(MeasureReport {
        kind: MeasureKind::Proximity,
        family: inst.family,
        delta: inst.delta,
        d: inst.d,
        norm,
        measured: chosen.value.clone(),
        measured_l1: l1.value.clone(),
        measured_linf: linf.value.clone(),
        witness: (z.clone(), chosen.witness.clone()),
        reference_lower: reference_lower(
            inst.family,
            MeasureKind::Proximity,
            inst.delta,
            inst.d,
            norm,
        )?,
        cook_upper: &cook.prox_upper * &scale,
        hadamard_upper: Rational::from(n) * &cook.hadamard * &scale,
        cook,
        solution_counts: vec![set.len()],
        runtime_ms: start.elapsed().as_millis() as u64,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim3Check {
    pub y_l1: Rational,
    pub x_l1: Rational,
    /// `‖y‖₁ + (15 − ‖y‖₁)·Δ·p + ‖y‖₁·p`.
    pub bound: Rational,
    pub holds: bool,
}

/// Evaluates the ℓ₁ lower bound on a feasible point of the proximity family.
pub fn claim3_evaluate(inst: &IlpInstance, x: &Vector) -> Result<Claim3Check> {
    if inst.family != Family::Proximity {
        return Err(Error::InvalidParameter(format!(
            "norm bound applies to the proximity family, not {}",
            inst.family
        )));
    }
    if inst.lp.rows() != BLOCK * inst.d || inst.lp.cols() != MATCHINGS + BLOCK * inst.d {
        return Err(Error::Dimension(
            "instance is not of proximity shape".into(),
        ));
    }
    if !is_feasible_point(&inst.lp, x)? {
        return Err(Error::InvalidParameter("point is not feasible".into()));
    }
    let (p, _) = p_q_constants(inst.delta, inst.d)?;
    let p = Rational::from(p);
    let y_l1: Rational = x[..MATCHINGS].iter().sum();
    let x_l1 = x.norm_l1();
    let dp = Rational::from(inst.delta) * &p;
    let bound = &y_l1 + (Rational::from(BLOCK) - &y_l1) * dp + &y_l1 * &p;
    Ok(Claim3Check {
        holds: x_l1 >= bound,
        y_l1,
        x_l1,
        bound,
    })
}

/// The bound value, or a falsification carrying the witness.
pub fn claim3_norm_lb(inst: &IlpInstance, x: &Vector) -> Result<Rational> {
    let check = claim3_evaluate(inst, x)?;
    if !check.holds {
        return Err(Error::ClaimFalsified(format!(
            "‖x‖₁ = {} < {} (‖y‖₁ = {}) for x = {:?}",
            check.x_l1, check.bound, check.y_l1, x
        )));
    }
    Ok(check.bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{complete_from_matchings, gen_proximity, gen_sensitivity};

    #[test]
    fn sensitivity_values() {
        let opts = MeasureOptions::default();
        let inst = gen_sensitivity(2, 4).unwrap();
        let r = measure_sensitivity(&inst, Norm::Linf, &opts).unwrap();
        assert_eq!(r.measured, Rational::from(8));
        assert_eq!(r.cook_upper, Rational::from(96));
        assert_eq!(r.reference_lower, Some(Rational::from(8)));
        assert_eq!(r.solution_counts, vec![1, 1]);
        assert!(r.within_bounds());
        let r = measure_sensitivity(&gen_sensitivity(1, 2).unwrap(), Norm::Linf, &opts).unwrap();
        assert_eq!(r.measured, Rational::one());
        let r = measure_sensitivity(&gen_sensitivity(3, 4).unwrap(), Norm::L1, &opts).unwrap();
        assert_eq!(r.measured, Rational::from(40));
        assert_eq!(r.cook_upper, Rational::from(3 * 4 * 27 * 4));
    }

    #[test]
    fn sensitivity_equal_rhs_is_zero() {
        let mut inst = gen_sensitivity(2, 2).unwrap();
        inst.alt_rhs = Some(inst.lp.b.clone());
        let r = measure_sensitivity(&inst, Norm::L1, &MeasureOptions::default()).unwrap();
        assert!(r.measured.is_zero());
        inst.alt_rhs = None;
        assert!(measure_sensitivity(&inst, Norm::L1, &MeasureOptions::default()).is_err());
    }

    #[test]
    fn proximity_single_block() {
        let inst = gen_proximity(2, 1).unwrap();
        let z = proximity_certificate(&inst).unwrap();
        let r = measure_proximity_lb(&inst, &z, Norm::Linf, &MeasureOptions::default()).unwrap();
        assert_eq!(r.solution_counts, vec![7]);
        assert_eq!(r.measured, Rational::one());
        assert_eq!(r.reference_lower, Some(Rational::one()));
        assert!(r.cook.subdet_is_hadamard);
    }

    #[test]
    fn rejects_uncertified_z() {
        let inst = gen_proximity(2, 1).unwrap();
        let mut z = proximity_certificate(&inst).unwrap();
        z[0] = Rational::zero();
        let err =
            measure_proximity_lb(&inst, &z, Norm::L1, &MeasureOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Certificate(_)));
        assert!(proximity_certificate(&gen_sensitivity(2, 2).unwrap()).is_err());
    }

    #[test]
    fn claim3_small() {
        let inst = gen_proximity(2, 1).unwrap();
        let x = complete_from_matchings(2, 1, &vec![Rational::zero(); 6]).unwrap();
        assert_eq!(claim3_norm_lb(&inst, &x).unwrap(), Rational::zero());
        let inst = gen_proximity(2, 3).unwrap();
        let x = complete_from_matchings(2, 3, &vec![Rational::zero(); 6]).unwrap();
        let c = claim3_evaluate(&inst, &x).unwrap();
        assert_eq!(
            (c.x_l1.clone(), c.bound.clone()),
            (Rational::from(75), Rational::from(60))
        );
        let mut y = vec![Rational::zero(); 6];
        y[0] = Rational::one();
        let x = complete_from_matchings(2, 3, &y).unwrap();
        let c = claim3_evaluate(&inst, &x).unwrap();
        assert_eq!(c.bound, Rational::from(1 + 14 * 4 + 2));
        assert!(c.holds);
    }

    #[test]
    fn csv_row_shape() {
        let r = measure_sensitivity(
            &gen_sensitivity(2, 2).unwrap(),
            Norm::Linf,
            &MeasureOptions::default(),
        )
        .unwrap();
        let row = r.csv_row("ok");
        assert_eq!(row.len(), CSV_HEADER.len());
        assert_eq!(row[0], "sensitivity");
        assert_eq!(row[4], "2");
        assert_eq!(row[9], "ok");
    }
}
