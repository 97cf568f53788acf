use serde::{Deserialize, Serialize};

use super::{dist_point_set, dist_set_set, Norm};
use crate::error::{Error, Result};
use crate::exactla::{hadamard_bound, max_subdet_all, Rational, SubdetOptions, Vector};
use crate::ilp::{enumerate_integral_optima, IlpOptions};
use crate::instances::IlpInstance;
use crate::lp::{lp_solve, LpStatus, StandardLp};

/// Cook-type upper bounds, all in the ℓ∞ norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CookBounds {
    /// Largest absolute subdeterminant over all sizes, when enumerated.
    pub subdet: Option<Rational>,
    /// Closed-form Hadamard bound on any square subdeterminant.
    pub hadamard: Rational,
    /// `n·subDet`, or `n·hadamard` when `subdet_is_hadamard`.
    pub prox_upper: Rational,
    /// `(‖b−b′‖∞+2)·n·subDet`, same substitution rule.
    pub sens_upper: Option<Rational>,
    /// The bounds use the Hadamard value in place of the subdeterminant.
    pub subdet_is_hadamard: bool,
}

pub fn cook_bounds(
    inst: &IlpInstance,
    subdet: &SubdetOptions,
    hadamard_fallback: bool,
) -> Result<CookBounds> {
    let a = &inst.lp.a;
    let k = a.rows().min(a.cols());
    if k == 0 {
        return Err(Error::Empty("constraint matrix"));
    }
    let hadamard = hadamard_bound(a, k)?.closed_form;
    let (sd, is_h) = match max_subdet_all(a, subdet) {
        Ok(r) => (Some(r.value), false),
        Err(e) if e.is_budget() && hadamard_fallback => (None, true),
        Err(e) => return Err(e),
    };
    let factor = sd.clone().unwrap_or_else(|| hadamard.clone());
    let n = Rational::from(inst.lp.cols());
    let prox_upper = &n * &factor;
    let sens_upper = inst
        .alt_rhs
        .as_ref()
        .map(|b2| -> Result<Rational> {
            let gap = inst.lp.b.sub(b2)?.norm_linf();
            Ok((gap + Rational::from(2)) * &prox_upper)
        })
        .transpose()?;
    Ok(CookBounds {
        subdet: sd,
        hadamard,
        prox_upper,
        sens_upper,
        subdet_is_hadamard: is_h,
    })
}

/// Proximity and sensitivity of one small instance next to its bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CookCheck {
    pub lp_vertex: Vector,
    pub proximity: Rational,
    /// Larger of the two directed distances between the optimum sets.
    pub sensitivity: Rational,
    pub prox_upper: Rational,
    pub sens_upper: Rational,
}

impl CookCheck {
    pub fn holds(&self) -> bool {
        self.proximity <= self.prox_upper && self.sensitivity <= self.sens_upper
    }
}

/// Exact ℓ∞ proximity of the LP vertex and sensitivity towards `b_prime`.
/// `Ok(None)` when either integer program is infeasible.
pub fn check_cook_instance(
    lp: &StandardLp,
    b_prime: &Vector,
    opts: &IlpOptions,
) -> Result<Option<CookCheck>> {
    let inst = IlpInstance::custom(lp.clone(), Some(b_prime.clone()))?;
    let bounds = cook_bounds(&inst, &SubdetOptions::default(), false)?;
    let relaxed = lp_solve(lp)?;
    if relaxed.status != LpStatus::Optimal {
        return Ok(None);
    }
    let z = relaxed.solution.expect("optimal result carries a solution");
    let here = enumerate_integral_optima(lp, None, opts)?;
    let there = enumerate_integral_optima(&lp.with_rhs(b_prime.clone())?, None, opts)?;
    if here.is_empty() || there.is_empty() {
        return Ok(None);
    }
    let proximity = dist_point_set(&z, &here.solutions, Norm::Linf)?.value;
    let forward = dist_set_set(&here.solutions, &there.solutions, Norm::Linf)?.value;
    let backward = dist_set_set(&there.solutions, &here.solutions, Norm::Linf)?.value;
    Ok(Some(CookCheck {
        lp_vertex: z,
        proximity,
        sensitivity: forward.max(backward),
        prox_upper: bounds.prox_upper,
        sens_upper: bounds.sens_upper.expect("b_prime given"),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Matrix;
    use crate::instances::gen_sensitivity;

    #[test]
    fn staircase_bounds() {
        let inst = gen_sensitivity(2, 4).unwrap();
        let b = cook_bounds(&inst, &SubdetOptions::default(), false).unwrap();
        assert_eq!(b.subdet, Some(Rational::from(8)));
        assert_eq!(b.prox_upper, Rational::from(32));
        assert_eq!(b.sens_upper, Some(Rational::from(96)));
        assert!(!b.subdet_is_hadamard);
        assert_eq!(b.hadamard, Rational::from(256));
    }

    #[test]
    fn identity_bounds() {
        let lp = StandardLp::new(
            Matrix::identity(2),
            Vector::from_ints(&[1, 1]),
            Vector::zeros(2),
        )
        .unwrap();
        let inst = IlpInstance::custom(lp.clone(), Some(Vector::from_ints(&[1, 1]))).unwrap();
        let b = cook_bounds(&inst, &SubdetOptions::default(), false).unwrap();
        assert_eq!(b.sens_upper, Some(Rational::from(4)));
        let check = check_cook_instance(&lp, &Vector::from_ints(&[1, 1]), &IlpOptions::default())
            .unwrap()
            .unwrap();
        assert!(check.proximity.is_zero());
        assert!(check.sensitivity.is_zero());
        assert!(check.holds());
    }

    #[test]
    fn fallback_to_hadamard() {
        let inst = gen_sensitivity(2, 4).unwrap();
        let tiny = SubdetOptions {
            budget: 3,
            force: false,
        };
        assert!(cook_bounds(&inst, &tiny, false).unwrap_err().is_budget());
        let b = cook_bounds(&inst, &tiny, true).unwrap();
        assert!(b.subdet_is_hadamard);
        assert_eq!(b.prox_upper, Rational::from(4 * 256));
    }

    #[test]
    fn staircase_replay() {
        let inst = gen_sensitivity(2, 2).unwrap();
        let check = check_cook_instance(
            &inst.lp,
            inst.alt_rhs.as_ref().unwrap(),
            &IlpOptions::default(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(check.sensitivity, Rational::from(2));
        assert_eq!(check.sens_upper, Rational::from(12));
        assert!(check.holds());
    }
}
