//! Distances between solution sets, sensitivity and proximity measurement,
//! and the Cook-type upper bounds.

mod cook;
mod fuzz;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Rational, Vector};

pub use cook::{check_cook_instance, cook_bounds, CookBounds, CookCheck};
pub use fuzz::{fuzz_cook, FuzzLimits, FuzzSummary, FuzzViolation};
pub use report::{
    claim3_evaluate, claim3_norm_lb, measure_proximity_lb, measure_sensitivity,
    proximity_certificate, reference_lower, Claim3Check, MeasureKind, MeasureOptions,
    MeasureReport, CSV_HEADER,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    L1,
    Linf,
}

impl Norm {
    pub fn as_str(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::Linf => "linf",
        }
    }

    pub fn of(self, v: &Vector) -> Rational {
        match self {
            Norm::L1 => v.norm_l1(),
            Norm::Linf => v.norm_linf(),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(Norm::L1),
            "linf" => Ok(Norm::Linf),
            _ => Err(Error::Parse(format!("unknown norm {s:?} (use l1 or linf)"))),
        }
    }
}

pub fn distance(x: &Vector, y: &Vector, norm: Norm) -> Result<Rational> {
    Ok(norm.of(&x.sub(y)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDistance {
    pub value: Rational,
    /// First element of the set attaining the minimum.
    pub witness: Vector,
}

pub fn dist_point_set(x: &Vector, set: &[Vector], norm: Norm) -> Result<PointDistance> {
    let mut best: Option<PointDistance> = None;
    for y in set {
        let v = distance(x, y, norm)?;
        if best.as_ref().is_none_or(|b| v < b.value) {
            best = Some(PointDistance {
                value: v,
                witness: y.clone(),
            });
        }
    }
    best.ok_or(Error::Empty("target set of a distance"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDistance {
    pub value: Rational,
    /// The element of the first set realizing the maximum.
    pub from: Vector,
    /// Its nearest element of the second set.
    pub to: Vector,
}

/// `max_{x∈from} min_{y∈to} ‖x−y‖`; not symmetric.
pub fn dist_set_set(from: &[Vector], to: &[Vector], norm: Norm) -> Result<SetDistance> {
    let mut best: Option<SetDistance> = None;
    for x in from {
        let near = dist_point_set(x, to, norm)?;
        if best.as_ref().is_none_or(|b| near.value > b.value) {
            best = Some(SetDistance {
                value: near.value,
                from: x.clone(),
                to: near.witness,
            });
        }
    }
    best.ok_or(Error::Empty("source set of a distance"))
}
