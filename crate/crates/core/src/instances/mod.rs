//! Generators for the staircase (sensitivity) and Petersen block (proximity)
//! families, their bin-packing embeddings and the instance file format.

mod binpack;
mod file;
mod proximity;
mod sensitivity;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Rational, Vector};
use crate::lp::StandardLp;

pub use binpack::{
    enumerate_configurations, gen_binpack_proximity, gen_binpack_sensitivity,
    is_feasible_configuration, load, BinPackEmbedding, BinPackOptions, BinPackingInstance,
    ConfigurationSet, DEFAULT_CONFIG_BUDGET,
};
pub use file::{InstanceFile, SCHEMA_VERSION};
pub use proximity::{
    complete_from_matchings, fractional_certificate, gen_proximity, p_q_constants, BLOCK, MATCHINGS,
};
pub use sensitivity::{
    expected_sensitivity_pair, forward_substitute, gen_sensitivity, staircase_matrix,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sensitivity,
    Proximity,
    BinpackSens,
    BinpackProx,
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Sensitivity => "sensitivity",
            Family::Proximity => "proximity",
            Family::BinpackSens => "binpack_sens",
            Family::BinpackProx => "binpack_prox",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "sensitivity" => Ok(Family::Sensitivity),
            "proximity" => Ok(Family::Proximity),
            "binpack_sens" => Ok(Family::BinpackSens),
            "binpack_prox" => Ok(Family::BinpackProx),
            "custom" => Ok(Family::Custom),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Bin-packing metadata carried by a configuration ILP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinPackData {
    pub sizes: Vector,
    pub epsilon: Rational,
    pub c1_indices: Vec<usize>,
    pub configurations_complete: bool,
}

impl BinPackData {
    /// Places a general-family vector on the distinguished columns.
    pub fn embed(&self, x: &Vector, columns: usize) -> Result<Vector> {
        if x.len() != self.c1_indices.len() {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} distinguished columns",
                x.len(),
                self.c1_indices.len()
            )));
        }
        let mut out = Vector::zeros(columns);
        for (v, &j) in x.iter().zip(&self.c1_indices) {
            out[j] = v.clone();
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpInstance {
    pub lp: StandardLp,
    pub alt_rhs: Option<Vector>,
    pub family: Family,
    pub delta: u64,
    pub d: usize,
    pub notes: Vec<String>,
    pub binpack: Option<BinPackData>,
}

impl IlpInstance {
    /// Wraps a user system; `delta` is the largest absolute entry rounded up.
    pub fn custom(lp: StandardLp, alt_rhs: Option<Vector>) -> Result<Self> {
        lp.validate()?;
        if let Some(b2) = &alt_rhs {
            if b2.len() != lp.rows() {
                return Err(Error::Dimension(format!(
                    "b_prime has {} entries for {} rows",
                    b2.len(),
                    lp.rows()
                )));
            }
        }
        let delta = u64::try_from(lp.a.max_abs().ceil()).unwrap_or(u64::MAX);
        let d = lp.rows();
        Ok(IlpInstance {
            lp,
            alt_rhs,
            family: Family::Custom,
            delta,
            d,
            notes: vec![],
            binpack: None,
        })
    }
}

/// Builds the instance of a named family; bin-packing families yield their
/// configuration ILP.
pub fn generate(
    family: Family,
    delta: u64,
    d: usize,
    opts: &BinPackOptions,
) -> Result<IlpInstance> {
    match family {
        Family::Sensitivity => gen_sensitivity(delta, d),
        Family::Proximity => gen_proximity(delta, d),
        Family::BinpackSens => Ok(gen_binpack_sensitivity(delta, d, opts)?.ilp),
        Family::BinpackProx => Ok(gen_binpack_proximity(delta, d, opts)?.ilp),
        Family::Custom => Err(Error::InvalidParameter(
            "custom instances are read from a file, not generated".into(),
        )),
    }
}
