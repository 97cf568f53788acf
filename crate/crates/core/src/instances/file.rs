use serde::{Deserialize, Serialize};

use super::{BinPackData, Family, IlpInstance};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational, Vector};
use crate::lp::StandardLp;

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk form of an [`IlpInstance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub family: Family,
    pub delta: u64,
    pub d: usize,
    pub matrix: Matrix,
    pub b: Vector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_prime: Option<Vector>,
    pub c: Vector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configurations_complete: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl From<&IlpInstance> for InstanceFile {
    fn from(inst: &IlpInstance) -> Self {
        let bp = inst.binpack.as_ref();
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            family: inst.family,
            delta: inst.delta,
            d: inst.d,
            matrix: inst.lp.a.clone(),
            b: inst.lp.b.clone(),
            b_prime: inst.alt_rhs.clone(),
            c: inst.lp.c.clone(),
            sizes: bp.map(|p| p.sizes.clone()),
            epsilon: bp.map(|p| p.epsilon.clone()),
            c1_indices: bp.map(|p| p.c1_indices.clone()),
            configurations_complete: bp.map(|p| p.configurations_complete),
            notes: inst.notes.clone(),
        }
    }
}

impl TryFrom<InstanceFile> for IlpInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        if f.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                f.schema_version
            )));
        }
        let lp = StandardLp::new(f.matrix, f.b, f.c)?;
        if let Some(b2) = &f.b_prime {
            if b2.len() != lp.rows() {
                return Err(Error::Dimension(format!(
                    "b_prime has {} entries for {} rows",
                    b2.len(),
                    lp.rows()
                )));
            }
        }
        let binpack = match (f.sizes, f.epsilon, f.c1_indices) {
            (Some(sizes), Some(epsilon), Some(c1_indices)) => {
                if let Some(&j) = c1_indices.iter().find(|&&j| j >= lp.cols()) {
                    return Err(Error::Dimension(format!("c1 index {j} out of range")));
                }
                Some(BinPackData {
                    sizes,
                    epsilon,
                    c1_indices,
                    configurations_complete: f.configurations_complete.unwrap_or(false),
                })
            }
            (None, None, None) => None,
            _ => {
                return Err(Error::Parse(
                    "sizes, epsilon and c1_indices must appear together".into(),
                ))
            }
        };
        Ok(IlpInstance {
            lp,
            alt_rhs: f.b_prime,
            family: f.family,
            delta: f.delta,
            d: f.d,
            notes: f.notes,
            binpack,
        })
    }
}

impl InstanceFile {
    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        Ok(serde_json::to_string_pretty(&value)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl IlpInstance {
    pub fn to_json(&self) -> Result<String> {
        InstanceFile::from(self).to_json()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        InstanceFile::from_json(s)?.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        gen_binpack_sensitivity, gen_proximity, gen_sensitivity, BinPackOptions,
    };

    #[test]
    fn round_trip() {
        let insts = [
            gen_sensitivity(2, 4).unwrap(),
            gen_proximity(2, 1).unwrap(),
            gen_binpack_sensitivity(2, 2, &BinPackOptions::default())
                .unwrap()
                .ilp,
        ];
        for inst in insts {
            let text = inst.to_json().unwrap();
            let back = IlpInstance::from_json(&text).unwrap();
            assert_eq!(back, inst);
            assert_eq!(back.to_json().unwrap(), text);
        }
    }

    #[test]
    fn keys_sorted_and_rationals_encoded() {
        let text = gen_sensitivity(1, 2).unwrap().to_json().unwrap();
        let keys: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("  \""))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"b_prime\""));
        let e = gen_binpack_sensitivity(2, 2, &BinPackOptions::default()).unwrap();
        assert!(e.ilp.to_json().unwrap().contains("\"1/20\""));
    }

    #[test]
    fn rejects_bad_documents() {
        let mut f = InstanceFile::from(&gen_sensitivity(1, 2).unwrap());
        f.schema_version = 9;
        assert!(IlpInstance::try_from(f.clone()).is_err());
        f.schema_version = SCHEMA_VERSION;
        f.b_prime = Some(Vector::from_ints(&[1]));
        assert!(IlpInstance::try_from(f.clone()).is_err());
        f.b_prime = None;
        f.epsilon = Some(Rational::one());
        assert!(IlpInstance::try_from(f).is_err());
        assert!(IlpInstance::from_json("{\"schema_version\": 1}").is_err());
    }
}
