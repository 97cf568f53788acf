use serde::{Deserialize, Serialize};

use super::proximity::gen_proximity;
use super::sensitivity::gen_sensitivity;
use super::{BinPackData, Family, IlpInstance};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational, Vector};
use crate::lp::StandardLp;

pub const DEFAULT_CONFIG_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinPackingInstance {
    pub sizes: Vector,
    pub multiplicities: Vector,
    pub epsilon: Rational,
}

impl BinPackingInstance {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() != self.multiplicities.len() {
            return Err(Error::Dimension(format!(
                "{} sizes but {} multiplicities",
                self.sizes.len(),
                self.multiplicities.len()
            )));
        }
        check_sizes(&self.sizes)?;
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "sizes are not strictly increasing".into(),
            ));
        }
        if !self.multiplicities.is_integral() || !self.multiplicities.is_nonnegative() {
            return Err(Error::InvalidParameter(
                "multiplicities must be non-negative integers".into(),
            ));
        }
        Ok(())
    }
}

/// Configuration columns of the configuration ILP (the zero configuration is
/// left out) with the positions of the distinguished columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationSet {
    pub configurations: Vec<Vec<u32>>,
    /// `c1_indices[j]` is the position of general-family column `j`.
    pub c1_indices: Vec<usize>,
    /// False when enumeration hit its budget and only a restricted set is kept.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct BinPackEmbedding {
    pub instance: BinPackingInstance,
    pub configurations: ConfigurationSet,
    pub objective: Vector,
    /// The general-family instance the embedding reproduces.
    pub general: IlpInstance,
    /// The configuration ILP.
    pub ilp: IlpInstance,
}

#[derive(Clone, Debug)]
pub struct BinPackOptions {
    pub config_budget: usize,
}

impl Default for BinPackOptions {
    fn default() -> Self {
        BinPackOptions {
            config_budget: DEFAULT_CONFIG_BUDGET,
        }
    }
}

fn check_sizes(sizes: &[Rational]) -> Result<()> {
    if let Some(s) = sizes.iter().find(|s| !s.is_positive() || **s > 1) {
        return Err(Error::InvalidParameter(format!("size {s} outside (0,1]")));
    }
    Ok(())
}

pub fn load(config: &[u32], sizes: &[Rational]) -> Rational {
    config
        .iter()
        .zip(sizes)
        .map(|(&k, s)| Rational::from(k) * s)
        .sum()
}

pub fn is_feasible_configuration(config: &[u32], sizes: &[Rational]) -> bool {
    load(config, sizes) <= 1
}

/// Every `k ≥ 0` with `k·s ≤ 1`, in lexicographic order, zero included.
pub fn enumerate_configurations(sizes: &[Rational], budget: usize) -> Result<Vec<Vec<u32>>> {
    check_sizes(sizes)?;
    let mut out = Vec::new();
    let mut current = vec![0u32; sizes.len()];
    collect_configurations(sizes, 0, Rational::one(), &mut current, &mut out, budget)?;
    Ok(out)
}

fn collect_configurations(
    sizes: &[Rational],
    i: usize,
    room: Rational,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
    budget: usize,
) -> Result<()> {
    if i == sizes.len() {
        if out.len() == budget {
            return Err(Error::Budget {
                what: "configuration enumeration",
                needed: format!("more than {budget}"),
                limit: budget.to_string(),
            });
        }
        out.push(current.clone());
        return Ok(());
    }
    let mut k = 0u32;
    let mut left = room;
    while !left.is_negative() {
        current[i] = k;
        collect_configurations(sizes, i + 1, left.clone(), current, out, budget)?;
        left -= &sizes[i];
        k += 1;
    }
    current[i] = 0;
    Ok(())
}

/// Configurations holding at most two items.
fn small_configurations(sizes: &[Rational]) -> Vec<Vec<u32>> {
    let n = sizes.len();
    let mut out = vec![vec![0u32; n]];
    for r in 0..n {
        for s in r..n {
            let mut k = vec![0u32; n];
            k[r] += 1;
            out.push(k.clone());
            k[s] += 1;
            out.push(k);
        }
    }
    out.retain(|k| is_feasible_configuration(k, sizes));
    out
}

fn general_columns(general: &IlpInstance) -> Result<Vec<Vec<u32>>> {
    general
        .lp
        .a
        .columns()
        .iter()
        .map(|col| {
            col.iter()
                .map(|v| {
                    v.to_i64()
                        .and_then(|n| u32::try_from(n).ok())
                        .ok_or_else(|| {
                            Error::Construction(format!("column entry {v} is not a count"))
                        })
                })
                .collect()
        })
        .collect()
}

fn embed(
    general: IlpInstance,
    sizes: Vector,
    epsilon: Rational,
    opts: &BinPackOptions,
    family: Family,
) -> Result<BinPackEmbedding> {
    let c1 = general_columns(&general)?;
    for (j, k) in c1.iter().enumerate() {
        let l = load(k, &sizes);
        if l > 1 {
            return Err(Error::Construction(format!(
                "distinguished column {j} has load {l} > 1 with epsilon {epsilon}"
            )));
        }
    }
    let (mut configs, complete) = match enumerate_configurations(&sizes, opts.config_budget) {
        Ok(all) => (all, true),
        Err(e) if e.is_budget() => {
            log::info!("configuration enumeration over budget; keeping a restricted set");
            let mut some = small_configurations(&sizes);
            some.extend(c1.iter().cloned());
            some.sort();
            some.dedup();
            (some, false)
        }
        Err(e) => return Err(e),
    };
    configs.retain(|k| k.iter().any(|&v| v > 0));

    let mut c1_indices = Vec::with_capacity(c1.len());
    for (j, k) in c1.iter().enumerate() {
        let pos = configs.binary_search(k).map_err(|_| {
            Error::Construction(format!("distinguished column {j} is not a configuration"))
        })?;
        if c1_indices.contains(&pos) {
            return Err(Error::Construction(format!(
                "distinguished column {j} is repeated"
            )));
        }
        c1_indices.push(pos);
    }
    let objective: Vector = (0..configs.len())
        .map(|i| {
            if c1_indices.contains(&i) {
                Rational::zero()
            } else {
                Rational::one()
            }
        })
        .collect();
    let columns: Vec<Vector> = configs
        .iter()
        .map(|k| k.iter().map(|&v| Rational::from(v)).collect())
        .collect();
    let a = Matrix::from_columns(&columns)?;
    let multiplicities = general.lp.b.clone();
    let data = BinPackData {
        sizes: sizes.clone(),
        epsilon: epsilon.clone(),
        c1_indices: c1_indices.clone(),
        configurations_complete: complete,
    };
    let mut notes = Vec::new();
    if !complete {
        notes.push(format!(
            "configuration set restricted to the distinguished columns and configurations of at most two items ({} columns)",
            configs.len()
        ));
    }
    let ilp = IlpInstance {
        lp: StandardLp::new(a, multiplicities.clone(), objective.clone())?,
        alt_rhs: general.alt_rhs.clone(),
        family,
        delta: general.delta,
        d: general.d,
        notes,
        binpack: Some(data),
    };
    let instance = BinPackingInstance {
        sizes,
        multiplicities,
        epsilon,
    };
    instance.validate()?;
    Ok(BinPackEmbedding {
        instance,
        configurations: ConfigurationSet {
            configurations: configs,
            c1_indices,
            complete,
        },
        objective,
        general,
        ilp,
    })
}

/// `s_i = 1/(2Δ) + i·ε` with `ε = 1/(4(d−1+Δd))`.
pub fn gen_binpack_sensitivity(
    delta: u64,
    d: usize,
    opts: &BinPackOptions,
) -> Result<BinPackEmbedding> {
    let general = gen_sensitivity(delta, d)?;
    let epsilon = Rational::new(1, 4 * (d as u64 - 1 + delta * d as u64));
    let base = Rational::new(1, 2 * delta);
    let sizes: Vector = (1..=d)
        .map(|i| &base + Rational::from(i) * &epsilon)
        .collect();
    embed(general, sizes, epsilon, opts, Family::BinpackSens)
}

/// Largest `ε` keeping every column feasible under `s_r = base + r·ε`.
fn largest_epsilon(columns: &[Vec<u32>], base: &Rational) -> Option<Rational> {
    columns
        .iter()
        .filter_map(|k| {
            let items: u32 = k.iter().sum();
            let weight: u64 = k
                .iter()
                .enumerate()
                .map(|(r, &v)| (r as u64 + 1) * v as u64)
                .sum();
            (weight > 0)
                .then(|| (Rational::one() - Rational::from(items) * base) / Rational::from(weight))
        })
        .min()
}

/// One size per row of the proximity instance: `s_r = 1/(30Δ) + r·ε`, with
/// `ε` the largest value keeping the distinguished columns feasible, capped at
/// `57/(60(d−2+Δ(d−1)))`.
pub fn gen_binpack_proximity(
    delta: u64,
    d: usize,
    opts: &BinPackOptions,
) -> Result<BinPackEmbedding> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "bin packing proximity embedding needs an odd d >= 3, got {d}"
        )));
    }
    let general = gen_proximity(delta, d)?;
    let base = Rational::new(1, 30 * delta);
    let cap = Rational::new(57, 60 * (d as u64 - 2 + delta * (d as u64 - 1)));
    let tight = largest_epsilon(&general_columns(&general)?, &base)
        .ok_or_else(|| Error::Construction("no distinguished columns".into()))?;
    if !tight.is_positive() {
        return Err(Error::Construction(format!(
            "no positive epsilon fits (got {tight})"
        )));
    }
    let epsilon = tight.min(cap);
    let sizes: Vector = (1..=general.lp.rows())
        .map(|r| &base + Rational::from(r) * &epsilon)
        .collect();
    embed(general, sizes, epsilon, opts, Family::BinpackProx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(p, q)| Rational::new(p, q)).collect()
    }

    fn brute(sizes: &[Rational], bound: u32) -> Vec<Vec<u32>> {
        let n = sizes.len();
        let mut out = Vec::new();
        let total = (bound as usize + 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let k: Vec<u32> = (0..n)
                .map(|_| {
                    let v = (c % (bound as usize + 1)) as u32;
                    c /= bound as usize + 1;
                    v
                })
                .collect();
            if is_feasible_configuration(&k, sizes) {
                out.push(k);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumerate_small() {
        let half = sizes(&[(1, 2)]);
        assert_eq!(
            enumerate_configurations(&half, 100).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        let s = sizes(&[(1, 3), (1, 2)]);
        let got = enumerate_configurations(&s, 100).unwrap();
        let want: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![0, 2],
            vec![1, 0],
            vec![1, 1],
            vec![2, 0],
            vec![3, 0],
        ];
        assert_eq!(got, want);
        assert_eq!(got, brute(&s, 3));
    }

    #[test]
    fn enumerate_matches_brute_force() {
        let s = sizes(&[(1, 4), (2, 7), (2, 5)]);
        assert_eq!(enumerate_configurations(&s, 1000).unwrap(), brute(&s, 4));
    }

    #[test]
    fn enumerate_budget_and_bad_sizes() {
        let s = sizes(&[(1, 10), (1, 10)]);
        assert!(enumerate_configurations(&s, 5).unwrap_err().is_budget());
        assert!(enumerate_configurations(&sizes(&[(3, 2)]), 10).is_err());
        assert!(enumerate_configurations(&sizes(&[(0, 1)]), 10).is_err());
    }

    #[test]
    fn sensitivity_sizes() {
        let e = gen_binpack_sensitivity(2, 2, &BinPackOptions::default()).unwrap();
        assert_eq!(e.instance.epsilon, Rational::new(1, 20));
        assert_eq!(e.instance.sizes, Vector(sizes(&[(3, 10), (7, 20)])));
        assert_eq!(load(&[1, 2], &e.instance.sizes), Rational::one());
        assert!(e.configurations.complete);
        assert!(e.configurations.configurations.contains(&vec![1, 2]));
    }

    #[test]
    fn sensitivity_embedding_reproduces_general_matrix() {
        for delta in 2..=4 {
            for d in [2, 4, 6] {
                let e = gen_binpack_sensitivity(delta, d, &BinPackOptions::default()).unwrap();
                let restricted = e.ilp.lp.a.select_columns(&e.configurations.c1_indices);
                assert_eq!(restricted, e.general.lp.a);
                assert!(e.configurations.complete);
                for &j in &e.configurations.c1_indices {
                    assert!(e.objective[j].is_zero());
                }
                assert_eq!(e.objective.iter().filter(|v| v.is_zero()).count(), d);
            }
        }
    }

    #[test]
    fn unit_delta_is_rejected() {
        let err = gen_binpack_sensitivity(1, 2, &BinPackOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
    }

    #[test]
    fn proximity_embedding() {
        let e = gen_binpack_proximity(2, 3, &BinPackOptions::default()).unwrap();
        assert_eq!(e.instance.sizes.len(), 45);
        assert!(!e.configurations.complete);
        for k in &e.configurations.configurations {
            assert!(is_feasible_configuration(k, &e.instance.sizes));
        }
        let restricted = e.ilp.lp.a.select_columns(&e.configurations.c1_indices);
        assert_eq!(restricted, e.general.lp.a);
        let cap = Rational::new(57, 60 * 5);
        assert!(e.instance.epsilon <= cap);
        // ε is tight: some distinguished column is at full load
        let tight = e
            .configurations
            .c1_indices
            .iter()
            .any(|&j| load(&e.configurations.configurations[j], &e.instance.sizes) == 1);
        assert!(tight || e.instance.epsilon == cap);
        assert!(gen_binpack_proximity(2, 1, &BinPackOptions::default()).is_err());
    }
}
