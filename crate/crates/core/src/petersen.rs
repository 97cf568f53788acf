//! The Petersen graph, its perfect matchings and the 15×6 edge–matching
//! incidence matrix.
//!
//! Labeling: outer vertices `o_k = k` and inner vertices `i_k = 5 + k` for
//! `k = 0..5`. Edges are listed as the five outer-cycle edges `o_k o_{k+1}`,
//! then the five spokes `o_k i_k`, then the five pentagram edges
//! `i_k i_{k+2}`, each stored with the smaller endpoint first.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) outside {vertex_count} vertices"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(Graph {
            vertex_count,
            edges,
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

/// A set of edges, stored as sorted indices into [`Graph::edges`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    pub edge_indices: Vec<usize>,
}

impl Matching {
    pub fn contains(&self, edge: usize) -> bool {
        self.edge_indices.binary_search(&edge).is_ok()
    }

    pub fn is_perfect(&self, g: &Graph) -> bool {
        let mut hits = vec![0usize; g.vertex_count];
        for &e in &self.edge_indices {
            let (u, v) = g.edges[e];
            hits[u] += 1;
            hits[v] += 1;
        }
        hits.iter().all(|&h| h == 1)
    }
}

pub fn petersen_graph() -> Graph {
    let outer = (0..5).map(|k| (k, (k + 1) % 5));
    let spokes = (0..5).map(|k| (k, 5 + k));
    let star = (0..5).map(|k| (5 + k, 5 + (k + 2) % 5));
    let edges = outer
        .chain(spokes)
        .chain(star)
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    Graph::new(10, edges).expect("petersen construction is simple")
}

/// All perfect matchings, sorted lexicographically by edge-index set.
pub fn enumerate_perfect_matchings(g: &Graph) -> Vec<Matching> {
    if g.vertex_count % 2 == 1 {
        return vec![];
    }
    let mut incident = vec![Vec::new(); g.vertex_count];
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }
    let mut out = Vec::new();
    let mut covered = vec![false; g.vertex_count];
    let mut chosen = Vec::new();
    extend_matching(g, &incident, &mut covered, &mut chosen, &mut out);
    for m in &mut out {
        m.edge_indices.sort_unstable();
    }
    out.sort();
    out
}

// Branch on the edges covering the lowest uncovered vertex.
fn extend_matching(
    g: &Graph,
    incident: &[Vec<usize>],
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Matching>,
) {
    let Some(v) = covered.iter().position(|c| !c) else {
        out.push(Matching {
            edge_indices: chosen.clone(),
        });
        return;
    };
    for &e in &incident[v] {
        let (a, b) = g.edges[e];
        let w = if a == v { b } else { a };
        if covered[w] {
            continue;
        }
        covered[v] = true;
        covered[w] = true;
        chosen.push(e);
        extend_matching(g, incident, covered, chosen, out);
        chosen.pop();
        covered[v] = false;
        covered[w] = false;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingSystem {
    pub graph: Graph,
    pub matchings: Vec<Matching>,
    /// `incidence[(e, m)] = 1` iff edge `e` lies in matching `m`.
    pub incidence: Matrix,
}

impl MatchingSystem {
    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.incidence.rows())
            .map(|e| self.matchings.iter().filter(|m| m.contains(e)).count())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        self.matchings
            .iter()
            .map(|m| m.edge_indices.len())
            .collect()
    }

    /// Number of shared edges for every unordered pair of matchings.
    pub fn pairwise_overlaps(&self) -> Vec<((usize, usize), usize)> {
        let k = self.matchings.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                let shared = self.matchings[a]
                    .edge_indices
                    .iter()
                    .filter(|&&e| self.matchings[b].contains(e))
                    .count();
                out.push(((a, b), shared));
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Construction(msg));
        if self.graph.vertex_count != 10 || self.graph.edges.len() != 15 {
            return fail("graph is not 10 vertices / 15 edges".into());
        }
        if let Some(v) = (0..10).find(|&v| self.graph.degree(v) != 3) {
            return fail(format!("vertex {v} is not of degree 3"));
        }
        if self.matchings.len() != 6 {
            return fail(format!(
                "{} perfect matchings, expected 6",
                self.matchings.len()
            ));
        }
        if let Some(m) = self.matchings.iter().find(|m| !m.is_perfect(&self.graph)) {
            return fail(format!("matching {:?} is not perfect", m.edge_indices));
        }
        if self.column_sums().iter().any(|&s| s != 5) {
            return fail("a matching does not have 5 edges".into());
        }
        if let Some(e) = self.row_sums().iter().position(|&s| s != 2) {
            return fail(format!("edge {e} is not in exactly two matchings"));
        }
        if let Some((pair, s)) = self.pairwise_overlaps().into_iter().find(|&(_, s)| s != 1) {
            return fail(format!("matchings {pair:?} share {s} edges"));
        }
        for e in 0..15 {
            for (m, matching) in self.matchings.iter().enumerate() {
                let want = if matching.contains(e) {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                if self.incidence[(e, m)] != want {
                    return fail(format!("incidence entry ({e},{m}) disagrees"));
                }
            }
        }
        Ok(())
    }
}

/// Builds and fully checks the Petersen matching system.
pub fn build_matching_system() -> Result<MatchingSystem> {
    let graph = petersen_graph();
    let matchings = enumerate_perfect_matchings(&graph);
    let mut incidence = Matrix::zeros(graph.edges.len(), matchings.len());
    for (m, matching) in matchings.iter().enumerate() {
        for &e in &matching.edge_indices {
            incidence[(e, m)] = Rational::one();
        }
    }
    let system = MatchingSystem {
        graph,
        matchings,
        incidence,
    };
    system.check()?;
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Vector;

    #[test]
    fn petersen_shape() {
        let g = petersen_graph();
        assert_eq!(g.vertex_count, 10);
        assert_eq!(g.edges.len(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert_eq!(g.edges[0], (0, 1));
        assert_eq!(g.edges[5], (0, 5));
        assert_eq!(g.edges[10], (5, 7));
    }

    #[test]
    fn matching_counts() {
        assert_eq!(enumerate_perfect_matchings(&petersen_graph()).len(), 6);
        let c4 = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let ms = enumerate_perfect_matchings(&c4);
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0].edge_indices, vec![0, 2]);
        let tri = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(enumerate_perfect_matchings(&tri).is_empty());
    }

    #[test]
    fn invalid_graphs() {
        assert!(Graph::new(2, vec![(0, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn system_properties() {
        let s = build_matching_system().unwrap();
        assert_eq!(s.incidence.rows(), 15);
        assert_eq!(s.incidence.cols(), 6);
        assert!(s.row_sums().iter().all(|&r| r == 2));
        assert!(s.column_sums().iter().all(|&c| c == 5));
        let overlaps = s.pairwise_overlaps();
        assert_eq!(overlaps.len(), 15);
        assert!(overlaps.iter().all(|&(_, k)| k == 1));
    }

    #[test]
    fn half_of_each_matching_covers_every_edge_once() {
        let s = build_matching_system().unwrap();
        let half = Vector(vec![Rational::new(1, 2); 6]);
        assert_eq!(
            s.incidence.mul_vec(&half).unwrap(),
            Vector(vec![Rational::one(); 15])
        );
    }

    #[test]
    fn column_pair_sums_have_single_two() {
        let s = build_matching_system().unwrap();
        for a in 0..6 {
            for b in a + 1..6 {
                let twos = (0..15)
                    .filter(|&e| &s.incidence[(e, a)] + &s.incidence[(e, b)] == Rational::from(2))
                    .count();
                assert_eq!(twos, 1);
            }
        }
    }

    #[test]
    fn deterministic_json() {
        let a = serde_json::to_string(&build_matching_system().unwrap()).unwrap();
        let b = serde_json::to_string(&build_matching_system().unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
