//! Wall adjacency between boundary components by slice matching.
//!
//! For states `i, j`, a coordinate permutation `σ` and a sign `ε`, the slice
//! `W = I(r_i)=0 ∩ I(σ(ε r_j))≥0` is a piece of the wall of `i`. The pair
//! `(i, j)` matches when some such `W` is a codimension-one slice; how
//! codimension is measured is selected by [`Interpretation`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use atlas_algebra::matrix::int_rank;
use serde::Serialize;

use crate::enumerate::State;
use crate::golden;
use crate::lattice::{all_perms, halfspace, MonomialSet, Relation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum Interpretation {
    /// The transformed halfspace cuts exactly one monomial off the wall.
    #[default]
    P1,
    /// Moduli dimension of the slice family drops by exactly one, after the
    /// residual group dimension recorded for the wall is subtracted.
    P2,
    /// Some slice from `j` is maximal among all proper slices of the wall.
    P3,
}

impl Interpretation {
    pub const ALL: [Interpretation; 3] =
        [Interpretation::P1, Interpretation::P2, Interpretation::P3];
}

impl FromStr for Interpretation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "P1" => Ok(Interpretation::P1),
            "P2" => Ok(Interpretation::P2),
            "P3" => Ok(Interpretation::P3),
            other => Err(format!(
                "unknown interpretation {other:?} (expected P1, P2 or P3)"
            )),
        }
    }
}

impl std::fmt::Display for Interpretation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Dimension of the affine span of a set of exponent vectors.
pub fn affine_rank(s: &MonomialSet) -> usize {
    let pts: Vec<Vec<i64>> = s.iter().map(|u| u.to_i64()).collect();
    let Some(base) = pts.first().cloned() else {
        return 0;
    };
    let diffs: Vec<Vec<i64>> = pts
        .iter()
        .skip(1)
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        0
    } else {
        int_rank(&diffs)
    }
}

/// All proper slices of the wall of `si` cut by transformed halfspaces of `sj`.
pub fn proper_slices(si: &State, sj: &State) -> BTreeSet<MonomialSet> {
    let mut out = BTreeSet::new();
    for r in [sj.r, sj.r.neg()] {
        for p in all_perms() {
            let w = si
                .wall
                .intersection(&halfspace(&r.permuted(p), Relation::Ge));
            if w != si.wall {
                out.insert(w);
            }
        }
    }
    out
}

/// Moduli dimension attached to a slice of the wall of `s`.
///
/// The recorded quotient dimension fixes the residual group dimension
/// `g = #wall − 1 − dim Φ`; torus directions that act trivially on the slice
/// are not subtracted again.
pub fn slice_moduli_dim(s: &State, w: &MonomialSet) -> i64 {
    let g = s.wall.len() as i64 - 1 - s.dim_phi as i64;
    let lost = affine_rank(&s.wall) as i64 - affine_rank(w) as i64;
    w.len() as i64 - 1 - g + lost
}

/// Precomputed slice data for one interpretation run.
pub struct SliceMatcher<'a> {
    states: &'a [State],
    interp: Interpretation,
    maximal: Vec<BTreeSet<MonomialSet>>,
}

impl<'a> SliceMatcher<'a> {
    pub fn new(states: &'a [State], interp: Interpretation) -> Self {
        let maximal = if interp == Interpretation::P3 {
            states
                .iter()
                .map(|si| {
                    let all: BTreeSet<MonomialSet> = states
                        .iter()
                        .filter(|sj| sj.k != si.k)
                        .flat_map(|sj| proper_slices(si, sj))
                        .collect();
                    all.iter()
                        .filter(|w| !all.iter().any(|v| v != *w && w.is_subset(v)))
                        .copied()
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        SliceMatcher {
            states,
            interp,
            maximal,
        }
    }

    /// Directed slice match for the ordered pair of positions `(a, b)`.
    pub fn matches(&self, a: usize, b: usize) -> bool {
        let (si, sj) = (&self.states[a], &self.states[b]);
        let slices = proper_slices(si, sj);
        match self.interp {
            Interpretation::P1 => slices.iter().any(|w| si.wall.len() - w.len() == 1),
            Interpretation::P2 => slices
                .iter()
                .any(|w| slice_moduli_dim(si, w) == si.dim_phi as i64 - 1),
            Interpretation::P3 => slices.iter().any(|w| self.maximal[a].contains(w)),
        }
    }
}

/// Directed slice match between two states under an interpretation.
pub fn directed_slice_match(si: &State, sj: &State, interp: Interpretation) -> bool {
    if interp == Interpretation::P3 {
        let states = crate::enumerate::tabulated_states();
        let m = SliceMatcher::new(&states, interp);
        return m.matches(si.k - 1, sj.k - 1);
    }
    let pair = [si.clone(), sj.clone()];
    SliceMatcher::new(&pair, interp).matches(0, 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjacencyGraph {
    pub interpretation: Interpretation,
    pub vertices: Vec<usize>,
    pub mutual_edges: BTreeSet<(usize, usize)>,
    pub one_sided: BTreeSet<(usize, usize)>,
    pub neighbors: BTreeMap<usize, Vec<usize>>,
    pub degree: BTreeMap<usize, usize>,
    pub connected: bool,
    /// `None` when the graph is disconnected.
    pub diameter: Option<usize>,
}

/// Evaluates every ordered pair and assembles the mutual graph.
pub fn build_graph(states: &[State], interp: Interpretation) -> AdjacencyGraph {
    let n = states.len();
    let matcher = SliceMatcher::new(states, interp);
    let mut dir = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                dir[a][b] = matcher.matches(a, b);
            }
        }
    }
    let mut mutual_edges = BTreeSet::new();
    let mut one_sided = BTreeSet::new();
    let mut neighbors: BTreeMap<usize, Vec<usize>> =
        states.iter().map(|s| (s.k, Vec::new())).collect();
    for a in 0..n {
        for b in 0..n {
            let (ka, kb) = (states[a].k, states[b].k);
            if dir[a][b] && dir[b][a] {
                neighbors.get_mut(&ka).unwrap().push(kb);
                if ka < kb {
                    mutual_edges.insert((ka, kb));
                }
            } else if dir[a][b] {
                one_sided.insert((ka, kb));
            }
        }
    }
    let degree = neighbors.iter().map(|(k, v)| (*k, v.len())).collect();
    let (connected, diameter) = distances(&neighbors);
    AdjacencyGraph {
        interpretation: interp,
        vertices: states.iter().map(|s| s.k).collect(),
        mutual_edges,
        one_sided,
        neighbors,
        degree,
        connected,
        diameter,
    }
}

fn distances(neighbors: &BTreeMap<usize, Vec<usize>>) -> (bool, Option<usize>) {
    let mut diameter = 0;
    for &start in neighbors.keys() {
        let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
        dist.insert(start, 0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for &w in &neighbors[&v] {
                if !dist.contains_key(&w) {
                    dist.insert(w, d + 1);
                    queue.push_back(w);
                }
            }
        }
        if dist.len() != neighbors.len() {
            return (false, None);
        }
        diameter = diameter.max(*dist.values().max().unwrap());
    }
    (true, Some(diameter))
}

impl AdjacencyGraph {
    pub fn isolated(&self) -> Vec<usize> {
        self.degree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(k, _)| *k)
            .collect()
    }

    /// Vertices attaining the maximum (`max = true`) or minimum degree.
    pub fn degree_extreme(&self, max: bool) -> (usize, Vec<usize>) {
        let vals = self.degree.values().copied();
        let target = if max { vals.max() } else { vals.min() }.unwrap_or(0);
        let ks = self
            .degree
            .iter()
            .filter(|(_, d)| **d == target)
            .map(|(k, _)| *k)
            .collect();
        (target, ks)
    }

    /// Undirected mutual graph in DOT format.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph adjacency {\n");
        for k in &self.vertices {
            let _ = writeln!(s, "  {k};");
        }
        for (a, b) in &self.mutual_edges {
            let _ = writeln!(s, "  {a} -- {b};");
        }
        s.push_str("}\n");
        s
    }

    /// One-sided arrows as dashed directed edges.
    pub fn arrows_dot(&self) -> String {
        let mut s = String::from("digraph arrows {\n");
        for (a, b) in &self.one_sided {
            let _ = writeln!(s, "  {a} -> {b} [style=dashed];");
        }
        s.push_str("}\n");
        s
    }
}

/// Comparison of a computed graph with the published neighbor table.
#[derive(Clone, Debug, Serialize)]
pub struct GraphDiff {
    pub interpretation: Interpretation,
    pub edges: usize,
    pub one_sided: usize,
    pub diameter: Option<usize>,
    pub connected: bool,
    /// Edges present in the computed graph but not in the table.
    pub extra: Vec<(usize, usize)>,
    /// Edges of the table that the computed graph lacks.
    pub missing: Vec<(usize, usize)>,
    pub rows_matching: usize,
}

impl GraphDiff {
    pub fn exact(&self) -> bool {
        self.extra.is_empty() && self.missing.is_empty()
    }
}

pub fn published_edges() -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (k, ns) in &golden::adjacency().neighbors {
        for l in ns {
            out.insert((*k.min(l), *k.max(l)));
        }
    }
    out
}

pub fn diff_against_table(g: &AdjacencyGraph) -> GraphDiff {
    let gold = published_edges();
    let table = &golden::adjacency().neighbors;
    let rows_matching = g
        .neighbors
        .iter()
        .filter(|(k, ns)| table.get(k) == Some(ns))
        .count();
    GraphDiff {
        interpretation: g.interpretation,
        edges: g.mutual_edges.len(),
        one_sided: g.one_sided.len(),
        diameter: g.diameter,
        connected: g.connected,
        extra: g.mutual_edges.difference(&gold).copied().collect(),
        missing: gold.difference(&g.mutual_edges).copied().collect(),
        rows_matching,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::tabulated_states;

    #[test]
    fn affine_rank_of_wall() {
        let s = tabulated_states();
        // the wall of a state spans at most the hyperplane r·u = 0 inside Σu = 5
        for st in &s {
            assert!(affine_rank(&st.wall) <= 3);
        }
        assert_eq!(affine_rank(&MonomialSet::full()), 4);
    }

    #[test]
    fn slices_contain_eta_and_are_proper() {
        let s = tabulated_states();
        for w in proper_slices(&s[7], &s[3]) {
            assert!(w.contains(&crate::lattice::ETA));
            assert!(w.is_subset(&s[7].wall) && w != s[7].wall);
        }
    }

    #[test]
    fn parse_interpretation() {
        assert_eq!("p2".parse::<Interpretation>().unwrap(), Interpretation::P2);
        assert!("P4".parse::<Interpretation>().is_err());
    }
}
