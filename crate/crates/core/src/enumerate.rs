//! Finite search for the maximal strictly semistable supports.
//!
//! Every maximal support is cut out by a hyperplane through `η` and three
//! lattice points, so the search runs over 3-subsets of the lattice, keeps
//! the normals that are monotone (one representative per permutation
//! class), and prunes to inclusion-maximal supports up to permutation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::golden;
use crate::lattice::{
    barycenter_position, halfspace, lattice_points, BarycenterPosition, MonomialSet, Relation,
    WeightVector, ETA, LATTICE_SIZE,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct State {
    pub k: usize,
    pub r: WeightVector,
    pub support: MonomialSet,
    pub wall: MonomialSet,
    pub dim_phi: u32,
    pub support_size: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum EnumerationError {
    #[error("count mismatch: found {found} maximal supports, expected 38")]
    CountMismatch { found: usize },
    #[error("support of r = {0:?} does not match any tabulated state")]
    Unmatched(WeightVector),
}

fn det3(m: [[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: &[[i64; 4]; 4]) -> i64 {
    let mut total = 0;
    for c in 0..4 {
        let mut minor = [[0i64; 3]; 3];
        for i in 1..4 {
            let mut cc = 0;
            for j in 0..4 {
                if j == c {
                    continue;
                }
                minor[i - 1][cc] = m[i][j];
                cc += 1;
            }
        }
        let s = if c % 2 == 0 { 1 } else { -1 };
        total += s * m[0][c] * det3(minor);
    }
    total
}

/// Primitive normal of the hyperplane spanned by `u1, u2, u3, η`, or `None`
/// if those four vectors span less than a hyperplane.
///
/// The normal is the vector of signed maximal minors, which is orthogonal to
/// every row; orthogonality to `η` makes its coordinate sum zero.
pub fn hyperplane_normal(rows: [[i64; 5]; 3]) -> Option<WeightVector> {
    let full = [rows[0], rows[1], rows[2], [1, 1, 1, 1, 1]];
    let mut n = [0i64; 5];
    for (j, nj) in n.iter_mut().enumerate() {
        let mut m = [[0i64; 4]; 4];
        for (i, row) in full.iter().enumerate() {
            let mut cc = 0;
            for (c, &v) in row.iter().enumerate() {
                if c == j {
                    continue;
                }
                m[i][cc] = v;
                cc += 1;
            }
        }
        let s = if j % 2 == 0 { 1 } else { -1 };
        *nj = s * det4(&m);
    }
    let w = WeightVector(n);
    if w.is_zero() {
        None
    } else {
        Some(w.reduced())
    }
}

/// Sign-normalize a normal into the dominant chamber when it is monotone.
fn orient(n: WeightVector) -> Option<WeightVector> {
    if n.is_dominant() {
        Some(n)
    } else if n.is_increasing() {
        Some(n.neg())
    } else {
        None
    }
}

/// All distinct dominant reduced normals arising from 3-subsets of the
/// lattice, sorted.
pub fn candidate_normals() -> Vec<WeightVector> {
    let pts: Vec<[i64; 5]> = lattice_points()
        .iter()
        .map(|u| u.0.map(|x| x as i64))
        .collect();
    let mut out = BTreeSet::new();
    for a in 0..LATTICE_SIZE {
        for b in a + 1..LATTICE_SIZE {
            for c in b + 1..LATTICE_SIZE {
                if let Some(r) = hyperplane_normal([pts[a], pts[b], pts[c]]).and_then(orient) {
                    out.insert(r);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// A maximal strictly semistable support before it is matched to a table
/// row: the support together with every dominant normal that cuts it out.
#[derive(Clone, Debug)]
pub struct RawState {
    pub support: MonomialSet,
    pub normals: Vec<WeightVector>,
}

/// Inclusion-maximal supports (up to coordinate permutation) among the
/// candidate halfspaces that are strictly semistable.
pub fn maximal_supports(normals: &[WeightVector]) -> Vec<RawState> {
    let mut by_support: BTreeMap<MonomialSet, Vec<WeightVector>> = BTreeMap::new();
    for r in normals {
        by_support
            .entry(halfspace(r, Relation::Ge))
            .or_default()
            .push(*r);
    }
    // the same support class may appear under several permutations; fold
    // the normals of equivalent supports together
    let mut classes: BTreeMap<MonomialSet, (MonomialSet, Vec<WeightVector>)> = BTreeMap::new();
    for (s, rs) in by_support {
        let entry = classes.entry(s.canonical()).or_insert((s, Vec::new()));
        entry.1.extend(rs);
    }
    let mut list: Vec<(MonomialSet, Vec<WeightVector>)> = classes.into_values().collect();
    list.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));

    let mut maxima: Vec<(MonomialSet, Vec<WeightVector>, Vec<MonomialSet>)> = Vec::new();
    for (s, rs) in list {
        let dominated = maxima
            .iter()
            .any(|(_, _, orbit)| orbit.iter().any(|t| s.is_subset(t)));
        if !dominated {
            let orbit = s.orbit();
            maxima.push((s, rs, orbit));
        }
    }
    maxima
        .into_iter()
        .filter(|(s, _, _)| {
            barycenter_position(s).expect("nonempty") == BarycenterPosition::StrictlySemistable
        })
        .map(|(support, mut normals, _)| {
            normals.sort();
            normals.dedup();
            RawState { support, normals }
        })
        .collect()
}

/// Runs the full search and matches each support to its table row.
///
/// Matching is by the dominant normal; the count check runs first so that an
/// interpretation error surfaces as a count mismatch.
pub fn enumerate_maximal_supports() -> Result<Vec<State>, EnumerationError> {
    let raw = maximal_supports(&candidate_normals());
    if raw.len() != 38 {
        return Err(EnumerationError::CountMismatch { found: raw.len() });
    }
    let mut out = Vec::with_capacity(38);
    for rs in raw {
        let row = rs
            .normals
            .iter()
            .find_map(|r| golden::states().iter().find(|row| row.r == r.0))
            .ok_or(EnumerationError::Unmatched(rs.normals[0]))?;
        out.push(State::new(row.k, row.weight(), row.dim_phi));
    }
    out.sort_by_key(|s| s.k);
    Ok(out)
}

/// The 38 states rebuilt from the tabulated normals, without the search.
pub fn tabulated_states() -> Vec<State> {
    golden::states()
        .iter()
        .map(|row| State::new(row.k, row.weight(), row.dim_phi))
        .collect()
}

impl State {
    pub fn new(k: usize, r: WeightVector, dim_phi: u32) -> Self {
        let support = halfspace(&r, Relation::Ge);
        State {
            k,
            r,
            support,
            wall: halfspace(&r, Relation::Eq),
            dim_phi,
            support_size: support.len(),
        }
    }
}

/// Checks that `η` is orthogonal to a weight, i.e. the coordinate sum is 0.
pub fn passes_through_eta(r: &WeightVector) -> bool {
    ETA.dot(r) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_of_example_triple() {
        let n = hyperplane_normal([[0, 4, 1, 0, 0], [1, 0, 0, 4, 0], [1, 0, 3, 0, 1]]).unwrap();
        let expected = WeightVector([36, 1, -4, -9, -24]);
        assert!(n == expected || n == expected.neg());
    }

    #[test]
    fn degenerate_triple_is_skipped() {
        // η itself among the rows
        assert!(hyperplane_normal([[1, 1, 1, 1, 1], [5, 0, 0, 0, 0], [0, 5, 0, 0, 0]]).is_none());
    }
}
