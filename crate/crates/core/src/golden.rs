//! Published reference tables, shipped as JSON and compiled into the crate.
//!
//! Every downstream comparison goes through these accessors so that a single
//! place owns the transcription.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::lattice::WeightVector;

#[derive(Clone, Debug, Deserialize)]
pub struct StateRow {
    pub k: usize,
    pub r: [i64; 5],
    pub support_size: usize,
    pub dim_phi: u32,
    pub test: TestKind,
}

impl StateRow {
    pub fn weight(&self) -> WeightVector {
        WeightVector(self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, serde::Serialize)]
pub enum TestKind {
    #[serde(rename = "C-H")]
    ConvexHull,
    #[serde(rename = "C-F")]
    CfCone,
}

#[derive(Deserialize)]
struct StatesFile {
    states: Vec<StateRow>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CycleComponent {
    pub d: u32,
    pub m: u32,
    pub rho: u32,
}

#[derive(Clone, Debug, Deserialize)]
pub struct StabilizerRow {
    pub k: usize,
    pub wall: usize,
    pub dim_p: u32,
    pub dim_phi: u32,
    pub dim_c_mod_h: u32,
    pub stab: u32,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ApolarHf {
    pub generic: [u32; 6],
    pub k38: [u32; 6],
}

#[derive(Clone, Debug, Deserialize)]
pub struct FilterTables {
    pub stage_counts: [usize; 6],
    pub filter1_rows: BTreeMap<usize, Vec<usize>>,
    pub filter1_count: usize,
    pub apolar_hf: ApolarHf,
    pub betti_types: BTreeMap<String, Vec<usize>>,
    pub filter2_rows: BTreeMap<usize, Vec<usize>>,
    pub filter2_betti_count: usize,
    pub filter2_hf_count: usize,
    pub filter3_count: usize,
    pub filter3_survivor_rows: BTreeMap<usize, Vec<usize>>,
    pub cycle_packages: BTreeMap<usize, Vec<CycleComponent>>,
    pub filter4_capacity: Vec<(usize, usize)>,
    pub filter4_rank: Vec<(usize, usize)>,
    pub filter4_survivor_rows: BTreeMap<usize, Vec<usize>>,
    pub stabilizer_rows: Vec<StabilizerRow>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct DegreeExtreme {
    pub value: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct AdjacencyTable {
    pub neighbors: BTreeMap<usize, Vec<usize>>,
    pub vertices: usize,
    pub edges: usize,
    pub one_sided: usize,
    pub diameter: usize,
    pub connected: bool,
    pub max_degree: DegreeExtreme,
    pub min_degree: DegreeExtreme,
}

pub fn states() -> &'static [StateRow] {
    static CELL: OnceLock<Vec<StateRow>> = OnceLock::new();
    CELL.get_or_init(|| {
        let f: StatesFile =
            serde_json::from_str(include_str!("../data/states.json")).expect("states.json");
        f.states
    })
}

pub fn state(k: usize) -> &'static StateRow {
    &states()[k - 1]
}

pub fn filters() -> &'static FilterTables {
    static CELL: OnceLock<FilterTables> = OnceLock::new();
    CELL.get_or_init(|| {
        serde_json::from_str(include_str!("../data/filters.json")).expect("filters.json")
    })
}

pub fn adjacency() -> &'static AdjacencyTable {
    static CELL: OnceLock<AdjacencyTable> = OnceLock::new();
    CELL.get_or_init(|| {
        serde_json::from_str(include_str!("../data/adjacency.json")).expect("adjacency.json")
    })
}

/// Type tag of the recorded Betti table for `k`.
pub fn betti_type(k: usize) -> &'static str {
    filters()
        .betti_types
        .iter()
        .find(|(_, ks)| ks.contains(&k))
        .map(|(t, _)| t.as_str())
        .expect("every k has a Betti type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_load() {
        assert_eq!(states().len(), 38);
        assert_eq!(state(3).r, [3, 0, 0, -1, -2]);
        assert_eq!(filters().stage_counts, [1406, 759, 450, 22, 4, 0]);
        let total: usize = filters().betti_types.values().map(|v| v.len()).sum();
        assert_eq!(total, 38);
        let a = adjacency();
        let deg_sum: usize = a.neighbors.values().map(|v| v.len()).sum();
        assert_eq!(deg_sum, 2 * a.edges);
    }
}
