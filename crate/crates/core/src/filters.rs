//! The five-stage non-inclusion pipeline over ordered pairs of states.
//!
//! A pair `(k, ℓ)` is excluded when some invariant shows that the boundary
//! component of `k` cannot lie in that of `ℓ`. Stages run in order and a pair
//! excluded by an earlier stage is never re-tested.

use std::collections::{BTreeMap, BTreeSet};

use atlas_algebra::{HilbertData, PrimeField};
use rand::Rng;
use serde::Serialize;

use crate::apolar::{
    betti_table_for, stable_profile, ApolarError, ApolarProfile, BettiTable, DEFAULT_PROTOCOL,
    DEFAULT_TRIAL_CAP,
};
use crate::enumerate::State;
use crate::forms::{sample_generic_with, SampleField};
use crate::golden::{self, CycleComponent};
use crate::lattice::{MonomialSet, NVARS};
use crate::seeds;
use crate::singular::{jacobian_scheme, HF_WINDOW};

pub type Pair = (usize, usize);

#[derive(Debug, thiserror::Error)]
pub enum FilterError {
    #[error("singular Hilbert data of state {k} did not stabilize in {cap} trials")]
    NotStable { k: usize, cap: usize },
    #[error("protocol must be at least 2, got {0}")]
    Protocol(usize),
    #[error(transparent)]
    Apolar(#[from] ApolarError),
}

/// All `38 · 37` ordered pairs of distinct states.
pub fn all_pairs(n: usize) -> BTreeSet<Pair> {
    (1..=n)
        .flat_map(|k| (1..=n).filter(move |&l| l != k).map(move |l| (k, l)))
        .collect()
}

/// `{(k, ℓ) : d_k > d_ℓ}`.
pub fn filter1_dimension(pairs: &BTreeSet<Pair>, dims: &BTreeMap<usize, u32>) -> BTreeSet<Pair> {
    pairs
        .iter()
        .copied()
        .filter(|(k, l)| dims[k] > dims[l])
        .collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ApolarExclusion {
    pub hf: BTreeSet<Pair>,
    pub betti: BTreeSet<Pair>,
}

impl ApolarExclusion {
    pub fn all(&self) -> BTreeSet<Pair> {
        self.hf.union(&self.betti).copied().collect()
    }
}

/// Apolar Hilbert functions first, then graded Betti numbers on pairs with
/// equal Hilbert function.
pub fn filter2_apolar(
    pairs: &BTreeSet<Pair>,
    profiles: &BTreeMap<usize, ApolarProfile>,
    betti: &BTreeMap<usize, BettiTable>,
) -> ApolarExclusion {
    let mut out = ApolarExclusion::default();
    for &(k, l) in pairs {
        let (hk, hl) = (&profiles[&k], &profiles[&l]);
        if !hk.le(hl) {
            out.hf.insert((k, l));
        } else if hk == hl && betti[&k].somewhere_below(&betti[&l]) {
            out.betti.insert((k, l));
        }
    }
    out
}

/// `∃ q ≤ 30 : h_k(q) < h_ℓ(q)`.
pub fn filter3_singular_hf(
    pairs: &BTreeSet<Pair>,
    hfs: &BTreeMap<usize, Vec<u64>>,
) -> BTreeSet<Pair> {
    pairs
        .iter()
        .copied()
        .filter(|(k, l)| hfs[k].iter().zip(&hfs[l]).any(|(a, b)| a < b))
        .collect()
}

/// One curve component of the singular locus: degree, multiplicity and
/// generic Hessian rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CurveComponent {
    pub d: u32,
    pub m: u32,
    pub rho: u32,
}

impl From<&CycleComponent> for CurveComponent {
    fn from(c: &CycleComponent) -> Self {
        CurveComponent {
            d: c.d,
            m: c.m,
            rho: c.rho,
        }
    }
}

pub type CyclePackage = Vec<CurveComponent>;

pub fn published_packages() -> BTreeMap<usize, CyclePackage> {
    golden::filters()
        .cycle_packages
        .iter()
        .map(|(&k, v)| (k, v.iter().map(CurveComponent::from).collect()))
        .collect()
}

/// Whether the lines of `source` can be distributed over the lines of
/// `target`, each target absorbing total multiplicity at most its own, with
/// `ρ_target ≤ ρ_source` when `check_rank` is set.
pub fn lines_fit(target: &[CurveComponent], source: &[CurveComponent], check_rank: bool) -> bool {
    let tl: Vec<&CurveComponent> = target.iter().filter(|c| c.d == 1).collect();
    let mut sl: Vec<&CurveComponent> = source.iter().filter(|c| c.d == 1).collect();
    sl.sort_by(|a, b| b.m.cmp(&a.m));
    let mut room: Vec<u32> = tl.iter().map(|c| c.m).collect();
    fn place(
        i: usize,
        sl: &[&CurveComponent],
        tl: &[&CurveComponent],
        room: &mut [u32],
        check_rank: bool,
    ) -> bool {
        let Some(s) = sl.get(i) else { return true };
        for t in 0..tl.len() {
            if room[t] >= s.m && (!check_rank || tl[t].rho <= s.rho) {
                room[t] -= s.m;
                if place(i + 1, sl, tl, room, check_rank) {
                    return true;
                }
                room[t] += s.m;
            }
        }
        false
    }
    place(0, &sl, &tl, &mut room, check_rank)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CycleExclusion {
    pub capacity: BTreeSet<Pair>,
    pub rank: BTreeSet<Pair>,
}

impl CycleExclusion {
    pub fn all(&self) -> BTreeSet<Pair> {
        self.capacity.union(&self.rank).copied().collect()
    }
}

/// Capacity first, then Hessian rank on what remains. The lines of `Γ_ℓ`
/// are assigned to the lines of `Γ_k`. States without a package impose no
/// constraint.
pub fn filter4_cycles(
    pairs: &BTreeSet<Pair>,
    packages: &BTreeMap<usize, CyclePackage>,
) -> CycleExclusion {
    let mut out = CycleExclusion::default();
    for &(k, l) in pairs {
        let (Some(pk), Some(pl)) = (packages.get(&k), packages.get(&l)) else {
            continue;
        };
        if !lines_fit(pk, pl, false) {
            out.capacity.insert((k, l));
        } else if !lines_fit(pk, pl, true) {
            out.rank.insert((k, l));
        }
    }
    out
}

/// The entries of `r_k` as a sorted multiset.
pub fn weight_multiset(s: &State) -> [i64; NVARS] {
    let mut m = s.r.0;
    m.sort();
    m
}

fn negated(m: &[i64; NVARS]) -> [i64; NVARS] {
    let mut n = m.map(|x| -x);
    n.sort();
    n
}

/// Excluded unless `M_k = ±M_ℓ`.
pub fn filter5_stabilizer(
    pairs: &BTreeSet<Pair>,
    multisets: &BTreeMap<usize, [i64; NVARS]>,
) -> BTreeSet<Pair> {
    pairs
        .iter()
        .copied()
        .filter(|(k, l)| {
            let (a, b) = (&multisets[k], &multisets[l]);
            a != b && *a != negated(b)
        })
        .collect()
}

/// Hilbert data of the saturated Jacobian scheme of a generic form on `s`.
pub fn singular_hilbert<F: SampleField, R: Rng + ?Sized>(
    s: &MonomialSet,
    field: &F,
    rng: &mut R,
) -> HilbertData {
    jacobian_scheme(&sample_generic_with(s, rng, field)).hilbert(HF_WINDOW)
}

#[derive(Clone, Debug, Serialize)]
pub struct StableHilbert {
    pub hf: Vec<u64>,
    pub projective_dim: i64,
    pub degree: u64,
    pub trials: usize,
}

/// Samples until `protocol` consecutive trials agree on `(hf, dim, degree)`.
pub fn stable_singular_hilbert(
    k: usize,
    s: &MonomialSet,
    protocol: usize,
    cap: usize,
    seed: u64,
    field: &PrimeField,
) -> Result<StableHilbert, FilterError> {
    if protocol < 2 {
        return Err(FilterError::Protocol(protocol));
    }
    let mut rng = seeds::rng(seed, "singular-hf", k as u64);
    let mut last: Option<HilbertData> = None;
    let mut run = 0;
    for trial in 1..=cap {
        let h = singular_hilbert(s, field, &mut rng);
        if last.as_ref() == Some(&h) {
            run += 1;
        } else {
            last = Some(h);
            run = 1;
        }
        if run == protocol {
            let h = last.expect("set above");
            return Ok(StableHilbert {
                projective_dim: h.projective_dim(),
                degree: h.degree,
                hf: h.hf,
                trials: trial,
            });
        }
    }
    Err(FilterError::NotStable { k, cap })
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: &'static str,
    pub excluded: BTreeSet<Pair>,
    pub survivors: BTreeSet<Pair>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FilterReport {
    pub start: BTreeSet<Pair>,
    pub stages: Vec<Stage>,
    pub apolar: Option<ApolarExclusion>,
    pub cycles: Option<CycleExclusion>,
    pub apolar_profiles: BTreeMap<usize, ApolarProfile>,
    pub singular_hf: BTreeMap<usize, StableHilbert>,
}

impl FilterReport {
    /// `(1406, …)`: candidates before the first stage and after each run stage.
    pub fn counts(&self) -> Vec<usize> {
        std::iter::once(self.start.len())
            .chain(self.stages.iter().map(|s| s.survivors.len()))
            .collect()
    }

    pub fn survivors(&self) -> &BTreeSet<Pair> {
        self.stages
            .last()
            .map(|s| &s.survivors)
            .unwrap_or(&self.start)
    }

    pub fn stage(&self, n: usize) -> Option<&Stage> {
        self.stages.get(n.checked_sub(1)?)
    }

    /// Rows `k ↦ {ℓ : (k, ℓ) ∈ set}` with empty rows omitted.
    pub fn rows(set: &BTreeSet<Pair>) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(k, l) in set {
            out.entry(k).or_default().push(l);
        }
        out
    }

    /// Every run stage removes exactly its excluded set.
    pub fn is_partition(&self) -> bool {
        let mut prev = &self.start;
        let mut seen = BTreeSet::new();
        for s in &self.stages {
            if !s.excluded.is_subset(prev) || !s.excluded.is_disjoint(&s.survivors) {
                return false;
            }
            if s.excluded.len() + s.survivors.len() != prev.len() || !s.survivors.is_subset(prev) {
                return false;
            }
            if !seen.is_disjoint(&s.excluded) {
                return false;
            }
            seen.extend(s.excluded.iter().copied());
            prev = &s.survivors;
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub seed: u64,
    pub protocol: usize,
    pub cap: usize,
    /// Stop after this stage (1..=5).
    pub last_stage: usize,
    pub packages: BTreeMap<usize, CyclePackage>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            protocol: DEFAULT_PROTOCOL,
            cap: DEFAULT_TRIAL_CAP,
            last_stage: 5,
            packages: published_packages(),
        }
    }
}

fn push_stage(
    stages: &mut Vec<Stage>,
    prev: &BTreeSet<Pair>,
    name: &'static str,
    excluded: BTreeSet<Pair>,
) -> BTreeSet<Pair> {
    let survivors: BTreeSet<Pair> = prev.difference(&excluded).copied().collect();
    stages.push(Stage {
        name,
        excluded,
        survivors: survivors.clone(),
    });
    survivors
}

/// Runs stages `1..=cfg.last_stage` on the tabulated states.
pub fn run_pipeline(
    states: &[State],
    field: &PrimeField,
    cfg: &PipelineConfig,
) -> Result<FilterReport, FilterError> {
    let start = all_pairs(states.len());
    let mut stages = Vec::new();
    let mut report_apolar = None;
    let mut report_cycles = None;
    let mut profiles = BTreeMap::new();
    let mut singular_hf = BTreeMap::new();
    let by_k: BTreeMap<usize, &State> = states.iter().map(|s| (s.k, s)).collect();

    let dims: BTreeMap<usize, u32> = states.iter().map(|s| (s.k, s.dim_phi)).collect();
    let mut cur = push_stage(
        &mut stages,
        &start,
        "dimension",
        filter1_dimension(&start, &dims),
    );

    if cfg.last_stage >= 2 {
        for s in states {
            profiles.insert(
                s.k,
                stable_profile(&s.support, cfg.protocol, cfg.seed, field)?.profile,
            );
        }
        let betti: BTreeMap<usize, BettiTable> = states
            .iter()
            .map(|s| Ok((s.k, betti_table_for(s.k)?)))
            .collect::<Result<_, ApolarError>>()?;
        let ex = filter2_apolar(&cur, &profiles, &betti);
        cur = push_stage(&mut stages, &cur, "apolar", ex.all());
        report_apolar = Some(ex);
    }
    if cfg.last_stage >= 3 {
        let involved: BTreeSet<usize> = cur.iter().flat_map(|&(k, l)| [k, l]).collect();
        for k in involved {
            singular_hf.insert(
                k,
                stable_singular_hilbert(
                    k,
                    &by_k[&k].support,
                    cfg.protocol,
                    cfg.cap,
                    cfg.seed,
                    field,
                )?,
            );
        }
        let hfs: BTreeMap<usize, Vec<u64>> = singular_hf
            .iter()
            .map(|(&k, h)| (k, h.hf.clone()))
            .collect();
        cur = push_stage(
            &mut stages,
            &cur,
            "singular-hf",
            filter3_singular_hf(&cur, &hfs),
        );
    }
    if cfg.last_stage >= 4 {
        let ex = filter4_cycles(&cur, &cfg.packages);
        cur = push_stage(&mut stages, &cur, "cycles", ex.all());
        report_cycles = Some(ex);
    }
    if cfg.last_stage >= 5 {
        let ms: BTreeMap<usize, [i64; NVARS]> =
            states.iter().map(|s| (s.k, weight_multiset(s))).collect();
        push_stage(
            &mut stages,
            &cur,
            "stabilizer",
            filter5_stabilizer(&cur, &ms),
        );
    }
    Ok(FilterReport {
        start,
        stages,
        apolar: report_apolar,
        cycles: report_cycles,
        apolar_profiles: profiles,
        singular_hf,
    })
}

fn row_diff(
    label: &str,
    got: BTreeMap<usize, Vec<usize>>,
    want: &BTreeMap<usize, Vec<usize>>,
) -> Vec<String> {
    let want: BTreeMap<usize, Vec<usize>> = want
        .iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(k, v)| (*k, v.clone()))
        .collect();
    let keys: BTreeSet<usize> = got.keys().chain(want.keys()).copied().collect();
    keys.into_iter()
        .filter(|k| got.get(k) != want.get(k))
        .map(|k| {
            let g = got.get(&k).cloned().unwrap_or_default();
            let w = want.get(&k).cloned().unwrap_or_default();
            format!("{label} row {k}: {g:?} != {w:?}")
        })
        .collect()
}

/// Differences between a report and the published tables; empty on success.
pub fn diff_against_tables(r: &FilterReport) -> Vec<String> {
    let t = golden::filters();
    let mut out = Vec::new();
    let counts = r.counts();
    if counts[..] != t.stage_counts[..counts.len()] {
        out.push(format!(
            "stage counts {:?} != {:?}",
            counts,
            &t.stage_counts[..counts.len()]
        ));
    }
    let rows = FilterReport::rows;
    if let Some(s) = r.stage(1) {
        out.extend(row_diff("filter 1", rows(&s.excluded), &t.filter1_rows));
    }
    if let (Some(s), Some(a)) = (r.stage(2), &r.apolar) {
        out.extend(row_diff("filter 2", rows(&s.excluded), &t.filter2_rows));
        if a.hf.len() != t.filter2_hf_count || a.betti.len() != t.filter2_betti_count {
            out.push(format!(
                "filter 2 split {}/{} != {}/{}",
                a.betti.len(),
                a.hf.len(),
                t.filter2_betti_count,
                t.filter2_hf_count
            ));
        }
    }
    if let Some(s) = r.stage(3) {
        if s.excluded.len() != t.filter3_count {
            out.push(format!(
                "filter 3 count {} != {}",
                s.excluded.len(),
                t.filter3_count
            ));
        }
        out.extend(row_diff(
            "filter 3 survivors",
            rows(&s.survivors),
            &t.filter3_survivor_rows,
        ));
    }
    if let (Some(s), Some(c)) = (r.stage(4), &r.cycles) {
        let cap: BTreeSet<Pair> = t.filter4_capacity.iter().copied().collect();
        let rank: BTreeSet<Pair> = t.filter4_rank.iter().copied().collect();
        if c.capacity != cap {
            out.push(format!("filter 4 capacity {:?} != {:?}", c.capacity, cap));
        }
        if c.rank != rank {
            out.push(format!("filter 4 rank {:?} != {:?}", c.rank, rank));
        }
        out.extend(row_diff(
            "filter 4 survivors",
            rows(&s.survivors),
            &t.filter4_survivor_rows,
        ));
    }
    if let Some(s) = r.stage(5) {
        if !s.survivors.is_empty() {
            out.push(format!("filter 5 survivors {:?}", s.survivors));
        }
    }
    out
}

/// Hessian ranks along the curve components, freshly computed on sampled
/// normal forms, substituted into the published packages.
pub fn recomputed_packages(
    seed: u64,
    field: &PrimeField,
) -> Result<BTreeMap<usize, CyclePackage>, crate::singular::SingularError> {
    let mut out = BTreeMap::new();
    for &k in golden::filters().cycle_packages.keys() {
        let r = crate::singular::verify_singular_locus(k, seed, field)?;
        let mut pkg: CyclePackage = r
            .components
            .iter()
            .filter(|c| c.claimed_dim == 1)
            .map(|c| CurveComponent {
                d: c.claimed_degree as u32,
                m: c.multiplicity.unwrap_or(0) as u32,
                rho: c.hessian_rank.unwrap_or(0) as u32,
            })
            .collect();
        pkg.sort();
        out.insert(k, pkg);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::tabulated_states;

    fn dims() -> BTreeMap<usize, u32> {
        golden::states().iter().map(|s| (s.k, s.dim_phi)).collect()
    }

    #[test]
    fn filter1_published() {
        let pairs = all_pairs(38);
        assert_eq!(pairs.len(), 1406);
        let ex = filter1_dimension(&pairs, &dims());
        assert_eq!(ex.len(), 647);
        assert!(ex.contains(&(3, 1)));
        assert!(!ex.iter().any(|&(k, _)| k == 1));
        assert_eq!(FilterReport::rows(&ex)[&8], vec![1, 26]);
        for &(k, l) in &ex {
            assert!(!ex.contains(&(l, k)));
        }
    }

    #[test]
    fn filter2_published() {
        let pairs = all_pairs(38);
        let f1 = filter1_dimension(&pairs, &dims());
        let rest: BTreeSet<Pair> = pairs.difference(&f1).copied().collect();
        let t = golden::filters();
        let generic = ApolarProfile {
            hf: t.apolar_hf.generic,
        };
        let profiles: BTreeMap<usize, ApolarProfile> = (1..=38)
            .map(|k| {
                (
                    k,
                    if k == 38 {
                        ApolarProfile {
                            hf: t.apolar_hf.k38,
                        }
                    } else {
                        generic
                    },
                )
            })
            .collect();
        let betti: BTreeMap<usize, BettiTable> =
            (1..=38).map(|k| (k, betti_table_for(k).unwrap())).collect();
        let ex = filter2_apolar(&rest, &profiles, &betti);
        assert_eq!((ex.betti.len(), ex.hf.len()), (273, 36));
        assert!(ex.hf.contains(&(23, 38)));
        assert_eq!(rest.len() - ex.all().len(), 450);
        let got = FilterReport::rows(&ex.all());
        for (k, want) in &t.filter2_rows {
            assert_eq!(got.get(k).cloned().unwrap_or_default(), *want, "row {k}");
        }
    }

    #[test]
    fn filter3_is_reflexive_safe() {
        let hfs: BTreeMap<usize, Vec<u64>> =
            [(1, vec![1, 5, 9, 12, 12]), (2, vec![1, 5, 9, 13, 13])].into();
        let pairs: BTreeSet<Pair> = [(1, 2), (2, 1), (1, 1)].into();
        assert_eq!(filter3_singular_hf(&pairs, &hfs), [(1, 2)].into());
    }

    #[test]
    fn line_assignment() {
        let c = |d, m, rho| CurveComponent { d, m, rho };
        // two sources share one target
        assert!(lines_fit(&[c(1, 4, 2)], &[c(1, 2, 2), c(1, 2, 2)], true));
        assert!(!lines_fit(&[c(1, 3, 2)], &[c(1, 2, 2), c(1, 2, 2)], true));
        assert!(!lines_fit(&[c(1, 4, 3)], &[c(1, 4, 2)], true));
        assert!(lines_fit(&[c(1, 4, 3)], &[c(1, 4, 2)], false));
        // non-line components impose nothing
        assert!(lines_fit(&[c(4, 3, 2)], &[c(2, 9, 1)], true));
        assert!(!lines_fit(&[c(4, 3, 2)], &[c(1, 1, 3)], false));
    }

    #[test]
    fn filter4_published() {
        let t = golden::filters();
        let pairs: BTreeSet<Pair> = t
            .filter3_survivor_rows
            .iter()
            .flat_map(|(&k, ls)| ls.iter().map(move |&l| (k, l)))
            .collect();
        assert_eq!(pairs.len(), 22);
        let ex = filter4_cycles(&pairs, &published_packages());
        assert_eq!(ex.capacity, t.filter4_capacity.iter().copied().collect());
        assert_eq!(ex.rank, t.filter4_rank.iter().copied().collect());
        assert!(ex.capacity.contains(&(1, 4)) && ex.capacity.contains(&(7, 16)));
        let surv: BTreeSet<Pair> = pairs.difference(&ex.all()).copied().collect();
        assert_eq!(surv, [(18, 22), (21, 27), (24, 33), (28, 33)].into());

        let fresh = recomputed_packages(1, &PrimeField::default()).unwrap();
        let ex2 = filter4_cycles(&pairs, &fresh);
        assert_eq!(ex2.capacity, ex.capacity);
        assert_eq!(ex2.rank, ex.rank);
    }

    #[test]
    fn filter5_published() {
        let states = tabulated_states();
        let ms: BTreeMap<usize, [i64; NVARS]> =
            states.iter().map(|s| (s.k, weight_multiset(s))).collect();
        assert_eq!(ms[&18], [-5, -1, 0, 2, 4]);
        assert_eq!(ms[&22], [-19, -4, 1, 6, 16]);
        assert_eq!(ms[&24], [-21, -6, 4, 9, 14]);
        assert_eq!(ms[&33], [-3, 0, 0, 1, 2]);
        let pairs: BTreeSet<Pair> = [(18, 22), (21, 27), (24, 33), (28, 33)].into();
        assert_eq!(filter5_stabilizer(&pairs, &ms), pairs);
        let mirror: BTreeMap<usize, [i64; NVARS]> = [
            (1, [-2, -1, 0, 1, 2]),
            (2, [-2, -1, 0, 1, 2]),
            (3, [-4, -1, 0, 1, 4]),
        ]
        .into();
        assert!(filter5_stabilizer(&[(1, 2), (1, 3)].into(), &mirror) == [(1, 3)].into());
        let signed: BTreeMap<usize, [i64; NVARS]> =
            [(1, [-3, 0, 0, 1, 2]), (2, [-2, -1, 0, 0, 3])].into();
        assert!(filter5_stabilizer(&[(1, 2)].into(), &signed).is_empty());
    }
}
