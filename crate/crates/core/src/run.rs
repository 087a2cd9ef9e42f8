//! Stage runners, artifact files and the consolidated report.
//!
//! Every stage produces a JSON artifact holding its computed data and a list
//! of checks against the published tables. `report` merges whatever artifacts
//! are present.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use atlas_algebra::field::is_prime;
use atlas_algebra::PrimeField;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::adjacency::{build_graph, diff_against_table, Interpretation};
use crate::apolar::{stable_profile_with, DEFAULT_PROTOCOL, DEFAULT_TRIAL_CAP};
use crate::closed_orbit::{asserted_states, verify_normal_form};
use crate::enumerate::{enumerate_maximal_supports, tabulated_states, State};
use crate::filters::{diff_against_tables, run_pipeline, FilterReport, PipelineConfig};
use crate::golden;
use crate::seeds;
use crate::singular::{
    isolated_types, milnor_number, min_exponent, verify_singular_locus, HF_WINDOW,
};

pub const REPRODUCED: &str = "ALL PUBLISHED COUNTS REPRODUCED";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("missing artifact {0}")]
    Missing(PathBuf),
    #[error("{0}")]
    Compute(String),
}

fn compute<E: fmt::Display>(e: E) -> RunError {
    RunError::Compute(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StageName {
    #[serde(rename = "closed-orbit")]
    ClosedOrbit,
    #[serde(rename = "apolar")]
    Apolar,
    #[serde(rename = "singular")]
    Singular,
    #[serde(rename = "filters")]
    Filters,
    #[serde(rename = "adjacency")]
    Adjacency,
}

impl StageName {
    pub const ALL: [StageName; 5] = [
        StageName::ClosedOrbit,
        StageName::Apolar,
        StageName::Singular,
        StageName::Filters,
        StageName::Adjacency,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StageName::ClosedOrbit => "closed-orbit",
            StageName::Apolar => "apolar",
            StageName::Singular => "singular",
            StageName::Filters => "filters",
            StageName::Adjacency => "adjacency",
        }
    }

    /// File name of the stage artifact.
    pub fn artifact(&self) -> &'static str {
        match self {
            StageName::ClosedOrbit => "closed_orbit.json",
            StageName::Apolar => "apolar.json",
            StageName::Singular => "singular.json",
            StageName::Filters => "filter_report.json",
            StageName::Adjacency => "adjacency.json",
        }
    }
}

impl fmt::Display for StageName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StageName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StageName::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown stage {s:?}"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub prime: u32,
    pub seed: u64,
    pub protocol: usize,
    pub trial_cap: usize,
    pub window: u32,
    pub interpretation: Interpretation,
    pub out: PathBuf,
    /// Last filter stage to run.
    pub stage: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prime: atlas_algebra::DEFAULT_PRIME,
            seed: 0,
            protocol: DEFAULT_PROTOCOL,
            trial_cap: DEFAULT_TRIAL_CAP,
            window: HF_WINDOW,
            interpretation: Interpretation::default(),
            out: PathBuf::from("atlas-out"),
            stage: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        if !is_prime(self.prime as u64) || PrimeField::new(self.prime).is_none() {
            return Err(RunError::Config(format!(
                "{} is not a usable prime",
                self.prime
            )));
        }
        if self.protocol < 2 {
            return Err(RunError::Config(format!("protocol {} < 2", self.protocol)));
        }
        if self.window < 5 {
            return Err(RunError::Config(format!("window {} < 5", self.window)));
        }
        if let Some(s) = self.stage {
            if !(1..=5).contains(&s) {
                return Err(RunError::Config(format!("stage {s} outside 1..=5")));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.prime).expect("validated prime")
    }
}

/// One published claim and whether the run reproduced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub claim: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(claim: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            claim: claim.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageOutcome {
    pub stage: String,
    pub checks: Vec<Check>,
    pub data: Value,
    /// Extra files written next to the artifact.
    #[serde(skip)]
    pub extra: Vec<(String, String)>,
}

impl StageOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({ "stage": self.stage, "checks": self.checks, "data": self.data })
    }
}

/// Writes `bytes` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("artifact");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn write_json(path: &Path, v: &Value) -> Result<(), RunError> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

pub fn read_json(path: &Path) -> Result<Value, RunError> {
    let s = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => RunError::Missing(path.to_path_buf()),
        _ => RunError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    serde_json::from_str(&s).map_err(|source| RunError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn pairs_json(set: &std::collections::BTreeSet<(usize, usize)>) -> Value {
    json!(set.iter().map(|&(k, l)| [k, l]).collect::<Vec<_>>())
}

pub fn states_json(states: &[State]) -> Value {
    json!({
        "count": states.len(),
        "states": states.iter().map(|s| json!({
            "k": s.k,
            "r": s.r.0,
            "support_size": s.support_size,
            "wall_size": s.wall.len(),
            "dim_phi": s.dim_phi,
        })).collect::<Vec<_>>(),
    })
}

pub fn states_csv(states: &[State]) -> String {
    let mut s = String::from("k,r0,r1,r2,r3,r4,support_size\n");
    for st in states {
        let r = st.r.0;
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            st.k, r[0], r[1], r[2], r[3], r[4], st.support_size
        ));
    }
    s
}

/// Runs the support search from scratch and checks it against the table.
pub fn run_enumerate() -> Result<(Vec<State>, Vec<Check>), RunError> {
    let states = enumerate_maximal_supports().map_err(compute)?;
    let mut checks = vec![Check::new(
        "38 maximal strictly semistable supports",
        states.len() == 38,
        "",
    )];
    let bad: Vec<usize> = states
        .iter()
        .zip(golden::states())
        .filter(|(s, row)| s.k != row.k || s.r.0 != row.r || s.support_size != row.support_size)
        .map(|(s, _)| s.k)
        .collect();
    checks.push(Check::new(
        "normals and support sizes match the state table",
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("rows {bad:?}")
        },
    ));
    Ok((states, checks))
}

pub fn run_closed_orbit(cfg: &RunConfig) -> Result<StageOutcome, RunError> {
    let field = cfg.field();
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for st in golden::states() {
        let r = verify_normal_form(st.k, cfg.seed, &field).map_err(compute)?;
        if !r.passed() {
            failed.push(format!("{}: {:?}", st.k, r.failures()));
        }
        rows.push(r);
    }
    let asserted = asserted_states();
    let dims_ok = rows
        .iter()
        .filter(|r| asserted.contains(&r.k))
        .all(|r| r.dimension.holds && r.lie_stabilizer_dim == 1);
    let checks = vec![
        Check::new(
            "closed-orbit test holds for every normal form",
            rows.iter()
                .all(|r| r.certificate.verdict && r.support_in_wall),
            "",
        ),
        Check::new(
            format!("dimension identity and finite stabilizer for states {asserted:?}"),
            dims_ok,
            "",
        ),
        Check::new(
            "every certificate re-verifies",
            failed.is_empty(),
            failed.join("; "),
        ),
    ];
    Ok(StageOutcome {
        stage: StageName::ClosedOrbit.to_string(),
        checks,
        data: json!({ "normal_forms": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>() }),
        extra: vec![],
    })
}

pub fn run_apolar(cfg: &RunConfig) -> Result<StageOutcome, RunError> {
    let field = cfg.field();
    let t = &golden::filters().apolar_hf;
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for st in tabulated_states() {
        let s = &st.support;
        let mut rng = seeds::rng(cfg.seed, "apolar", s.0 as u64 ^ (s.0 >> 64) as u64);
        let sp = stable_profile_with(s, cfg.protocol, cfg.trial_cap, &field, &mut rng)
            .map_err(compute)?;
        let want = if st.k == 38 { t.k38 } else { t.generic };
        if sp.profile.hf != want || !sp.profile.is_symmetric() {
            bad.push(st.k);
        }
        rows.push(json!({ "k": st.k, "hf": sp.profile.hf, "trials": sp.trials, "betti_type": golden::betti_type(st.k) }));
    }
    let checks = vec![Check::new(
        format!(
            "apolar profiles {:?} for k = 1..37 and {:?} for k = 38",
            t.generic, t.k38
        ),
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("rows {bad:?}")
        },
    )];
    Ok(StageOutcome {
        stage: StageName::Apolar.to_string(),
        checks,
        data: json!({ "profiles": rows }),
        extra: vec![],
    })
}

pub fn run_singular(cfg: &RunConfig) -> Result<StageOutcome, RunError> {
    let field = cfg.field();
    let mut checks = Vec::new();
    let mut types = Vec::new();
    let mut milnor_ok = true;
    let mut exponent_ok = true;
    for t in isolated_types() {
        let mu = milnor_number(&t.weights, t.degree).map_err(compute)?;
        let e = min_exponent(&t.weights, t.degree).map_err(compute)?;
        milnor_ok &= mu == t.milnor as u64;
        exponent_ok &= e == num_traits::One::one() && t.weights.iter().sum::<u32>() == t.degree;
        types.push(json!({ "label": t.label, "weights": t.weights, "degree": t.degree, "milnor": mu, "min_exponent": e.to_string() }));
    }
    let mus: Vec<u32> = isolated_types().iter().map(|t| t.milnor).collect();
    checks.push(Check::new(format!("Milnor numbers {mus:?}"), milnor_ok, ""));
    checks.push(Check::new(
        "minimal exponents equal 1 and weights sum to the degree",
        exponent_ok,
        "",
    ));

    let mut loci = Vec::new();
    let mut failed = Vec::new();
    let mut packages_ok = true;
    for k in 1..=golden::states().len() {
        let r = verify_singular_locus(k, cfg.seed, &field).map_err(compute)?;
        if !r.passed() {
            failed.push(format!("{k}: {:?}", r.failures()));
        }
        packages_ok &= r.cycle_package != Some(false);
        loci.push(serde_json::to_value(&r).expect("serializable"));
    }
    checks.push(Check::new(
        "singular loci verified for all states",
        failed.is_empty(),
        failed.join("; "),
    ));
    checks.push(Check::new(
        "curve packages (d, m, rho) match the recorded table",
        packages_ok,
        "",
    ));
    Ok(StageOutcome {
        stage: StageName::Singular.to_string(),
        checks,
        data: json!({ "isolated_types": types, "loci": loci }),
        extra: vec![],
    })
}

pub fn filters_csv(r: &FilterReport) -> String {
    let mut s = String::from("stage,name,k,l\n");
    for (i, st) in r.stages.iter().enumerate() {
        for (k, l) in &st.excluded {
            s.push_str(&format!("{},{},{},{}\n", i + 1, st.name, k, l));
        }
    }
    s
}

pub fn run_filters(cfg: &RunConfig) -> Result<StageOutcome, RunError> {
    let pc = PipelineConfig {
        seed: cfg.seed,
        protocol: cfg.protocol,
        cap: cfg.trial_cap,
        last_stage: cfg.stage.unwrap_or(5),
        ..Default::default()
    };
    let r = run_pipeline(&tabulated_states(), &cfg.field(), &pc).map_err(compute)?;
    let counts = r.counts();
    let want = &golden::filters().stage_counts[..counts.len()];
    let diff = diff_against_tables(&r);
    let checks = vec![
        Check::new(
            format!("stage counts {want:?}"),
            counts == want,
            format!("{counts:?}"),
        ),
        Check::new(
            "exclusion and survivor sets match the published tables",
            diff.is_empty(),
            diff.join("; "),
        ),
        Check::new("stages partition the ordered pairs", r.is_partition(), ""),
    ];
    let data = json!({
        "counts": counts,
        "stages": r.stages.iter().map(|s| json!({
            "name": s.name,
            "excluded_count": s.excluded.len(),
            "survivor_count": s.survivors.len(),
            "excluded": pairs_json(&s.excluded),
            "survivors": pairs_json(&s.survivors),
        })).collect::<Vec<_>>(),
        "apolar_split": r.apolar.as_ref().map(|a| json!({ "hf": pairs_json(&a.hf), "betti": pairs_json(&a.betti) })),
        "cycle_split": r.cycles.as_ref().map(|c| json!({ "capacity": pairs_json(&c.capacity), "rank": pairs_json(&c.rank) })),
        "apolar_profiles": r.apolar_profiles,
        "singular_hf": r.singular_hf,
    });
    Ok(StageOutcome {
        stage: StageName::Filters.to_string(),
        checks,
        data,
        extra: vec![("filter_report.csv".into(), filters_csv(&r))],
    })
}

pub fn run_adjacency(cfg: &RunConfig) -> Result<StageOutcome, RunError> {
    let states = tabulated_states();
    let t = golden::adjacency();
    let g = build_graph(&states, cfg.interpretation);
    let (max_d, max_v) = g.degree_extreme(true);
    let (min_d, min_v) = g.degree_extreme(false);
    let diff = diff_against_table(&g);
    let checks = vec![
        Check::new(
            format!("{} vertices", t.vertices),
            g.vertices.len() == t.vertices,
            "",
        ),
        Check::new(
            format!("{} mutual edges", t.edges),
            g.mutual_edges.len() == t.edges,
            g.mutual_edges.len().to_string(),
        ),
        Check::new(
            format!("{} one-sided arrows", t.one_sided),
            g.one_sided.len() == t.one_sided,
            g.one_sided.len().to_string(),
        ),
        Check::new(
            "connected without isolated vertices",
            g.connected == t.connected && g.isolated().is_empty(),
            "",
        ),
        Check::new(
            format!("diameter {}", t.diameter),
            g.diameter == Some(t.diameter),
            format!("{:?}", g.diameter),
        ),
        Check::new(
            format!(
                "maximum degree {} at {:?}",
                t.max_degree.value, t.max_degree.vertices
            ),
            (max_d, &max_v) == (t.max_degree.value, &t.max_degree.vertices),
            format!("{max_d} at {max_v:?}"),
        ),
        Check::new(
            format!(
                "minimum degree {} at {:?}",
                t.min_degree.value, t.min_degree.vertices
            ),
            (min_d, &min_v) == (t.min_degree.value, &t.min_degree.vertices),
            format!("{min_d} at {min_v:?}"),
        ),
        Check::new(
            "every neighbor set equals its table row",
            diff.exact(),
            format!(
                "{} rows match, {} extra, {} missing",
                diff.rows_matching,
                diff.extra.len(),
                diff.missing.len()
            ),
        ),
    ];
    let per_interp: Vec<Value> = Interpretation::ALL
        .into_iter()
        .map(|i| {
            serde_json::to_value(diff_against_table(&build_graph(&states, i)))
                .expect("serializable")
        })
        .collect();
    let data = json!({
        "interpretation": cfg.interpretation,
        "graph": g,
        "diff": diff,
        "interpretations": per_interp,
    });
    let mut edges = String::from("k,l,kind\n");
    for (a, b) in &g.mutual_edges {
        edges.push_str(&format!("{a},{b},mutual\n"));
    }
    for (a, b) in &g.one_sided {
        edges.push_str(&format!("{a},{b},one-sided\n"));
    }
    Ok(StageOutcome {
        stage: StageName::Adjacency.to_string(),
        checks,
        data,
        extra: vec![
            ("adjacency.dot".into(), g.to_dot()),
            ("arrows.dot".into(), g.arrows_dot()),
            ("adjacency.csv".into(), edges),
        ],
    })
}

pub fn run_stage(stage: StageName, cfg: &RunConfig) -> Result<StageOutcome, RunError> {
    cfg.validate()?;
    match stage {
        StageName::ClosedOrbit => run_closed_orbit(cfg),
        StageName::Apolar => run_apolar(cfg),
        StageName::Singular => run_singular(cfg),
        StageName::Filters => run_filters(cfg),
        StageName::Adjacency => run_adjacency(cfg),
    }
}

/// Writes the stage artifact; CSV side files only when `csv` is set, DOT
/// files always.
pub fn write_stage(out: &Path, o: &StageOutcome, csv: bool) -> Result<PathBuf, RunError> {
    let stage: StageName = o.stage.parse().map_err(RunError::Config)?;
    let path = out.join(stage.artifact());
    write_json(&path, &o.to_json())?;
    for (name, body) in &o.extra {
        if csv || !name.ends_with(".csv") {
            write_atomic(&out.join(name), body.as_bytes())?;
        }
    }
    Ok(path)
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub stages: BTreeMap<String, Vec<Check>>,
    pub missing: Vec<String>,
}

impl Report {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .missing
            .iter()
            .map(|m| format!("missing artifact {m}"))
            .collect();
        for (stage, checks) in &self.stages {
            for c in checks.iter().filter(|c| !c.pass) {
                out.push(format!("{stage}: {}", c.claim));
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({ "stages": self.stages, "missing": self.missing, "failures": self.failures(), "passed": self.passed() })
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (stage, checks) in &self.stages {
            for c in checks {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                s.push_str(&format!("{mark} {stage}: {}", c.claim));
                if !c.pass && !c.detail.is_empty() {
                    s.push_str(&format!(" ({})", c.detail));
                }
                s.push('\n');
            }
        }
        for m in &self.missing {
            s.push_str(&format!("MISSING {m}\n"));
        }
        if self.passed() {
            s.push_str(REPRODUCED);
        } else {
            s.push_str(&format!(
                "{} claim(s) not reproduced",
                self.failures().len()
            ));
        }
        s.push('\n');
        s
    }
}

/// Merges the stage artifacts found in `out` (and `states.json`).
pub fn build_report(out: &Path) -> Result<Report, RunError> {
    let mut stages = BTreeMap::new();
    let mut missing = Vec::new();
    let mut names: Vec<(&str, String)> = vec![("enumerate", "states.json".into())];
    names.extend(
        StageName::ALL
            .iter()
            .map(|s| (s.as_str(), s.artifact().to_string())),
    );
    for (stage, file) in names {
        match read_json(&out.join(&file)) {
            Ok(v) => {
                let checks: Vec<Check> =
                    serde_json::from_value(v["checks"].clone()).map_err(|source| {
                        RunError::Json {
                            path: out.join(&file),
                            source,
                        }
                    })?;
                stages.insert(stage.to_string(), checks);
            }
            Err(RunError::Missing(_)) => missing.push(file),
            Err(e) => return Err(e),
        }
    }
    Ok(Report { stages, missing })
}
