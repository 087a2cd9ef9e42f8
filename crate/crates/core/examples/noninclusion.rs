//! Runs the five-stage non-inclusion pipeline and compares it with the
//! published exclusion tables.
//!
//!     cargo run --release --example noninclusion -- [seed]

use atlas_algebra::PrimeField;
use quintic_atlas::enumerate::tabulated_states;
use quintic_atlas::filters::{diff_against_tables, run_pipeline, FilterReport, PipelineConfig};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let cfg = PipelineConfig {
        seed,
        ..Default::default()
    };
    let t = std::time::Instant::now();
    let report = run_pipeline(&tabulated_states(), &PrimeField::default(), &cfg).expect("pipeline");
    println!(
        "counts {:?} in {:.1}s",
        report.counts(),
        t.elapsed().as_secs_f64()
    );
    for stage in &report.stages {
        println!(
            "{:>12}: excluded {:>4}, left {:>4}",
            stage.name,
            stage.excluded.len(),
            stage.survivors.len()
        );
    }
    if let Some(s) = report.stage(3) {
        for (k, ls) in FilterReport::rows(&s.survivors) {
            println!("  after singular-hf {k} -> {ls:?}");
        }
    }
    let diff = diff_against_tables(&report);
    if diff.is_empty() {
        println!("matches the published tables");
    } else {
        for d in diff {
            println!("MISMATCH {d}");
        }
    }
}
