use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use quintic_atlas::adjacency::Interpretation;
use quintic_atlas::run::{
    build_report, run_enumerate, run_stage, states_csv, states_json, write_atomic, write_json,
    write_stage, Check, RunConfig, RunError, StageName,
};

#[derive(Parser)]
#[command(
    name = "atlas",
    version,
    about = "Boundary atlas of quintic threefolds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Prime for modular computations.
    #[arg(long, global = true, default_value_t = atlas_algebra::DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Consecutive agreeing trials required by the stability protocol.
    #[arg(long, global = true, default_value_t = 4)]
    protocol: usize,
    /// Output directory.
    #[arg(long, global = true, env = "ATLAS_OUT", default_value = "atlas-out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Interp::P1)]
    interpretation: Interp,
    /// Last filter stage to run (1..=5).
    #[arg(long, global = true)]
    stage: Option<usize>,
    /// Also write CSV exports.
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    /// Print JSON only, no prose.
    #[arg(long, global = true)]
    json_only: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the maximal strictly semistable supports.
    Enumerate,
    /// Run a stage and compare it with the published tables.
    Verify {
        #[arg(value_enum, value_name = "STAGE")]
        target: VerifyStage,
    },
    /// Merge the stage artifacts into one report.
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyStage {
    ClosedOrbit,
    Apolar,
    Singular,
    Filters,
    Adjacency,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Interp {
    #[value(name = "P1")]
    P1,
    #[value(name = "P2")]
    P2,
    #[value(name = "P3")]
    P3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
}

fn print_checks(name: &str, checks: &[Check]) {
    for c in checks {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        if c.pass || c.detail.is_empty() {
            println!("{mark} {name}: {}", c.claim);
        } else {
            println!("{mark} {name}: {} ({})", c.claim, c.detail);
        }
    }
}

fn run(cli: Cli) -> Result<bool, RunError> {
    let cfg = RunConfig {
        prime: cli.prime,
        seed: cli.seed,
        protocol: cli.protocol,
        interpretation: match cli.interpretation {
            Interp::P1 => Interpretation::P1,
            Interp::P2 => Interpretation::P2,
            Interp::P3 => Interpretation::P3,
        },
        out: cli.out.clone(),
        stage: cli.stage,
        ..Default::default()
    };
    cfg.validate()?;
    let csv = cli.emit.is_some();
    match cli.cmd {
        Cmd::Enumerate => {
            let (states, checks) = run_enumerate()?;
            let mut v = states_json(&states);
            v["checks"] = json!(checks);
            write_json(&cfg.out.join("states.json"), &v)?;
            if csv {
                write_atomic(&cfg.out.join("states.csv"), states_csv(&states).as_bytes())?;
            }
            if cli.json_only {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable")
                );
            } else {
                println!("{} states written to {}", states.len(), cfg.out.display());
                print_checks("enumerate", &checks);
            }
            Ok(checks.iter().all(|c| c.pass))
        }
        Cmd::Verify { target } => {
            let stages: Vec<StageName> = match target {
                VerifyStage::ClosedOrbit => vec![StageName::ClosedOrbit],
                VerifyStage::Apolar => vec![StageName::Apolar],
                VerifyStage::Singular => vec![StageName::Singular],
                VerifyStage::Filters => vec![StageName::Filters],
                VerifyStage::Adjacency => vec![StageName::Adjacency],
                VerifyStage::All => StageName::ALL.to_vec(),
            };
            let mut ok = true;
            let mut all = Vec::new();
            for s in stages {
                let o = run_stage(s, &cfg)?;
                let path = write_stage(&cfg.out, &o, csv)?;
                ok &= o.passed();
                if cli.json_only {
                    all.push(json!({ "stage": o.stage, "checks": o.checks }));
                } else {
                    println!("{} -> {}", s, path.display());
                    print_checks(s.as_str(), &o.checks);
                }
            }
            if cli.json_only {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&all).expect("serializable")
                );
            }
            Ok(ok)
        }
        Cmd::Report => {
            let r = build_report(&cfg.out)?;
            let v = r.to_json();
            write_json(&cfg.out.join("report.json"), &v)?;
            if cli.json_only {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable")
                );
            } else {
                print!("{}", r.summary());
            }
            Ok(r.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("atlas: {e}");
            ExitCode::from(2)
        }
    }
}
