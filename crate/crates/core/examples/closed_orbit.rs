//! Certifies that each normal form has a closed orbit, printing the test
//! used and its witness.
//!
//!     cargo run --release --example closed_orbit -- [k] [seed]

use atlas_algebra::PrimeField;
use quintic_atlas::closed_orbit::verify_normal_form;

fn main() {
    let mut args = std::env::args().skip(1);
    let only: Option<usize> = args.next().and_then(|s| s.parse().ok());
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let field = PrimeField::default();
    for k in 1..=38 {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let r = verify_normal_form(k, seed, &field).expect("normal form");
        let status = if r.passed() {
            "ok".to_string()
        } else {
            r.failures().join(", ")
        };
        println!(
            "{k:>3} {:?} |S| = {:>3} stab = {} {status}",
            r.test,
            r.certificate.support.len(),
            r.lie_stabilizer_dim
        );
        if only.is_some() {
            println!(
                "{}",
                serde_json::to_string_pretty(&r.to_json()).expect("json")
            );
        }
    }
}
