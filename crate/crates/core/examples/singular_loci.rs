//! Singular loci of the normal forms: components, isolated points and
//! their local types.
//!
//!     cargo run --release --example singular_loci -- [k] [seed]

use atlas_algebra::PrimeField;
use quintic_atlas::singular::{isolated_types, verify_singular_locus};

fn main() {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(14);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    for t in isolated_types() {
        println!(
            "type {:<6} weights {:?} degree {:>2} mu {}",
            t.label, t.weights, t.degree, t.milnor
        );
    }
    let r = verify_singular_locus(k, seed, &PrimeField::default()).expect("locus");
    println!(
        "\nstate {k}: dim {} degree {} hf {:?}",
        r.projective_dim,
        r.degree,
        &r.hf[..8]
    );
    for c in &r.components {
        println!(
            "  {:<8} dim {} degree {} multiplicity {:?} hessian rank {:?}",
            c.label, c.dim, c.degree, c.multiplicity, c.hessian_rank
        );
    }
    for p in &r.points {
        println!(
            "  {:<8} {:<4} isolated {} local {:?} mu {:?}",
            p.point, p.kind, p.isolated, p.local.weights, p.local.milnor
        );
    }
    println!("  exhausted {}  failures {:?}", r.exhausted, r.failures());
}
