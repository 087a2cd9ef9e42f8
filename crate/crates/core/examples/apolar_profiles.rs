//! Apolar Hilbert functions of generic forms on each support, with the
//! catalecticant ranks of one sample.
//!
//!     cargo run --release --example apolar_profiles -- [seed]

use atlas_algebra::matrix::rank;
use atlas_algebra::PrimeField;
use quintic_atlas::apolar::{catalecticant, stable_profile};
use quintic_atlas::enumerate::tabulated_states;
use quintic_atlas::forms::sample_generic;

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let field = PrimeField::default();
    for s in tabulated_states() {
        let p = stable_profile(&s.support, 4, 11, &field).expect("profile");
        let f = sample_generic(&s.support, seed, &field);
        let c2 = catalecticant(&f, 2);
        println!(
            "{:>3} h = {:?} length {:>3} trials {} rank C2 = {}",
            s.k,
            p.profile.hf,
            p.profile.length(),
            p.trials,
            rank(&field, &c2)
        );
    }
}
