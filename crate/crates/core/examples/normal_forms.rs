//! Instantiates a normal form at random parameters and checks it against
//! the generic form on the same support.
//!
//!     cargo run --release --example normal_forms -- [k] [seed]

use atlas_algebra::PrimeField;
use quintic_atlas::enumerate::tabulated_states;
use quintic_atlas::forms::{assemble_uniform_form, lie_stabilizer_dim, ops_limit};
use quintic_atlas::normal_forms::NormalForm;
use quintic_atlas::seeds;

fn main() {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let field = PrimeField::default();
    let state = tabulated_states()
        .into_iter()
        .find(|s| s.k == k)
        .expect("state");
    let nf = NormalForm::load(k).expect("normal form");
    let inst = nf
        .instantiate(&field, &mut seeds::rng(seed, "example", k as u64))
        .expect("instance");
    println!(
        "state {k}: {} terms, params {:?}",
        inst.form.len(),
        inst.env.params.keys().collect::<Vec<_>>()
    );
    println!(
        "support inside wall: {}",
        inst.form.support().is_subset(&state.wall)
    );
    println!(
        "Lie stabilizer dimension: {}",
        lie_stabilizer_dim(&inst.form)
    );
    let generic = assemble_uniform_form(&state, seed, &field).expect("uniform form");
    let limit = ops_limit(&generic, &state.r).expect("limit");
    println!(
        "generic form on S_{k}: {} terms, limit along r: {} terms",
        generic.len(),
        limit.len()
    );
}
