//! Enumerates the maximal strictly semistable supports and prints the
//! weight vector, support size and moduli dimension of each state.
//!
//!     cargo run --release --example enumerate_states

use quintic_atlas::enumerate::{candidate_normals, enumerate_maximal_supports};

fn main() {
    let normals = candidate_normals();
    println!("{} candidate hyperplane normals", normals.len());
    let states = enumerate_maximal_supports().expect("enumeration");
    println!("{} maximal supports", states.len());
    for s in &states {
        println!(
            "{:>3}  r = {:?}  |S| = {:>3}  dim = {}",
            s.k, s.r.0, s.support_size, s.dim_phi
        );
    }
}
