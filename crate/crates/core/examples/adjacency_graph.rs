//! Builds the wall adjacency graph under each interpretation and compares
//! it with the published neighbor table.
//!
//!     cargo run --release --example adjacency_graph -- [P1|P2|P3] > graph.dot

use quintic_atlas::adjacency::{build_graph, diff_against_table, Interpretation};
use quintic_atlas::enumerate::tabulated_states;

fn main() {
    let dot_for = std::env::args().nth(1);
    let states = tabulated_states();
    for i in Interpretation::ALL {
        let g = build_graph(&states, i);
        let d = diff_against_table(&g);
        if dot_for.as_deref() == Some(&i.to_string()) {
            print!("{}", g.to_dot());
            continue;
        }
        eprintln!(
            "{i}: {} edges, {} one-sided, connected {}, diameter {:?}, isolated {:?}, {} extra, {} missing, {} rows match",
            d.edges,
            d.one_sided,
            d.connected,
            d.diameter,
            g.isolated(),
            d.extra.len(),
            d.missing.len(),
            d.rows_matching
        );
    }
}
