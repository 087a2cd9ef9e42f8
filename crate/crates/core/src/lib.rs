//! Computational atlas of the GIT boundary of quintic threefolds.
//!
//! The crate enumerates the maximal strictly semistable monomial supports,
//! certifies closed-orbit normal forms, computes the invariants that separate
//! the boundary components, and builds their wall-adjacency graph.

pub mod adjacency;
pub mod apolar;
pub mod closed_orbit;
pub mod enumerate;
pub mod expr;
pub mod filters;
pub mod forms;
pub mod golden;
pub mod lattice;
pub mod normal_forms;
pub mod run;
pub mod seeds;
pub mod singular;
