//! Exact arithmetic kernels: prime and rational fields, dense linear
//! algebra, an exact simplex solver, and a Buchberger engine with ideal
//! quotients, saturation and Hilbert functions.

pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod lp;
pub mod matrix;
pub mod mono;
pub mod poly;

pub use field::{Field, PrimeField, Rat, RationalField, DEFAULT_PRIME};
pub use groebner::{buchberger, GroebnerBasis};
pub use hilbert::HilbertData;
pub use matrix::Matrix;
pub use mono::{Mono, MonoOrder};
pub use poly::{Poly, Ring};
