//! Packed monomials and monomial orders.
//!
//! A monomial in at most eight variables is stored as eight exponent bytes
//! in a `u64`, variable `i` in byte `i`. Exponents must stay below 128 so
//! that byte-wise arithmetic never carries.

use std::cmp::Ordering;
use std::fmt;

pub const MAX_VARS: usize = 8;
const HIGH: u64 = 0x8080_8080_8080_8080;
const ONES: u64 = 0x0101_0101_0101_0101;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(pub u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn from_exps(e: &[u32]) -> Self {
        assert!(e.len() <= MAX_VARS);
        let mut m = 0u64;
        for (i, &x) in e.iter().enumerate() {
            assert!(x < 128, "exponent {x} out of range");
            m |= (x as u64) << (8 * i);
        }
        Mono(m)
    }

    pub fn var(i: usize) -> Self {
        Mono(1u64 << (8 * i))
    }

    #[inline]
    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    pub fn exps(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0.wrapping_mul(ONES) >> 56) as u32
    }

    #[inline]
    pub fn mul(self, o: Mono) -> Mono {
        let s = self.0 + o.0;
        debug_assert!(s & HIGH == 0, "exponent overflow");
        Mono(s)
    }

    /// Whether `self` divides `o`.
    #[inline]
    pub fn divides(self, o: Mono) -> bool {
        ((o.0 | HIGH) - self.0) & HIGH == HIGH
    }

    /// `o / self`; caller guarantees divisibility.
    #[inline]
    pub fn div_into(self, o: Mono) -> Mono {
        Mono(o.0 - self.0)
    }

    pub fn lcm(self, o: Mono) -> Mono {
        let mut m = 0u64;
        for i in 0..MAX_VARS {
            m |= (self.exp(i).max(o.exp(i)) as u64) << (8 * i);
        }
        Mono(m)
    }

    pub fn gcd(self, o: Mono) -> Mono {
        let mut m = 0u64;
        for i in 0..MAX_VARS {
            m |= (self.exp(i).min(o.exp(i)) as u64) << (8 * i);
        }
        Mono(m)
    }

    pub fn is_coprime(self, o: Mono) -> bool {
        self.gcd(o) == Mono::ONE
    }

    /// Removes every power of variable `i`.
    pub fn strip_var(self, i: usize) -> Mono {
        Mono(self.0 & !(0xffu64 << (8 * i)))
    }

    /// Permutes variables: variable `i` moves to slot `perm[i]`.
    pub fn permute(self, perm: &[usize]) -> Mono {
        let mut m = 0u64;
        for (i, &p) in perm.iter().enumerate() {
            m |= (self.exp(i) as u64) << (8 * p);
        }
        Mono(m)
    }

    pub fn fmt_vars(self, n: usize) -> String {
        let mut parts = Vec::new();
        for i in 0..n {
            match self.exp(i) {
                0 => {}
                1 => parts.push(format!("x{i}")),
                e => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_vars(MAX_VARS))
    }
}

/// Monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonoOrder {
    /// Graded reverse lexicographic with `x0 > x1 > …`.
    DegRevLex,
    /// Block order: variables with index `≥ keep` are eliminated (compared
    /// first, by degrevlex), then the remaining ones by degrevlex.
    Elim { keep: usize },
}

#[inline]
fn degrevlex(a: u64, b: u64) -> Ordering {
    let da = Mono(a).degree();
    let db = Mono(b).degree();
    if da != db {
        return da.cmp(&db);
    }
    let x = a ^ b;
    if x == 0 {
        return Ordering::Equal;
    }
    let byte = (63 - x.leading_zeros()) / 8;
    let ea = (a >> (8 * byte)) & 0xff;
    let eb = (b >> (8 * byte)) & 0xff;
    eb.cmp(&ea)
}

impl MonoOrder {
    #[inline]
    pub fn cmp(self, a: Mono, b: Mono) -> Ordering {
        match self {
            MonoOrder::DegRevLex => degrevlex(a.0, b.0),
            MonoOrder::Elim { keep } => {
                let mask = if keep >= MAX_VARS {
                    0
                } else {
                    !0u64 << (8 * keep)
                };
                degrevlex(a.0 & mask, b.0 & mask).then_with(|| degrevlex(a.0 & !mask, b.0 & !mask))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing() {
        let m = Mono::from_exps(&[1, 0, 3, 2]);
        assert_eq!(m.degree(), 6);
        assert_eq!(m.exps(4), vec![1, 0, 3, 2]);
        assert!(Mono::from_exps(&[1, 0, 1]).divides(m));
        assert!(!Mono::from_exps(&[2]).divides(m));
        assert_eq!(
            Mono::from_exps(&[0, 0, 1]).div_into(m),
            Mono::from_exps(&[1, 0, 2, 2])
        );
    }

    #[test]
    fn degrevlex_examples() {
        let o = MonoOrder::DegRevLex;
        let m = |e: &[u32]| Mono::from_exps(e);
        // x0 > x1 > x2
        assert_eq!(o.cmp(m(&[1]), m(&[0, 1])), Ordering::Greater);
        // x1^2 > x0*x2 in degrevlex
        assert_eq!(o.cmp(m(&[0, 2, 0]), m(&[1, 0, 1])), Ordering::Greater);
        // higher degree wins
        assert_eq!(o.cmp(m(&[0, 0, 2]), m(&[1])), Ordering::Greater);
    }

    #[test]
    fn elimination_order() {
        let o = MonoOrder::Elim { keep: 2 };
        let m = |e: &[u32]| Mono::from_exps(e);
        assert_eq!(o.cmp(m(&[0, 0, 1]), m(&[5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(m(&[1, 0, 1]), m(&[0, 1, 1])), Ordering::Greater);
    }
}
