//! The degree-5 exponent lattice in five variables.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use atlas_algebra::lp;

pub const NVARS: usize = 5;
pub const DEGREE: u32 = 5;
/// Number of degree-5 monomials in 5 variables.
pub const LATTICE_SIZE: usize = 126;
/// The barycenter of the lattice simplex.
pub const ETA: ExponentVector = ExponentVector([1, 1, 1, 1, 1]);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExponentVector(pub [u8; NVARS]);

impl ExponentVector {
    /// Returns `None` unless the entries sum to 5.
    pub fn new(u: [u8; NVARS]) -> Option<Self> {
        (u.iter().map(|&x| x as u32).sum::<u32>() == DEGREE).then_some(ExponentVector(u))
    }

    pub fn dot(&self, r: &WeightVector) -> i64 {
        self.0
            .iter()
            .zip(r.0.iter())
            .map(|(&u, &w)| u as i64 * w)
            .sum()
    }

    /// Position in the canonical lexicographic order of the lattice.
    pub fn index(&self) -> usize {
        lattice_tables().index[code(&self.0)] as usize
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }

    /// `u - η` as an integer vector.
    pub fn shift(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64 - 1).collect()
    }

    pub fn permuted(&self, sigma: &Perm) -> Self {
        let mut out = [0u8; NVARS];
        for i in 0..NVARS {
            out[sigma.0[i] as usize] = self.0[i];
        }
        ExponentVector(out)
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

fn code(u: &[u8; NVARS]) -> usize {
    u.iter().fold(0, |acc, &x| acc * 6 + x as usize)
}

struct LatticeTables {
    points: Vec<ExponentVector>,
    index: Vec<u8>,
}

fn lattice_tables() -> &'static LatticeTables {
    static TABLES: OnceLock<LatticeTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut points = Vec::with_capacity(LATTICE_SIZE);
        for a in 0..=5u8 {
            for b in 0..=5 - a {
                for c in 0..=5 - a - b {
                    for d in 0..=5 - a - b - c {
                        points.push(ExponentVector([a, b, c, d, 5 - a - b - c - d]));
                    }
                }
            }
        }
        let mut index = vec![u8::MAX; 6usize.pow(5)];
        for (i, p) in points.iter().enumerate() {
            index[code(&p.0)] = i as u8;
        }
        LatticeTables { points, index }
    })
}

/// All 126 exponent vectors in lexicographic order.
pub fn lattice_points() -> &'static [ExponentVector] {
    &lattice_tables().points
}

/// A nonzero integer vector, read as a diagonal one-parameter subgroup.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeightVector(pub [i64; NVARS]);

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl WeightVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn neg(&self) -> Self {
        WeightVector(self.0.map(|x| -x))
    }

    /// Divide by the gcd of the entries. Zero stays zero.
    pub fn reduced(&self) -> Self {
        let g = self.0.iter().fold(0i64, |g, &x| gcd(g, x));
        if g <= 1 {
            *self
        } else {
            WeightVector(self.0.map(|x| x / g))
        }
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Entries sorted into the dominant chamber.
    pub fn dominant(&self) -> Self {
        let mut v = self.0;
        v.sort_unstable_by(|a, b| b.cmp(a));
        WeightVector(v)
    }

    pub fn permuted(&self, sigma: &Perm) -> Self {
        apply_permutation(sigma, self)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A permutation of the five coordinates: entry `i` moves to slot `σ(i)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm(pub [u8; NVARS]);

impl Perm {
    pub fn identity() -> Self {
        Perm([0, 1, 2, 3, 4])
    }

    pub fn inverse(&self) -> Self {
        let mut out = [0u8; NVARS];
        for i in 0..NVARS {
            out[self.0[i] as usize] = i as u8;
        }
        Perm(out)
    }
}

/// All 120 permutations of five letters, in lexicographic order.
pub fn all_perms() -> &'static [Perm] {
    static PERMS: OnceLock<Vec<Perm>> = OnceLock::new();
    PERMS.get_or_init(|| {
        let mut out = Vec::with_capacity(120);
        let mut cur = [0u8; NVARS];
        fn rec(pos: usize, used: u8, cur: &mut [u8; NVARS], out: &mut Vec<Perm>) {
            if pos == NVARS {
                out.push(Perm(*cur));
                return;
            }
            for v in 0..NVARS as u8 {
                if used & (1 << v) == 0 {
                    cur[pos] = v;
                    rec(pos + 1, used | (1 << v), cur, out);
                }
            }
        }
        rec(0, 0, &mut cur, &mut out);
        out
    })
}

/// Coordinates of `r` moved according to `σ`: `(σ·r)[σ(i)] = r[i]`.
pub fn apply_permutation(sigma: &Perm, r: &WeightVector) -> WeightVector {
    let mut out = [0i64; NVARS];
    for i in 0..NVARS {
        out[sigma.0[i] as usize] = r.0[i];
    }
    WeightVector(out)
}

/// Index maps of all 120 permutations acting on the lattice.
fn perm_index_tables() -> &'static Vec<[u8; LATTICE_SIZE]> {
    static T: OnceLock<Vec<[u8; LATTICE_SIZE]>> = OnceLock::new();
    T.get_or_init(|| {
        all_perms()
            .iter()
            .map(|s| {
                let mut m = [0u8; LATTICE_SIZE];
                for (i, u) in lattice_points().iter().enumerate() {
                    m[i] = u.permuted(s).index() as u8;
                }
                m
            })
            .collect()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
    Gt,
}

/// A subset of the lattice, stored as a bitmask over canonical indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MonomialSet(pub u128);

impl MonomialSet {
    pub fn empty() -> Self {
        MonomialSet(0)
    }

    pub fn full() -> Self {
        MonomialSet((1u128 << LATTICE_SIZE) - 1)
    }

    pub fn from_points<'a>(pts: impl IntoIterator<Item = &'a ExponentVector>) -> Self {
        let mut m = 0u128;
        for p in pts {
            m |= 1u128 << p.index();
        }
        MonomialSet(m)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, u: &ExponentVector) -> bool {
        self.0 >> u.index() & 1 == 1
    }

    pub fn insert(&mut self, u: &ExponentVector) {
        self.0 |= 1u128 << u.index();
    }

    pub fn is_subset(&self, other: &MonomialSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &MonomialSet) -> Self {
        MonomialSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: &MonomialSet) -> Self {
        MonomialSet(self.0 & other.0)
    }

    pub fn difference(&self, other: &MonomialSet) -> Self {
        MonomialSet(self.0 & !other.0)
    }

    /// Members in canonical (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = ExponentVector> + '_ {
        let pts = lattice_points();
        (0..LATTICE_SIZE)
            .filter(move |&i| self.0 >> i & 1 == 1)
            .map(move |i| pts[i])
    }

    pub fn to_vec(&self) -> Vec<ExponentVector> {
        self.iter().collect()
    }

    /// Image under the coordinate permutation with the given index in
    /// [`all_perms`].
    pub fn permuted_by_index(&self, perm_index: usize) -> Self {
        let table = &perm_index_tables()[perm_index];
        let mut out = 0u128;
        let mut bits = self.0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out |= 1u128 << table[i];
        }
        MonomialSet(out)
    }

    pub fn permuted(&self, sigma: &Perm) -> Self {
        let i = all_perms()
            .iter()
            .position(|p| p == sigma)
            .expect("valid permutation");
        self.permuted_by_index(i)
    }

    /// All 120 permuted images (with repetitions).
    pub fn orbit(&self) -> Vec<MonomialSet> {
        (0..all_perms().len())
            .map(|i| self.permuted_by_index(i))
            .collect()
    }

    /// The smallest bitmask in the permutation orbit; equal for equivalent sets.
    pub fn canonical(&self) -> MonomialSet {
        self.orbit().into_iter().min().expect("nonempty orbit")
    }

    /// Whether some coordinate permutation maps `self` into `other`.
    pub fn embeds_in(&self, other: &MonomialSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        (0..all_perms().len()).any(|i| self.permuted_by_index(i).is_subset(other))
    }
}

impl fmt::Debug for MonomialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for MonomialSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[u8; NVARS]> = self.iter().map(|u| u.0).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonomialSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<[u8; NVARS]> = Vec::deserialize(d)?;
        let mut m = MonomialSet::empty();
        for u in v {
            let e = ExponentVector::new(u)
                .ok_or_else(|| serde::de::Error::custom(format!("{u:?} is not of degree 5")))?;
            m.insert(&e);
        }
        Ok(m)
    }
}

/// The full lattice `I`.
pub fn full_lattice() -> MonomialSet {
    MonomialSet::full()
}

/// `{u ∈ I : r·u ⋈ 0}`.
pub fn halfspace(r: &WeightVector, rel: Relation) -> MonomialSet {
    let mut m = 0u128;
    for (i, u) in lattice_points().iter().enumerate() {
        let d = u.dot(r);
        let keep = match rel {
            Relation::Ge => d >= 0,
            Relation::Eq => d == 0,
            Relation::Gt => d > 0,
        };
        if keep {
            m |= 1u128 << i;
        }
    }
    MonomialSet(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarycenterPosition {
    Stable,
    StrictlySemistable,
    Unstable,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("empty monomial set")]
    EmptySet,
}

/// Position of `η` relative to `Conv(S)`: relative interior, boundary, or
/// outside.
pub fn barycenter_position(s: &MonomialSet) -> Result<BarycenterPosition, LatticeError> {
    if s.is_empty() {
        return Err(LatticeError::EmptySet);
    }
    let shifts: Vec<Vec<i64>> = s.iter().map(|u| u.shift()).collect();
    if lp::positive_combination_zero(&shifts)
        .expect("uniform dimensions")
        .is_some()
    {
        return Ok(BarycenterPosition::Stable);
    }
    let pts: Vec<Vec<i64>> = s.iter().map(|u| u.to_i64()).collect();
    if lp::convex_combination(&pts, &ETA.to_i64())
        .expect("uniform dimensions")
        .is_some()
    {
        Ok(BarycenterPosition::StrictlySemistable)
    } else {
        Ok(BarycenterPosition::Unstable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_has_126_points_in_lex_order() {
        let pts = lattice_points();
        assert_eq!(pts.len(), 126);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts
            .iter()
            .all(|u| u.0.iter().map(|&x| x as u32).sum::<u32>() == 5));
        for (i, u) in pts.iter().enumerate() {
            assert_eq!(u.index(), i);
        }
        assert!(full_lattice().contains(&ExponentVector([5, 0, 0, 0, 0])));
        assert!(full_lattice().contains(&ETA));
    }

    #[test]
    fn halfspace_sizes() {
        let r1 = WeightVector([36, 1, -4, -9, -24]);
        assert_eq!(halfspace(&r1, Relation::Ge).len(), 58);
        let r38 = WeightVector([1, 1, 1, 1, -4]);
        assert_eq!(halfspace(&r38, Relation::Ge).len(), 91);
        let zero = WeightVector([0; 5]);
        assert_eq!(halfspace(&zero, Relation::Eq), full_lattice());
    }

    #[test]
    fn permutations() {
        assert_eq!(all_perms().len(), 120);
        let r = WeightVector([4, 2, 0, -1, -5]);
        assert_eq!(apply_permutation(&Perm::identity(), &r), r);
        assert_eq!(
            apply_permutation(&Perm([4, 3, 2, 1, 0]), &r),
            WeightVector([-5, -1, 0, 2, 4])
        );
        let r3 = WeightVector([3, 0, 0, -1, -2]);
        assert_eq!(
            apply_permutation(&Perm([1, 0, 2, 3, 4]), &r3),
            WeightVector([0, 3, 0, -1, -2])
        );
    }

    #[test]
    fn permuted_halfspace_is_halfspace_of_permuted_weight() {
        let r = WeightVector([12, 7, 2, -8, -13]);
        let s = halfspace(&r, Relation::Ge);
        for (i, p) in all_perms().iter().enumerate() {
            assert_eq!(
                s.permuted_by_index(i),
                halfspace(&r.permuted(p), Relation::Ge)
            );
        }
    }

    #[test]
    fn barycenter_examples() {
        assert_eq!(
            barycenter_position(&full_lattice()),
            Ok(BarycenterPosition::Stable)
        );
        let single = MonomialSet::from_points(&[ExponentVector([5, 0, 0, 0, 0])]);
        assert_eq!(
            barycenter_position(&single),
            Ok(BarycenterPosition::Unstable)
        );
        let s1 = halfspace(&WeightVector([36, 1, -4, -9, -24]), Relation::Ge);
        assert_eq!(
            barycenter_position(&s1),
            Ok(BarycenterPosition::StrictlySemistable)
        );
        assert_eq!(
            barycenter_position(&MonomialSet::empty()),
            Err(LatticeError::EmptySet)
        );
    }

    #[test]
    fn serde_roundtrip() {
        let s = halfspace(&WeightVector([1, 0, 0, 0, -1]), Relation::Eq);
        let js = serde_json::to_string(&s).unwrap();
        let back: MonomialSet = serde_json::from_str(&js).unwrap();
        assert_eq!(s, back);
    }
}
