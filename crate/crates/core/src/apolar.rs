//! Catalecticants, apolar Hilbert functions and the Betti-table types.

use std::fmt;

use atlas_algebra::matrix::rank;
use atlas_algebra::{Field, Matrix};
use rand::Rng;
use serde::Serialize;

use crate::forms::{sample_generic_with, QuinticForm, SampleField};
use crate::golden;
use crate::lattice::{ExponentVector, MonomialSet, NVARS};
use crate::seeds;

pub const DEFAULT_PROTOCOL: usize = 4;
pub const DEFAULT_TRIAL_CAP: usize = 64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ApolarError {
    #[error("the zero form has no apolar algebra")]
    ZeroForm,
    #[error("protocol must be at least 2, got {0}")]
    Protocol(usize),
    #[error("no {protocol} consecutive agreeing profiles within {cap} trials")]
    NotStable { protocol: usize, cap: usize },
    #[error("unknown state {0}")]
    UnknownState(usize),
}

/// Exponent vectors of degree `d` in five variables, lexicographically
/// descending.
pub fn monomials_of_degree(d: u8) -> Vec<[u8; NVARS]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            for c in (0..=d - a - b).rev() {
                for e in (0..=d - a - b - c).rev() {
                    out.push([a, b, c, e, d - a - b - c - e]);
                }
            }
        }
    }
    out
}

fn falling(n: u8, k: u8) -> i64 {
    (0..k).map(|i| (n - i) as i64).product()
}

/// Rows: differential monomials `∂^v` of degree `q`; columns: monomials `x^w`
/// of degree `5 - q`; entry: the coefficient of `x^w` in `∂^v f`.
pub fn catalecticant<F: Field>(f: &QuinticForm<F>, q: u8) -> Matrix<F::Elem> {
    assert!(q <= 5, "catalecticant degree out of range");
    let field = &f.field;
    let vs = monomials_of_degree(q);
    let ws = monomials_of_degree(5 - q);
    let mut m = Matrix::filled(vs.len(), ws.len(), field.zero());
    for (i, v) in vs.iter().enumerate() {
        for (j, w) in ws.iter().enumerate() {
            let mut u = [0u8; NVARS];
            for t in 0..NVARS {
                u[t] = v[t] + w[t];
            }
            let c = f.coeff(&ExponentVector(u));
            if field.is_zero(&c) {
                continue;
            }
            let factor: i64 = (0..NVARS).map(|t| falling(u[t], v[t])).product();
            m.set(i, j, field.mul(&c, &field.from_i64(factor)));
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ApolarProfile {
    pub hf: [u32; 6],
}

impl ApolarProfile {
    pub fn length(&self) -> u32 {
        self.hf.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..6).all(|q| self.hf[q] == self.hf[5 - q])
    }

    /// `self(q) ≤ other(q)` for every `q`.
    pub fn le(&self, other: &ApolarProfile) -> bool {
        self.hf.iter().zip(&other.hf).all(|(a, b)| a <= b)
    }
}

pub fn apolar_profile<F: Field>(f: &QuinticForm<F>) -> Result<ApolarProfile, ApolarError> {
    if f.is_zero() {
        return Err(ApolarError::ZeroForm);
    }
    let mut hf = [0u32; 6];
    for q in 0..=5u8 {
        hf[q as usize] = rank(&f.field, &catalecticant(f, q)) as u32;
    }
    Ok(ApolarProfile { hf })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StableProfile {
    pub profile: ApolarProfile,
    pub trials: usize,
}

/// Samples generic forms on `s` until `protocol` consecutive profiles agree.
pub fn stable_profile_with<F: SampleField, R: Rng + ?Sized>(
    s: &MonomialSet,
    protocol: usize,
    cap: usize,
    field: &F,
    rng: &mut R,
) -> Result<StableProfile, ApolarError> {
    if protocol < 2 {
        return Err(ApolarError::Protocol(protocol));
    }
    if s.is_empty() {
        return Err(ApolarError::ZeroForm);
    }
    let mut last: Option<ApolarProfile> = None;
    let mut run = 0;
    for trial in 1..=cap {
        let p = apolar_profile(&sample_generic_with(s, rng, field))?;
        if last == Some(p) {
            run += 1;
        } else {
            last = Some(p);
            run = 1;
        }
        if run == protocol {
            return Ok(StableProfile {
                profile: p,
                trials: trial,
            });
        }
    }
    Err(ApolarError::NotStable { protocol, cap })
}

pub fn stable_profile<F: SampleField>(
    s: &MonomialSet,
    protocol: usize,
    seed: u64,
    field: &F,
) -> Result<StableProfile, ApolarError> {
    let mut rng = seeds::rng(seed, "apolar", s.0 as u64 ^ (s.0 >> 64) as u64);
    stable_profile_with(s, protocol, DEFAULT_TRIAL_CAP, field, &mut rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BettiType {
    B(u32),
    C,
    D,
}

impl fmt::Display for BettiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BettiType::B(m) => write!(f, "B{m}"),
            BettiType::C => write!(f, "C"),
            BettiType::D => write!(f, "D"),
        }
    }
}

impl std::str::FromStr for BettiType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "C" => Ok(BettiType::C),
            "D" => Ok(BettiType::D),
            _ => s
                .strip_prefix('B')
                .and_then(|m| m.parse().ok())
                .map(BettiType::B)
                .ok_or_else(|| format!("unknown Betti type {s:?}")),
        }
    }
}

/// Graded Betti numbers `β_{i,i+j}`: `grid[j][i]` with `i` the homological
/// index (column) and `j` the row of the displayed table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub kind: BettiType,
    pub grid: [[u32; 6]; 6],
}

impl BettiTable {
    pub fn b(m: u32) -> Self {
        let mut grid = [[0; 6]; 6];
        grid[0][0] = 1;
        grid[2][1] = 20;
        grid[2][2] = 35;
        grid[2][3] = m;
        grid[3][2] = m;
        grid[3][3] = 35;
        grid[3][4] = 20;
        grid[5][5] = 1;
        BettiTable {
            kind: BettiType::B(m),
            grid,
        }
    }

    pub fn c() -> Self {
        let mut grid = [[0; 6]; 6];
        grid[0][0] = 1;
        grid[2] = [0, 20, 36, 4, 1, 0];
        grid[3] = [0, 1, 4, 36, 20, 0];
        grid[5][5] = 1;
        BettiTable {
            kind: BettiType::C,
            grid,
        }
    }

    pub fn d() -> Self {
        let mut grid = [[0; 6]; 6];
        grid[0][0] = 1;
        grid[1][1] = 1;
        grid[2] = [0, 16, 30, 0, 0, 0];
        grid[3] = [0, 0, 0, 30, 16, 0];
        grid[4][4] = 1;
        grid[5][5] = 1;
        BettiTable {
            kind: BettiType::D,
            grid,
        }
    }

    pub fn of_type(t: BettiType) -> Self {
        match t {
            BettiType::B(m) => Self::b(m),
            BettiType::C => Self::c(),
            BettiType::D => Self::d(),
        }
    }

    /// `β_i = Σ_j β_{i,i+j}`.
    pub fn totals(&self) -> [u32; 6] {
        let mut t = [0; 6];
        for row in &self.grid {
            for (i, v) in row.iter().enumerate() {
                t[i] += v;
            }
        }
        t
    }

    /// Some entry of `self` is strictly below the matching entry of `other`.
    pub fn somewhere_below(&self, other: &BettiTable) -> bool {
        (0..6).any(|j| (0..6).any(|i| self.grid[j][i] < other.grid[j][i]))
    }

    /// The display as printed, with dots for zeros.
    pub fn render(&self) -> String {
        let mut s = format!("{}\n       0  1  2  3  4  5\ntotal:", self.kind);
        for t in self.totals() {
            s.push_str(&format!("{t:>3}"));
        }
        for (j, row) in self.grid.iter().enumerate() {
            s.push_str(&format!("\n{j:>5}:"));
            for v in row {
                if *v == 0 {
                    s.push_str("  .");
                } else {
                    s.push_str(&format!("{v:>3}"));
                }
            }
        }
        s
    }
}

pub fn betti_type(k: usize) -> Result<BettiType, ApolarError> {
    if !(1..=38).contains(&k) {
        return Err(ApolarError::UnknownState(k));
    }
    Ok(golden::betti_type(k)
        .parse()
        .expect("well-formed type name"))
}

pub fn betti_table_for(k: usize) -> Result<BettiTable, ApolarError> {
    Ok(BettiTable::of_type(betti_type(k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::tabulated_states;
    use crate::lattice::lattice_points;
    use atlas_algebra::PrimeField;

    fn ev(u: [u8; 5]) -> ExponentVector {
        ExponentVector::new(u).unwrap()
    }

    #[test]
    fn catalecticant_examples() {
        let fp = PrimeField::default();
        let x05 = QuinticForm::from_terms(fp, [(ev([5, 0, 0, 0, 0]), 1)]);
        assert_eq!(rank(&fp, &catalecticant(&x05, 2)), 1);
        assert_eq!(apolar_profile(&x05).unwrap().hf, [1; 6]);
        let zero = QuinticForm::zero(fp);
        assert_eq!(rank(&fp, &catalecticant(&zero, 2)), 0);
        assert_eq!(apolar_profile(&zero), Err(ApolarError::ZeroForm));
        // ∂0∂1 of x0^2 x1^3 is 2·3 x0 x1^2
        let f = QuinticForm::from_terms(fp, [(ev([2, 3, 0, 0, 0]), 1)]);
        let m = catalecticant(&f, 2);
        let vi = monomials_of_degree(2)
            .iter()
            .position(|v| *v == [1, 1, 0, 0, 0])
            .unwrap();
        let wi = monomials_of_degree(3)
            .iter()
            .position(|w| *w == [1, 2, 0, 0, 0])
            .unwrap();
        assert_eq!(*m.get(vi, wi), 6);
    }

    #[test]
    fn generic_full_profile() {
        let fp = PrimeField::default();
        let s = MonomialSet::from_points(lattice_points());
        let p = stable_profile(&s, DEFAULT_PROTOCOL, 1, &fp).unwrap();
        assert_eq!(p.profile.hf, [1, 5, 15, 15, 5, 1]);
        assert_eq!(p.trials, DEFAULT_PROTOCOL);
        let single = MonomialSet::from_points(&[ev([5, 0, 0, 0, 0])]);
        let p = stable_profile(&single, DEFAULT_PROTOCOL, 1, &fp).unwrap();
        assert_eq!(p.profile.hf, [1; 6]);
        assert_eq!(
            stable_profile(&single, 1, 1, &fp),
            Err(ApolarError::Protocol(1))
        );
    }

    #[test]
    fn published_profiles() {
        let fp = PrimeField::default();
        let tables = &golden::filters().apolar_hf;
        for st in tabulated_states() {
            let p = stable_profile(&st.support, DEFAULT_PROTOCOL, 7, &fp)
                .unwrap()
                .profile;
            assert!(p.is_symmetric());
            let expect = if st.k == 38 {
                tables.k38
            } else {
                tables.generic
            };
            assert_eq!(p.hf, expect, "k = {}", st.k);
            assert_eq!(p.length(), if st.k == 38 { 40 } else { 42 });
        }
    }

    #[test]
    fn betti_displays() {
        assert_eq!(BettiTable::b(0).totals(), [1, 20, 35, 35, 20, 1]);
        assert_eq!(BettiTable::b(14).totals(), [1, 20, 49, 49, 20, 1]);
        assert_eq!(BettiTable::c().totals(), [1, 21, 40, 40, 21, 1]);
        assert_eq!(BettiTable::d().totals(), [1, 17, 30, 30, 17, 1]);
        for t in [BettiTable::b(6), BettiTable::c(), BettiTable::d()] {
            // rows 2 and 3 mirror each other
            for i in 0..6 {
                assert_eq!(t.grid[2][i], t.grid[3][5 - i]);
            }
        }
        assert_eq!(betti_type(19).unwrap(), BettiType::B(0));
        assert_eq!(betti_type(23).unwrap(), BettiType::B(14));
        assert_eq!(betti_type(1).unwrap(), BettiType::B(8));
        assert_eq!(betti_type(38).unwrap(), BettiType::D);
        assert_eq!(
            betti_table_for(26).unwrap().totals(),
            [1, 21, 40, 40, 21, 1]
        );
        assert!(betti_type(0).is_err());
        assert!(BettiTable::c()
            .render()
            .contains("total:  1 21 40 40 21  1"));
    }
}
