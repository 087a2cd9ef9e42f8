//! Quintic forms: generic sampling on supports, the uniform truncated-form
//! construction, one-parameter-subgroup limits, Hessians and Lie stabilizers.

use std::collections::BTreeMap;

use atlas_algebra::matrix::{kernel_dim, rank, Matrix};
use atlas_algebra::{Field, Mono, Poly, PrimeField, RationalField, Ring};
use rand::Rng;
use serde::Serialize;

use crate::enumerate::State;
use crate::lattice::{lattice_points, ExponentVector, MonomialSet, WeightVector, NVARS};
use crate::seeds;

/// Default bound `B` for rational coefficients drawn from `[−B, B] \ {0}`.
pub const DEFAULT_BOUND: i64 = 50;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormError {
    #[error("support mismatch: expected {expected} monomials, assembled {found}")]
    SupportMismatch { expected: usize, found: usize },
    #[error("limit does not exist: r·u < 0 for u = {0:?}")]
    LimitDoesNotExist(ExponentVector),
    #[error("polynomial is not a quintic form")]
    NotQuintic,
}

/// Fields we can draw random nonzero scalars from.
pub trait SampleField: Field {
    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Self::Elem;
}

impl SampleField for PrimeField {
    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, _bound: i64) -> u32 {
        rng.gen_range(1..self.modulus())
    }
}

impl SampleField for RationalField {
    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Self::Elem {
        let mut v = rng.gen_range(-bound..bound);
        if v >= 0 {
            v += 1;
        }
        self.from_i64(v)
    }
}

#[derive(Clone, Debug)]
pub struct QuinticForm<F: Field> {
    pub field: F,
    pub coeffs: BTreeMap<ExponentVector, F::Elem>,
}

impl<F: Field> PartialEq for QuinticForm<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> QuinticForm<F> {
    pub fn zero(field: F) -> Self {
        QuinticForm {
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: F,
        terms: impl IntoIterator<Item = (ExponentVector, F::Elem)>,
    ) -> Self {
        let mut f = Self::zero(field);
        for (u, c) in terms {
            f.add_term(u, c);
        }
        f
    }

    pub fn add_term(&mut self, u: ExponentVector, c: F::Elem) {
        let v = match self.coeffs.remove(&u) {
            Some(old) => self.field.add(&old, &c),
            None => c,
        };
        if !self.field.is_zero(&v) {
            self.coeffs.insert(u, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, u: &ExponentVector) -> F::Elem {
        self.coeffs
            .get(u)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn support(&self) -> MonomialSet {
        MonomialSet::from_points(self.coeffs.keys())
    }

    /// The polynomial ring in `x0..x4` over the form's field, degrevlex.
    pub fn ring(&self) -> Ring<F> {
        Ring::new(self.field.clone(), NVARS)
    }

    pub fn to_poly(&self) -> Poly<F::Elem> {
        self.ring().from_terms(
            self.coeffs
                .iter()
                .map(|(u, c)| (to_mono(u), c.clone()))
                .collect(),
        )
    }

    pub fn from_poly(field: F, p: &Poly<F::Elem>) -> Result<Self, FormError> {
        let mut f = Self::zero(field);
        for (m, c) in &p.terms {
            if m.degree() != 5 || (NVARS..8).any(|i| m.exp(i) != 0) {
                return Err(FormError::NotQuintic);
            }
            let e = [0, 1, 2, 3, 4].map(|i| m.exp(i) as u8);
            f.add_term(ExponentVector(e), c.clone());
        }
        Ok(f)
    }

    /// Coefficient vector in the canonical lattice order.
    pub fn coefficient_vector(&self) -> Vec<F::Elem> {
        lattice_points().iter().map(|u| self.coeff(u)).collect()
    }

    /// Substitutes `x ↦ g·x` for a 5×5 matrix `g`.
    pub fn transform(&self, g: &[Vec<F::Elem>]) -> Self {
        let ring = self.ring();
        let images: Vec<Poly<F::Elem>> = (0..NVARS)
            .map(|i| {
                ring.from_terms(
                    (0..NVARS)
                        .map(|j| (Mono::var(j), g[i][j].clone()))
                        .collect(),
                )
            })
            .collect();
        Self::from_poly(
            self.field.clone(),
            &ring.substitute(&self.to_poly(), &images),
        )
        .expect("linear substitution preserves degree")
    }

    pub fn to_text(&self) -> String {
        self.ring().to_text(&self.to_poly())
    }
}

pub fn to_mono(u: &ExponentVector) -> Mono {
    Mono::from_exps(&u.0.map(|x| x as u32))
}

/// A form with every monomial of `s` carrying an independent random nonzero
/// coefficient.
pub fn sample_generic_with<F: SampleField, R: Rng + ?Sized>(
    s: &MonomialSet,
    rng: &mut R,
    field: &F,
) -> QuinticForm<F> {
    QuinticForm::from_terms(
        field.clone(),
        s.iter()
            .map(|u| (u, field.sample_nonzero(rng, DEFAULT_BOUND))),
    )
}

pub fn sample_generic<F: SampleField>(s: &MonomialSet, seed: u64, field: &F) -> QuinticForm<F> {
    let mut rng = seeds::rng(seed, "sample_generic", 0);
    sample_generic_with(s, &mut rng, field)
}

/// Basis of the truncated space `𝒫^{m,β}_ρ`: exponent triples `v` with
/// `Σv = m` and `ρ·v ≥ β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedFormSpace {
    pub rho: [i64; 3],
    pub m: u32,
    pub beta: i64,
    pub basis: Vec<[u8; 3]>,
}

pub fn truncated_form_basis(rho: [i64; 3], m: u32, beta: i64) -> TruncatedFormSpace {
    let mut basis = Vec::new();
    for a in (0..=m).rev() {
        for b in (0..=m - a).rev() {
            let v = [a, b, m - a - b];
            let w: i64 = v.iter().zip(&rho).map(|(&x, &r)| x as i64 * r).sum();
            if w >= beta {
                basis.push(v.map(|x| x as u8));
            }
        }
    }
    TruncatedFormSpace {
        rho,
        m,
        beta,
        basis,
    }
}

/// `Σ_{a+b≤5} x3^a x4^b · P^{5−a−b, −a r3 − b r4}_{(r0,r1,r2)}` with fresh
/// generic coefficients.
pub fn assemble_uniform_form<F: SampleField>(
    state: &State,
    seed: u64,
    field: &F,
) -> Result<QuinticForm<F>, FormError> {
    let r = state.r.0;
    let rho = [r[0], r[1], r[2]];
    let mut rng = seeds::rng(seed, "uniform_form", state.k as u64);
    let mut f = QuinticForm::zero(field.clone());
    for a in 0..=5u32 {
        for b in 0..=5 - a {
            let space =
                truncated_form_basis(rho, 5 - a - b, -(a as i64) * r[3] - (b as i64) * r[4]);
            for v in space.basis {
                let u = ExponentVector([v[0], v[1], v[2], a as u8, b as u8]);
                f.add_term(u, field.sample_nonzero(&mut rng, DEFAULT_BOUND));
            }
        }
    }
    if f.support() != state.support {
        return Err(FormError::SupportMismatch {
            expected: state.support.len(),
            found: f.len(),
        });
    }
    Ok(f)
}

/// Limit of `λ_r(t)·f` as `t → 0`, where `x^u` scales by `t^{r·u}`: the
/// weight-zero part of `f`.
pub fn ops_limit<F: Field>(
    f: &QuinticForm<F>,
    r: &WeightVector,
) -> Result<QuinticForm<F>, FormError> {
    if let Some(u) = f.coeffs.keys().find(|u| u.dot(r) < 0) {
        return Err(FormError::LimitDoesNotExist(*u));
    }
    Ok(QuinticForm {
        field: f.field.clone(),
        coeffs: f
            .coeffs
            .iter()
            .filter(|(u, _)| u.dot(r) == 0)
            .map(|(u, c)| (*u, c.clone()))
            .collect(),
    })
}

/// The 5×5 Hessian matrix of `f` evaluated at `point`.
pub fn hessian_at<F: Field>(f: &QuinticForm<F>, point: &[F::Elem]) -> Matrix<F::Elem> {
    let ring = f.ring();
    let p = f.to_poly();
    let first: Vec<Poly<F::Elem>> = (0..NVARS).map(|i| ring.derivative(&p, i)).collect();
    let mut m = Matrix::filled(NVARS, NVARS, f.field.zero());
    for i in 0..NVARS {
        for j in i..NVARS {
            let v = ring.eval(&ring.derivative(&first[i], j), point);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

pub fn hessian_rank_at<F: Field>(f: &QuinticForm<F>, point: &[F::Elem]) -> usize {
    rank(&f.field, &hessian_at(f, point))
}

/// Matrix of the infinitesimal action of `sl_5` on `f`: column `c` holds the
/// coefficients of `A_c·f = Σ (A_c)_{ij} x_j ∂_i f` for the basis `E_ij`
/// (`i ≠ j`) followed by `E_ii − E_{i+1,i+1}`.
pub fn lie_action_matrix<F: Field>(f: &QuinticForm<F>) -> Matrix<F::Elem> {
    let ring = f.ring();
    let p = f.to_poly();
    let partials: Vec<Poly<F::Elem>> = (0..NVARS).map(|i| ring.derivative(&p, i)).collect();
    let x = |j: usize| ring.var(j);
    let mut columns: Vec<Poly<F::Elem>> = Vec::with_capacity(24);
    for i in 0..NVARS {
        for j in 0..NVARS {
            if i != j {
                columns.push(ring.mul(&x(j), &partials[i]));
            }
        }
    }
    for i in 0..NVARS - 1 {
        let a = ring.mul(&x(i), &partials[i]);
        let b = ring.mul(&x(i + 1), &partials[i + 1]);
        columns.push(ring.sub(&a, &b));
    }
    let pts = lattice_points();
    let mut m = Matrix::filled(pts.len(), columns.len(), f.field.zero());
    for (c, col) in columns.iter().enumerate() {
        for (mono, v) in &col.terms {
            let u = ExponentVector([0, 1, 2, 3, 4].map(|i| mono.exp(i) as u8));
            m.set(u.index(), c, v.clone());
        }
    }
    m
}

/// Dimension of the Lie algebra of the stabilizer of `f` in `SL_5`.
pub fn lie_stabilizer_dim<F: Field>(f: &QuinticForm<F>) -> usize {
    kernel_dim(&f.field, &lie_action_matrix(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::tabulated_states;
    use crate::lattice::{full_lattice, halfspace, Relation, ETA};

    fn fp() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn monomial_form(u: [u8; 5]) -> QuinticForm<PrimeField> {
        QuinticForm::from_terms(fp(), [(ExponentVector(u), 1)])
    }

    #[test]
    fn sampling_hits_support() {
        let s = MonomialSet::from_points([&ETA]);
        let f = sample_generic(&s, 3, &fp());
        assert_eq!(f.len(), 1);
        let states = tabulated_states();
        let g = sample_generic(&states[0].support, 11, &fp());
        assert_eq!(g.len(), 58);
        let h = sample_generic(&states[0].support, 12, &fp());
        assert_ne!(g, h);
        let q = sample_generic(&states[0].support, 11, &RationalField);
        assert_eq!(q.len(), 58);
    }

    #[test]
    fn truncated_examples() {
        assert_eq!(truncated_form_basis([3, 0, 0], 0, 0).basis, vec![[0, 0, 0]]);
        assert!(truncated_form_basis([3, 0, 0], 0, 1).basis.is_empty());
        let mut b = truncated_form_basis([1, 0, -1], 2, 0).basis;
        b.sort();
        let mut want = vec![[2, 0, 0], [1, 1, 0], [0, 2, 0], [1, 0, 1]];
        want.sort();
        assert_eq!(b, want);
    }

    #[test]
    fn uniform_form_has_full_support() {
        for s in tabulated_states() {
            let f = assemble_uniform_form(&s, 5, &fp()).unwrap();
            assert_eq!(f.support(), s.support, "k = {}", s.k);
            assert_eq!(f.len(), s.support_size);
        }
    }

    #[test]
    fn limit_restricts_to_wall() {
        let states = tabulated_states();
        let s = &states[0];
        let f = sample_generic(&s.support, 1, &fp());
        let lim = ops_limit(&f, &s.r).unwrap();
        assert_eq!(lim.support(), halfspace(&s.r, Relation::Eq));
        assert_eq!(ops_limit(&lim, &s.r).unwrap(), lim);
        let x0 = monomial_form([5, 0, 0, 0, 0]);
        assert!(ops_limit(&x0, &WeightVector([1, 0, 0, 0, -1]))
            .unwrap()
            .is_zero());
        assert!(ops_limit(&x0, &WeightVector([-1, 0, 0, 0, 1])).is_err());
    }

    #[test]
    fn hessian_examples() {
        let f = fp();
        assert_eq!(
            hessian_rank_at(&monomial_form([5, 0, 0, 0, 0]), &[1, 0, 0, 0, 0]),
            1
        );
        assert_eq!(
            hessian_rank_at(&monomial_form([1, 1, 1, 1, 1]), &[1, 1, 1, 1, 1]),
            5
        );
        let g = sample_generic(&full_lattice(), 2, &f);
        let p = [3u32, 7, 11, 13, 17];
        let cp: Vec<u32> = p.iter().map(|x| f.mul(x, &5)).collect();
        assert_eq!(hessian_rank_at(&g, &p), hessian_rank_at(&g, &cp));
    }

    #[test]
    fn lie_stabilizers() {
        let g = sample_generic(&full_lattice(), 4, &fp());
        assert_eq!(lie_stabilizer_dim(&g), 0);
        // x0^5 is fixed by every E_ij with i ≠ 0 and by the diagonal directions
        // that keep the x0 weight zero
        assert_eq!(lie_stabilizer_dim(&monomial_form([5, 0, 0, 0, 0])), 19);
        // the torus of x0x1x2x3x4 is 4-dimensional
        assert_eq!(lie_stabilizer_dim(&monomial_form([1, 1, 1, 1, 1])), 4);
    }
}
